"""
Command-line interface.

    qxpile gen {pure,vqe,sdkgates,range,standard} [options] OUT_DIR
    qxpile transpile IN_FILE --from D --to D [--strategy S] [--hub D] -o OUT_FILE
    qxpile check FILE_A FILE_B [--atol X]
    qxpile bench [CORPUS_DIR] --from D --to D [--strategies ...] [--iters N] --out DIR
    qxpile bench --profile --qubits 20 --gates 100:1000:100 --out DIR

Exit codes: 0 ok, 1 check mismatch, 2 usage/parse/manifest error,
3 transpilation failure, 4 circuit too large to verify.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import qasm2
from .dialects import ManifestError, find_dialect
from .harness import (
    DEFAULT_ATOL,
    DEFAULT_ITERATIONS,
    ExperimentPlan,
    format_summary,
    run_experiment,
    summarize,
    timing_profile,
    write_profile,
    write_records,
    write_summary,
)
from .randgen import (
    HEAParams,
    InvalidParams,
    generate,
    range_gates,
    read_corpus,
    sdk_gate_corpus,
    standard_corpus,
    write_corpus,
)
from .simulator import DEFAULT_MAX_QUBITS, TooLarge, circuit_unitary, max_phase_deviation
from .transpiler import DEFAULT_HUB, STRATEGIES, TranspileError, transpile

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2
EXIT_TRANSPILE = 3
EXIT_TOO_LARGE = 4


@dataclass
class CliConfig:
    seed: int = 0
    iterations: int = DEFAULT_ITERATIONS
    atol: float = DEFAULT_ATOL
    verify_max_qubits: int = DEFAULT_MAX_QUBITS
    dialect_paths: list[str] = field(default_factory=list)
    hub: str = DEFAULT_HUB
    jobs: int = 1


class UsageError(Exception):
    pass


def _error(msg: str, code: int) -> int:
    print(f"error: {msg}", file=sys.stderr)
    return code


def _gate_range(text: str) -> list[int]:
    try:
        lo, hi, step = (int(x) for x in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError("expected MIN:MAX:STEP (MAX inclusive)") from None
    if step < 1 or hi < lo:
        raise argparse.ArgumentTypeError("need MIN <= MAX and STEP >= 1")
    return list(range(lo, hi + 1, step))


def _strategies(text: str) -> list[str]:
    if text == "all":
        return list(STRATEGIES)
    out = [s.strip() for s in text.split(",") if s.strip()]
    bad = [s for s in out if s not in STRATEGIES]
    if bad:
        raise argparse.ArgumentTypeError(f"unknown strategy {bad}; choose from {STRATEGIES}")
    return out


def build_parser(cfg: CliConfig | None = None) -> argparse.ArgumentParser:
    cfg = cfg or CliConfig()
    p = argparse.ArgumentParser(prog="qxpile", description="Quantum circuit transpilation benchmarks")
    p.add_argument("--dialect-path", action="append", default=list(cfg.dialect_paths), metavar="DIR",
                   help="extra directory of dialect manifests (repeatable)")
    p.add_argument("--jobs", type=int, default=cfg.jobs, help="parallel workers for generation/verification")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a circuit corpus")
    g.add_argument("type", choices=["pure", "vqe", "sdkgates", "range", "standard"])
    g.add_argument("out_dir")
    g.add_argument("--seed", type=int, default=cfg.seed)
    g.add_argument("--count", type=int, default=50)
    g.add_argument("--qubits", type=int)
    g.add_argument("--gates", type=int)
    g.add_argument("--min", type=int, dest="min_gates")
    g.add_argument("--max", type=int, dest="max_gates")
    g.add_argument("--step", type=int, default=1)
    g.add_argument("--su2", type=int, help="HEA rotation kinds per block (vqe)")
    g.add_argument("--entanglement", choices=["linear", "circular"])
    g.add_argument("--reps", type=int)
    g.add_argument("--dialect", default="avalon", help="dialect for sdkgates/standard")

    t = sub.add_parser("transpile", help="transpile one QASM2 file")
    t.add_argument("in_file")
    t.add_argument("--from", dest="source", required=True)
    t.add_argument("--to", dest="target", required=True)
    t.add_argument("--strategy", choices=STRATEGIES, default="hybrid")
    t.add_argument("--hub", default=cfg.hub)
    t.add_argument("-o", "--out", dest="out_file", help="output file (stdout if omitted)")

    c = sub.add_parser("check", help="compare two QASM2 files up to global phase")
    c.add_argument("file_a")
    c.add_argument("file_b")
    c.add_argument("--atol", type=float, default=cfg.atol)
    c.add_argument("--max-qubits", type=int, default=cfg.verify_max_qubits)

    b = sub.add_parser("bench", help="benchmark strategies on a corpus")
    b.add_argument("corpus_dir", nargs="?")
    b.add_argument("--from", dest="source", default="avalon")
    b.add_argument("--to", dest="target", default="borealis")
    b.add_argument("--strategies", type=_strategies, default=list(STRATEGIES))
    b.add_argument("--hub", default=cfg.hub)
    b.add_argument("--iters", type=int, default=cfg.iterations)
    b.add_argument("--atol", type=float, default=cfg.atol)
    b.add_argument("--verify-max-qubits", type=int, default=cfg.verify_max_qubits)
    b.add_argument("--group-by", default="circuit_type,strategy",
                   help="comma-separated subset of circuit_type,dialect_pair,strategy")
    b.add_argument("--out", required=True, help="output directory")
    b.add_argument("--profile", action="store_true", help="run the gatecount timing profile instead")
    b.add_argument("--qubits", type=int, default=20)
    b.add_argument("--gates", type=_gate_range, default=_gate_range("100:1000:100"))
    b.add_argument("--seed", type=int, default=cfg.seed)
    return p


def _dialect(name: str, args):
    try:
        return find_dialect(name, args.dialect_path)
    except ManifestError as e:
        raise UsageError(f"dialect {name!r}: {e}") from None


def _read_qasm(path: str):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise UsageError(str(e)) from None
    try:
        return qasm2.parse(text)
    except qasm2.ParseError as e:
        raise UsageError(f"{path}:{e.line}:{e.column}: {e.kind}: {e.message}") from None


def cmd_gen(args) -> int:
    if args.type == "pure":
        if args.qubits is not None and args.gates is not None and args.gates < args.qubits:
            raise InvalidParams(f"--gates ({args.gates}) must be >= --qubits ({args.qubits})")
        circuits = generate("pure", args.seed, args.count, args.jobs,
                            nb_qubits=args.qubits, nb_gates=args.gates)
    elif args.type == "vqe":
        hea = None
        if args.su2 is not None or args.entanglement is not None or args.reps is not None:
            if None in (args.su2, args.entanglement, args.reps):
                raise InvalidParams("--su2, --entanglement and --reps must be given together")
            hea = HEAParams(args.su2, args.entanglement, args.reps)
        circuits = generate("vqe", args.seed, args.count, args.jobs, nb_qubits=args.qubits, hea=hea)
    elif args.type == "sdkgates":
        circuits = sdk_gate_corpus(_dialect(args.dialect, args), args.seed, args.count)
    elif args.type == "range":
        if None in (args.qubits, args.min_gates, args.max_gates):
            raise InvalidParams("range needs --qubits, --min and --max")
        circuits = range_gates(args.seed, args.qubits, args.min_gates, args.max_gates, args.step)
        circuits = [
            type(c)(c.nb_qubits, c.gates, name=f"PureRandom-{len(c)}g", circuit_type=c.circuit_type)
            for c in circuits
        ]
    else:
        circuits = standard_corpus(args.seed, _dialect(args.dialect, args), args.count, args.jobs)
    manifest = write_corpus(circuits, args.out_dir)
    print(f"wrote {len(circuits)} circuits to {manifest.parent}")
    return EXIT_OK


def cmd_transpile(args) -> int:
    circuit = _read_qasm(args.in_file)
    source = _dialect(args.source, args)
    target = _dialect(args.target, args)
    hub = _dialect(args.hub, args)
    extra = sorted(k.name for k in circuit.kinds - source.supported)
    if extra:
        return _error(f"source_mismatch: {extra} not in dialect {source.name}", EXIT_USAGE)
    try:
        out = transpile(circuit, args.strategy, target, hub=hub)
    except TranspileError as e:
        return _error(str(e), EXIT_TRANSPILE)
    text = qasm2.emit(out)
    if args.out_file:
        Path(args.out_file).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_check(args) -> int:
    a = _read_qasm(args.file_a)
    b = _read_qasm(args.file_b)
    if a.nb_qubits != b.nb_qubits:
        print(f"qubit counts differ: {a.nb_qubits} vs {b.nb_qubits}")
        return EXIT_MISMATCH
    try:
        ua = circuit_unitary(a, args.max_qubits)
        ub = circuit_unitary(b, args.max_qubits)
    except TooLarge as e:
        return _error(f"too_large: {e}", EXIT_TOO_LARGE)
    dev = max_phase_deviation(ua, ub, args.atol)
    equal = dev <= args.atol
    print(f"max deviation: {dev:.3e} ({'equal' if equal else 'NOT equal'} up to global phase at atol {args.atol:g})")
    return EXIT_OK if equal else EXIT_MISMATCH


def cmd_bench(args) -> int:
    source = _dialect(args.source, args)
    target = _dialect(args.target, args)
    hub = _dialect(args.hub, args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    if args.profile:
        records: list = []
        rows = timing_profile(args.seed, args.qubits, args.gates, args.strategies, source, target,
                              hub, args.iters, verify_max_qubits=args.verify_max_qubits, records=records)
        write_profile(rows, out / "profile.csv")
        write_records(records, out / "records.csv")
        for r in rows:
            t = "" if r.mean_time_s is None else f"{r.mean_time_s:.6f}"
            print(f"{r.gatecount:>6}  {r.strategy:<15} {t}")
        return EXIT_OK
    if args.corpus_dir is None:
        raise UsageError("bench needs CORPUS_DIR (or --profile)")
    if not (Path(args.corpus_dir) / "corpus.csv").is_file():
        raise UsageError(f"no corpus.csv in {args.corpus_dir}")
    try:
        corpus = read_corpus(args.corpus_dir)
    except qasm2.ParseError as e:
        raise UsageError(f"corpus: {e}") from None
    plan = ExperimentPlan(corpus, source, target, hub, args.strategies, args.iters, args.atol,
                          args.verify_max_qubits, jobs=args.jobs)
    records = run_experiment(plan)
    group_by = [g.strip() for g in args.group_by.split(",") if g.strip()]
    try:
        rows = summarize(records, group_by)
    except ValueError as e:
        raise UsageError(str(e)) from None
    write_records(records, out / "records.csv")
    write_summary(rows, out / "summary.csv")
    print(format_summary(rows))
    return EXIT_OK


COMMANDS = {"gen": cmd_gen, "transpile": cmd_transpile, "check": cmd_check, "bench": cmd_bench}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    if args.jobs < 1:
        return _error("--jobs must be >= 1", EXIT_USAGE)
    try:
        return COMMANDS[args.command](args)
    except (UsageError, InvalidParams, ValueError) as e:
        return _error(str(e), EXIT_USAGE)


if __name__ == "__main__":
    sys.exit(main())
