"""
Benchmark runner: strategy x circuit x iteration matrices and their summaries.

Timing covers the strategy call only; verification and depth/gatecount metrics
are computed afterwards. Mean times are taken over successful runs only.
"""
from __future__ import annotations

import csv
import gc
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields
from itertools import groupby
from pathlib import Path
from typing import Callable, Iterable, Sequence

from .dialects import Dialect, RuleDatabase, builtin_dialects, builtin_rules
from .ir import Circuit, GateInstance, depth, gatecount, structural_eq
from .randgen import PURE_RANDOM_KINDS, InvalidParams, derive_rng, pure_random
from .simulator import DEFAULT_MAX_QUBITS, CheckResult, check_transpilation
from .transpiler import DEFAULT_HUB, STRATEGIES, TranspileError, transpile

__all__ = [
    "ExperimentPlan",
    "ExperimentRecord",
    "SummaryRow",
    "ProfileRow",
    "EmptyInput",
    "METRICS",
    "RECORD_COLUMNS",
    "run_experiment",
    "summarize",
    "timing_profile",
    "write_records",
    "read_records",
    "write_summary",
    "write_profile",
    "format_summary",
]

DEFAULT_ITERATIONS = 5
DEFAULT_ATOL = 1e-7

# name -> function evaluated on both the input and the output circuit.
# Adding an entry here needs matching *_in/*_out fields on ExperimentRecord.
METRICS: dict[str, Callable[[Circuit], int]] = {"depth": depth, "gatecount": gatecount}

RECORD_COLUMNS = [
    "circuit_name",
    "circuit_type",
    "nb_qubits",
    "source_dialect",
    "target_dialect",
    "strategy",
    "iteration",
    "success",
    "checked",
    "correct",
    "time_s",
    "depth_in",
    "depth_out",
    "gatecount_in",
    "gatecount_out",
    "error_kind",
]

GROUP_KEYS = ("circuit_type", "dialect_pair", "strategy")


class EmptyInput(ValueError):
    pass


@dataclass
class ExperimentPlan:
    corpus: Sequence[Circuit]
    source_dialect: Dialect
    target_dialect: Dialect
    hub: Dialect | None = None
    strategies: Sequence[str] = STRATEGIES
    iterations: int = DEFAULT_ITERATIONS
    atol: float = DEFAULT_ATOL
    verify_max_qubits: int = DEFAULT_MAX_QUBITS
    rules: RuleDatabase | None = None
    warmup: bool = True
    jobs: int = 1

    def __post_init__(self):
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if self.atol <= 0:
            raise ValueError("atol must be positive")
        unknown = set(self.strategies) - set(STRATEGIES)
        if unknown:
            raise ValueError(f"unknown strategies {sorted(unknown)}")
        if self.hub is None:
            self.hub = builtin_dialects()[DEFAULT_HUB]
        if self.rules is None:
            self.rules = builtin_rules()


@dataclass
class ExperimentRecord:
    circuit_name: str
    circuit_type: str
    nb_qubits: int
    source_dialect: str
    target_dialect: str
    strategy: str
    iteration: int
    success: int
    checked: int = 0
    correct: int | None = None
    time_s: float | None = None
    depth_in: int | None = None
    depth_out: int | None = None
    gatecount_in: int | None = None
    gatecount_out: int | None = None
    error_kind: str = ""

    def to_row(self) -> list[str]:
        out = []
        for f in fields(self):
            v = getattr(self, f.name)
            if v is None:
                out.append("")
            elif isinstance(v, float):
                out.append(f"{v:.9g}")
            else:
                out.append(str(v))
        return out

    @classmethod
    def from_row(cls, row: dict[str, str]) -> ExperimentRecord:
        def opt_int(s):
            return int(s) if s != "" else None

        return cls(
            circuit_name=row["circuit_name"],
            circuit_type=row["circuit_type"],
            nb_qubits=int(row["nb_qubits"]),
            source_dialect=row["source_dialect"],
            target_dialect=row["target_dialect"],
            strategy=row["strategy"],
            iteration=int(row["iteration"]),
            success=int(row["success"]),
            checked=int(row["checked"]),
            correct=opt_int(row["correct"]),
            time_s=float(row["time_s"]) if row["time_s"] != "" else None,
            depth_in=opt_int(row["depth_in"]),
            depth_out=opt_int(row["depth_out"]),
            gatecount_in=opt_int(row["gatecount_in"]),
            gatecount_out=opt_int(row["gatecount_out"]),
            error_kind=row["error_kind"],
        )


def _timed(fn, *args):
    """Run ``fn(*args)`` once with the garbage collector paused; return (result|exc, seconds)."""
    gc_was_enabled = gc.isenabled()
    gc.disable()
    try:
        t0 = time.perf_counter()
        try:
            result = fn(*args)
        except TranspileError as e:
            result = e
        t1 = time.perf_counter()
    finally:
        if gc_was_enabled:
            gc.enable()
    return result, t1 - t0


def run_experiment(plan: ExperimentPlan) -> list[ExperimentRecord]:
    """Run every (circuit, strategy, iteration) of ``plan``; failures become records."""
    src, tgt = plan.source_dialect, plan.target_dialect

    def call(strategy):
        return lambda c: transpile(c, strategy, tgt, plan.rules, plan.hub)

    runners = {s: call(s) for s in plan.strategies}
    valid = [c for c in plan.corpus if c.kinds <= src.supported]
    if plan.warmup and valid:
        for s in plan.strategies:
            _timed(runners[s], valid[0])

    records: list[ExperimentRecord] = []
    to_verify: dict[tuple[int, str], tuple[Circuit, Circuit]] = {}
    pending: list[tuple[ExperimentRecord, tuple[int, str] | None]] = []

    for ci, c in enumerate(plan.corpus):
        base = dict(
            circuit_name=c.name,
            circuit_type=c.circuit_type,
            nb_qubits=c.nb_qubits,
            source_dialect=src.name,
            target_dialect=tgt.name,
        )
        metrics_in = {f"{m}_in": fn(c) for m, fn in METRICS.items()}
        mismatch = not c.kinds <= src.supported
        for s in plan.strategies:
            for it in range(plan.iterations):
                if mismatch:
                    rec = ExperimentRecord(**base, strategy=s, iteration=it, success=0,
                                           error_kind="source_mismatch", **metrics_in)
                    pending.append((rec, None))
                    continue
                result, elapsed = _timed(runners[s], c)
                if isinstance(result, TranspileError):
                    rec = ExperimentRecord(**base, strategy=s, iteration=it, success=0,
                                           time_s=elapsed, error_kind=result.kind, **metrics_in)
                    pending.append((rec, None))
                    continue
                rec = ExperimentRecord(
                    **base, strategy=s, iteration=it, success=1, time_s=elapsed, **metrics_in,
                    **{f"{m}_out": fn(result) for m, fn in METRICS.items()},
                )
                # strategies are deterministic: verify one output per (circuit, strategy)
                key = (ci, s)
                if key not in to_verify:
                    to_verify[key] = (c, result)
                elif not structural_eq(to_verify[key][1], result, 0.0):
                    key = (ci, f"{s}#{it}")
                    to_verify[key] = (c, result)
                pending.append((rec, key))

    def verify(pair) -> CheckResult:
        return check_transpilation(pair[0], pair[1], plan.atol, plan.verify_max_qubits)

    keys = list(to_verify)
    if plan.jobs > 1:
        with ThreadPoolExecutor(max_workers=plan.jobs) as pool:
            results = dict(zip(keys, pool.map(verify, (to_verify[k] for k in keys))))
    else:
        results = {k: verify(to_verify[k]) for k in keys}

    for rec, key in pending:
        if key is not None:
            res = results[key]
            rec.checked = int(res.checked)
            rec.correct = int(res.correct) if res.checked else None
        records.append(rec)
    return records


@dataclass
class SummaryRow:
    keys: dict[str, str]
    correct: float | None
    fails: float
    time_s: float | None
    count: int = field(default=0)


def _key_values(rec: ExperimentRecord, group_by: Sequence[str]) -> tuple:
    out = []
    for k in group_by:
        if k == "dialect_pair":
            out += [rec.source_dialect, rec.target_dialect]
        else:
            out.append(getattr(rec, k))
    return tuple(out)


def _key_columns(group_by: Sequence[str]) -> list[str]:
    cols = []
    for k in group_by:
        cols += ["source_dialect", "target_dialect"] if k == "dialect_pair" else [k]
    return cols


def _mean(xs):
    xs = list(xs)
    return sum(xs) / len(xs) if xs else None


def summarize(records: Sequence[ExperimentRecord], group_by: Iterable[str] = ("strategy",)) -> list[SummaryRow]:
    """Group records and average them.

    ``correct`` is averaged over checked successes, ``fails`` over all runs,
    ``time_s`` over successes only (None when a group has none).
    """
    if not records:
        raise EmptyInput("no records to summarize")
    group_by = set(group_by) | {"strategy"}
    unknown = group_by - set(GROUP_KEYS)
    if unknown:
        raise ValueError(f"unknown grouping keys {sorted(unknown)}")
    ordered = [k for k in GROUP_KEYS if k in group_by]
    cols = _key_columns(ordered)

    def key(r):
        return _key_values(r, ordered)

    rows = []
    for kv, grp in groupby(sorted(records, key=key), key=key):
        grp = list(grp)
        ok = [r for r in grp if r.success]
        rows.append(
            SummaryRow(
                keys=dict(zip(cols, kv)),
                correct=_mean(r.correct for r in ok if r.checked),
                fails=1 - sum(r.success for r in grp) / len(grp),
                time_s=_mean(r.time_s for r in ok),
                count=len(grp),
            )
        )
    return rows


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return f"{v:.9g}"
    return str(v)


def write_records(records: Sequence[ExperimentRecord], path: str | os.PathLike) -> None:
    with open(path, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(RECORD_COLUMNS)
        for r in records:
            w.writerow(r.to_row())


def read_records(path: str | os.PathLike) -> list[ExperimentRecord]:
    with open(path, newline="", encoding="utf-8") as f:
        return [ExperimentRecord.from_row(row) for row in csv.DictReader(f)]


SUMMARY_NOTE = "# correct: mean over checked successes; fails: mean of (1 - success); time_s: mean over successful runs only"


def write_summary(rows: Sequence[SummaryRow], path: str | os.PathLike) -> None:
    cols = list(rows[0].keys) if rows else []
    with open(path, "w", newline="", encoding="utf-8") as f:
        f.write(SUMMARY_NOTE + "\n")
        w = csv.writer(f, lineterminator="\n")
        w.writerow(cols + ["correct", "fails", "time_s"])
        for r in rows:
            w.writerow([r.keys[c] for c in cols] + [_fmt(r.correct), _fmt(r.fails), _fmt(r.time_s)])


def format_summary(rows: Sequence[SummaryRow]) -> str:
    """Fixed-width text table, one line per row."""
    cols = list(rows[0].keys) if rows else []
    header = cols + ["correct", "fails", "time_s"]
    body = [
        [str(r.keys[c]) for c in cols]
        + [
            "" if r.correct is None else f"{r.correct:.6f}",
            f"{r.fails:.6f}",
            "" if r.time_s is None else f"{r.time_s:.6f}",
        ]
        for r in rows
    ]
    widths = [max(len(x) for x in col) for col in zip(header, *body)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths))]
    lines += ["  ".join(x.ljust(w) for x, w in zip(line, widths)) for line in body]
    return "\n".join(lines)


@dataclass(frozen=True)
class ProfileRow:
    gatecount: int
    strategy: str
    mean_time_s: float | None


def _transpilable_kinds(source, target, hub, rules, strategies):
    ok = []
    for k in PURE_RANDOM_KINDS:
        if k not in source.supported:
            continue
        probe = Circuit(k.arity, [GateInstance(k, tuple(range(k.arity)), (0.5,) * k.param_count)])
        try:
            for s in strategies:
                transpile(probe, s, target, rules, hub)
        except TranspileError:
            continue
        ok.append(k)
    return ok


def timing_profile(
    seed: int,
    nb_qubits: int,
    gatecounts: Sequence[int],
    strategies: Sequence[str] = STRATEGIES,
    source: Dialect | None = None,
    target: Dialect | None = None,
    hub: Dialect | None = None,
    iterations: int = DEFAULT_ITERATIONS,
    rules: RuleDatabase | None = None,
    verify_max_qubits: int = DEFAULT_MAX_QUBITS,
    records: list | None = None,
) -> list[ProfileRow]:
    """Mean strategy time per gatecount bucket on PureRandom circuits.

    Circuits only use kinds every compared strategy can transpile, so each
    bucket's mean covers the same work. Pass a list as ``records`` to also
    collect the underlying :class:`ExperimentRecord` rows.
    """
    dialects = builtin_dialects()
    source = source or dialects["avalon"]
    target = target or dialects["borealis"]
    hub = hub or dialects[DEFAULT_HUB]
    rules = rules or builtin_rules()
    if nb_qubits < 2:
        raise InvalidParams("nb_qubits must be >= 2")
    if not gatecounts or min(gatecounts) < nb_qubits:
        raise InvalidParams("every gatecount must be >= nb_qubits")
    kinds = _transpilable_kinds(source, target, hub, rules, strategies)
    if not kinds:
        raise InvalidParams("no gate kind is transpilable by every strategy")

    corpus = [
        Circuit(
            nb_qubits,
            pure_random(derive_rng(seed, i), nb_qubits, n, kinds=kinds).gates,
            name=f"profile-{i:03d}-{n}",
            circuit_type="PureRandom",
        )
        for i, n in enumerate(gatecounts)
    ]
    # One pass over every bucket per iteration, so a transient slowdown is
    # spread across buckets instead of landing on a single gatecount.
    recs = []
    for it in range(iterations):
        plan = ExperimentPlan(
            corpus, source, target, hub, strategies, 1,
            verify_max_qubits=verify_max_qubits, rules=rules, warmup=it == 0,
        )
        for r in run_experiment(plan):
            r.iteration = it
            recs.append(r)
    index = {c.name: i for i, c in enumerate(corpus)}
    order = {s: i for i, s in enumerate(strategies)}
    recs.sort(key=lambda r: (index[r.circuit_name], order[r.strategy], r.iteration))
    if records is not None:
        records.extend(recs)
    rows = []
    for c, n in zip(corpus, gatecounts):
        for s in strategies:
            ts = [r.time_s for r in recs if r.circuit_name == c.name and r.strategy == s and r.success]
            rows.append(ProfileRow(n, s, _mean(ts)))
    return rows


def write_profile(rows: Sequence[ProfileRow], path: str | os.PathLike) -> None:
    with open(path, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["gatecount", "strategy", "mean_time_s"])
        for r in rows:
            w.writerow([r.gatecount, r.strategy, _fmt(r.mean_time_s)])
