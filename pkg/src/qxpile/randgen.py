"""
Seeded random circuit generators.

Every generator takes a ``seed`` that is either an integer or a
``numpy.random.Generator``. Corpus builders derive one independent stream per
circuit from ``(seed, index)`` so circuits can be generated in any order.
"""
from __future__ import annotations

import csv
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from . import qasm2
from .dialects import Dialect
from .ir import KINDS, Circuit, GateInstance, GateKind, gatecount

__all__ = [
    "InvalidParams",
    "HEAParams",
    "PURE_RANDOM_KINDS",
    "derive_rng",
    "pure_random",
    "range_gates",
    "vqe",
    "dialect_gate_circuits",
    "generate",
    "sdk_gate_corpus",
    "standard_corpus",
    "write_corpus",
    "read_corpus",
]

PURE_RANDOM_KINDS: tuple[GateKind, ...] = tuple(
    KINDS[n]
    for n in (
        "x y z h s sdg t tdg sx sxdg p rx ry rz "
        "cx cy cz ch swap crx cry crz cp rxx rzz"
    ).split()
)

QUBIT_RANGE = (2, 10)
GATE_RANGE = (2, 100)
SU2_RANGE = (1, 3)
REPS_RANGE = (1, 4)
ENTANGLEMENTS = ("linear", "circular")

CORPUS_MANIFEST = "corpus.csv"
CORPUS_COLUMNS = ["circuit_name", "circuit_type", "nb_qubits", "gatecount", "file"]


class InvalidParams(ValueError):
    pass


def derive_rng(seed, index: int | None = None) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    if index is None:
        return np.random.default_rng(seed)
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))


def _angles(rng: np.random.Generator, n: int) -> tuple[float, ...]:
    return tuple(float(a) for a in rng.uniform(0.0, 2 * np.pi, n))


def _draw_kind(rng, kinds: Sequence[GateKind], nb_qubits: int) -> GateKind:
    while True:
        k = kinds[rng.integers(len(kinds))]
        if k.arity <= nb_qubits:
            return k


def pure_random(
    seed,
    nb_qubits: int | None = None,
    nb_gates: int | None = None,
    kinds: Sequence[GateKind] = PURE_RANDOM_KINDS,
) -> Circuit:
    """Unstructured random circuit with no idle qubits.

    Unset sizes are drawn uniformly: qubits in [2, 10], gates in [2, 100]
    (never below the qubit count). The first gates cover every qubit
    (operands drawn from idle qubits first); the rest are uniform.
    """
    rng = derive_rng(seed)
    if nb_qubits is not None and nb_qubits < 2:
        raise InvalidParams(f"nb_qubits must be >= 2, got {nb_qubits}")
    if nb_qubits is not None and nb_gates is not None and nb_gates < nb_qubits:
        raise InvalidParams(f"nb_gates ({nb_gates}) must be >= nb_qubits ({nb_qubits})")
    if nb_gates is not None and nb_gates < 2:
        raise InvalidParams(f"nb_gates must be >= 2, got {nb_gates}")
    if not kinds or min(k.arity for k in kinds) > 2:
        raise InvalidParams("kind set must contain at least one 1- or 2-qubit kind")
    if nb_qubits is None:
        hi = QUBIT_RANGE[1] if nb_gates is None else min(QUBIT_RANGE[1], nb_gates)
        nb_qubits = int(rng.integers(QUBIT_RANGE[0], hi + 1))
    if nb_gates is None:
        nb_gates = int(rng.integers(max(GATE_RANGE[0], nb_qubits), GATE_RANGE[1] + 1))

    gates = []
    idle = list(range(nb_qubits))
    while idle and len(gates) < nb_gates:
        k = _draw_kind(rng, kinds, nb_qubits)
        from_idle = rng.permutation(idle)[: k.arity].tolist()
        rest = [q for q in range(nb_qubits) if q not in from_idle]
        extra = rng.choice(rest, k.arity - len(from_idle), replace=False).tolist()
        qubits = from_idle + extra
        gates.append(GateInstance(k, qubits, _angles(rng, k.param_count)))
        idle = [q for q in idle if q not in qubits]
    while len(gates) < nb_gates:
        k = _draw_kind(rng, kinds, nb_qubits)
        qubits = rng.choice(nb_qubits, k.arity, replace=False).tolist()
        gates.append(GateInstance(k, qubits, _angles(rng, k.param_count)))
    return Circuit(nb_qubits, gates, name="PureRandom", circuit_type="PureRandom")


def range_gates(
    seed, nb_qubits: int, min_nb_gates: int, max_nb_gates: int, gate_step: int = 1
) -> list[Circuit]:
    """One PureRandom circuit per gatecount in ``range(min_nb_gates, max_nb_gates, gate_step)``."""
    if not nb_qubits <= min_nb_gates < max_nb_gates:
        raise InvalidParams(
            f"need nb_qubits <= min_nb_gates < max_nb_gates, got {nb_qubits}, {min_nb_gates}, {max_nb_gates}"
        )
    if gate_step < 1:
        raise InvalidParams(f"gate_step must be >= 1, got {gate_step}")
    counts = range(min_nb_gates, max_nb_gates, gate_step)
    return [pure_random(derive_rng(seed, i), nb_qubits, n) for i, n in enumerate(counts)]


@dataclass(frozen=True)
class HEAParams:
    nb_su2_gates: int
    entanglement: str
    reps: int

    def __post_init__(self):
        if not SU2_RANGE[0] <= self.nb_su2_gates <= SU2_RANGE[1]:
            raise InvalidParams(f"nb_su2_gates must be in {list(SU2_RANGE)}")
        if self.entanglement not in ENTANGLEMENTS:
            raise InvalidParams(f"entanglement must be one of {ENTANGLEMENTS}")
        if self.reps < 1:
            raise InvalidParams("reps must be >= 1")

    @classmethod
    def random(cls, rng: np.random.Generator) -> HEAParams:
        return cls(
            nb_su2_gates=int(rng.integers(SU2_RANGE[0], SU2_RANGE[1] + 1)),
            entanglement=ENTANGLEMENTS[rng.integers(2)],
            reps=int(rng.integers(REPS_RANGE[0], REPS_RANGE[1] + 1)),
        )


_SU2_KINDS = ("rx", "ry", "rz")


def vqe(seed, nb_qubits: int | None = None, hea: HEAParams | None = None) -> Circuit:
    """Hardware-efficient ansatz followed by a random Pauli-basis change.

    Layout: ``reps`` x [rotations; cx entanglers] + final rotations, then per
    qubit h (X), sdg+h (Y) or nothing (Z, I).
    """
    rng = derive_rng(seed)
    if nb_qubits is None:
        nb_qubits = int(rng.integers(QUBIT_RANGE[0], QUBIT_RANGE[1] + 1))
    elif nb_qubits < 2:
        raise InvalidParams(f"nb_qubits must be >= 2, got {nb_qubits}")
    if hea is None:
        hea = HEAParams.random(rng)
    rot = [KINDS[k] for k in rng.choice(_SU2_KINDS, hea.nb_su2_gates, replace=False)]

    pairs = [(i, i + 1) for i in range(nb_qubits - 1)]
    if hea.entanglement == "circular":
        pairs.append((nb_qubits - 1, 0))

    gates = []

    def rotation_block():
        for k in rot:
            for q in range(nb_qubits):
                gates.append(GateInstance(k, (q,), _angles(rng, 1)))

    for _ in range(hea.reps):
        rotation_block()
        gates.extend(GateInstance(KINDS["cx"], p) for p in pairs)
    rotation_block()

    for q, pauli in enumerate(rng.choice(list("IXYZ"), nb_qubits)):
        if pauli == "X":
            gates.append(GateInstance(KINDS["h"], (q,)))
        elif pauli == "Y":
            gates.append(GateInstance(KINDS["sdg"], (q,)))
            gates.append(GateInstance(KINDS["h"], (q,)))
    return Circuit(nb_qubits, gates, name="VQE", circuit_type="VQE")


def dialect_gate_circuits(d: Dialect, seed) -> dict[str, Circuit]:
    """One single-gate circuit per supported kind, keyed ``"<dialect>-<kind>"``."""
    rng = derive_rng(seed)
    out = {}
    for k in KINDS.values():
        if k not in d.supported:
            continue
        name = f"{d.name}-{k.name}"
        g = GateInstance(k, tuple(range(k.arity)), _angles(rng, k.param_count))
        out[name] = Circuit(k.arity, (g,), name=name, circuit_type="SDKGate")
    return out


def _labelled(c: Circuit, i: int) -> Circuit:
    return Circuit(c.nb_qubits, c.gates, name=f"{c.name}-{i:03d}", circuit_type=c.circuit_type)


def _gen_one(args) -> Circuit:
    kind, seed, i, opts = args
    rng = derive_rng(seed, i)
    if kind == "pure":
        return _labelled(pure_random(rng, opts.get("nb_qubits"), opts.get("nb_gates")), i)
    if kind == "vqe":
        return _labelled(vqe(rng, opts.get("nb_qubits"), opts.get("hea")), i)
    raise ValueError(kind)


def generate(kind: str, seed: int, count: int, jobs: int = 1, **opts) -> list[Circuit]:
    """``count`` circuits of type ``pure`` or ``vqe``; output is independent of ``jobs``."""
    tasks = [(kind, seed, i, opts) for i in range(count)]
    if jobs > 1 and count > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_gen_one, tasks))
    return [_gen_one(t) for t in tasks]


def sdk_gate_corpus(d: Dialect, seed: int, runs: int) -> list[Circuit]:
    """``runs`` parameter resamples of every per-gate circuit of ``d``."""
    out = []
    for r in range(runs):
        for c in dialect_gate_circuits(d, derive_rng(seed, r)).values():
            out.append(_labelled(c, r))
    return out


def standard_corpus(seed: int, source: Dialect, count: int = 50, jobs: int = 1) -> list[Circuit]:
    """``count`` PureRandom + ``count`` VQE + ``count`` resamples of every gate of ``source``."""
    # distinct sub-seeds per family so the three families never share a stream
    ss = np.random.SeedSequence(seed).spawn(3)
    sub = [int(s.generate_state(1, dtype=np.uint64)[0]) for s in ss]
    return (
        generate("pure", sub[0], count, jobs)
        + generate("vqe", sub[1], count, jobs)
        + sdk_gate_corpus(source, sub[2], count)
    )


def write_corpus(circuits: Sequence[Circuit], out_dir: str | os.PathLike) -> Path:
    """Write one ``.qasm`` file per circuit plus ``corpus.csv``; returns the manifest path."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    manifest = out / CORPUS_MANIFEST
    with open(manifest, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(CORPUS_COLUMNS)
        for i, c in enumerate(circuits):
            fname = f"{i:05d}_{c.name or 'circuit'}.qasm"
            (out / fname).write_text(qasm2.emit(c), encoding="utf-8")
            w.writerow([c.name, c.circuit_type, c.nb_qubits, gatecount(c), fname])
    return manifest


def read_corpus(corpus_dir: str | os.PathLike) -> list[Circuit]:
    """Load every circuit listed in ``corpus.csv`` (names and types from the manifest)."""
    root = Path(corpus_dir)
    circuits = []
    with open(root / CORPUS_MANIFEST, newline="", encoding="utf-8") as f:
        for row in csv.DictReader(f):
            c = qasm2.parse((root / row["file"]).read_text(encoding="utf-8"))
            circuits.append(
                Circuit(c.nb_qubits, c.gates, name=row["circuit_name"], circuit_type=row["circuit_type"])
            )
    return circuits
