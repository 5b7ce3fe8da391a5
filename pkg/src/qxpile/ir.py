"""
Core circuit IR shared by the parser, generators, transpilers and simulator.

Contains:
    - GateKind: closed gate vocabulary (name, arity, param_count)
    - GateInstance: one gate applied to concrete qubits with bound angles
    - Circuit: immutable ordered gate list over nb_qubits
    - depth / gatecount / idle_qubits / structural_eq
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Iterable, Sequence


@dataclass(frozen=True)
class GateKind:
    name: str
    arity: int
    param_count: int

    def __repr__(self) -> str:
        return f"GateKind({self.name})"


def _kinds(names: str, arity: int, param_count: int) -> list[GateKind]:
    return [GateKind(n, arity, param_count) for n in names.split()]


# Canonical order; everything that enumerates kinds (manifests, per-gate corpora) follows it.
_VOCABULARY = (
    _kinds("x y z h s sdg t tdg sx sxdg", 1, 0)
    + _kinds("p rx ry rz u1", 1, 1)
    + _kinds("u2", 1, 2)
    + _kinds("u3", 1, 3)
    + _kinds("cx cy cz ch swap iswap ecr csx", 2, 0)
    + _kinds("crx cry crz cp rxx ryy rzz rzx", 2, 1)
    + _kinds("ccx ccz cswap", 3, 0)
)

KINDS: dict[str, GateKind] = {k.name: k for k in _VOCABULARY}

# Input-only spellings.
ALIASES = {"u": "u3", "U": "u3", "CX": "cx"}

ROTATION_KINDS = frozenset(
    KINDS[n] for n in "p rx ry rz u1 crx cry crz cp rxx ryy rzz rzx".split()
)


def get_kind(name: str) -> GateKind:
    """Look up a gate kind by name (aliases accepted). Raises KeyError if unknown."""
    return KINDS[ALIASES.get(name, name)]


@dataclass(frozen=True)
class GateInstance:
    kind: GateKind
    qubits: tuple[int, ...]
    params: tuple[float, ...] = ()

    def __post_init__(self):
        if isinstance(self.kind, str):
            object.__setattr__(self, "kind", get_kind(self.kind))
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        if len(self.qubits) != self.kind.arity:
            raise ValueError(
                f"{self.kind.name} acts on {self.kind.arity} qubit(s), got {len(self.qubits)}"
            )
        if len(set(self.qubits)) != len(self.qubits):
            raise ValueError(f"{self.kind.name}: repeated qubit operand {self.qubits}")
        if any(q < 0 for q in self.qubits):
            raise ValueError(f"{self.kind.name}: negative qubit index {self.qubits}")
        if len(self.params) != self.kind.param_count:
            raise ValueError(
                f"{self.kind.name} takes {self.kind.param_count} parameter(s), got {len(self.params)}"
            )
        if not all(math.isfinite(p) for p in self.params):
            raise ValueError(f"{self.kind.name}: non-finite parameter {self.params}")

    @property
    def name(self) -> str:
        return self.kind.name

    def __repr__(self) -> str:
        args = f"({', '.join(f'{p:.6g}' for p in self.params)})" if self.params else ""
        return f"{self.kind.name}{args} {','.join(f'q{q}' for q in self.qubits)}"


def gate(name: str, *qubits: int, params: Sequence[float] = ()) -> GateInstance:
    """Shorthand constructor: ``gate("cx", 0, 1)``, ``gate("rx", 0, params=[0.5])``."""
    return GateInstance(get_kind(name), qubits, tuple(params))


@dataclass(frozen=True)
class Circuit:
    nb_qubits: int
    gates: tuple[GateInstance, ...] = ()
    name: str = ""
    circuit_type: str = ""

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        if self.nb_qubits < 1:
            raise ValueError(f"nb_qubits must be >= 1, got {self.nb_qubits}")
        for g in self.gates:
            if not isinstance(g, GateInstance):
                raise TypeError(f"expected GateInstance, got {type(g).__name__}")
            if max(g.qubits) >= self.nb_qubits:
                raise ValueError(f"{g!r}: qubit index out of range for {self.nb_qubits} qubits")

    def __len__(self) -> int:
        return len(self.gates)

    def __iter__(self):
        return iter(self.gates)

    def append(self, *gates: GateInstance) -> Circuit:
        """Return a new circuit with ``gates`` added at the end."""
        return replace(self, gates=self.gates + gates)

    def with_gates(self, gates: Iterable[GateInstance]) -> Circuit:
        return replace(self, gates=tuple(gates))

    @property
    def kinds(self) -> set[GateKind]:
        return {g.kind for g in self.gates}


def depth(c: Circuit) -> int:
    level = [0] * c.nb_qubits
    for g in c.gates:
        d = 1 + max(level[q] for q in g.qubits)
        for q in g.qubits:
            level[q] = d
    return max(level, default=0)


def gatecount(c: Circuit) -> int:
    return len(c.gates)


def idle_qubits(c: Circuit) -> set[int]:
    used = {q for g in c.gates for q in g.qubits}
    return set(range(c.nb_qubits)) - used


def structural_eq(a: Circuit, b: Circuit, param_tol: float = 1e-12) -> bool:
    """Same width and gate-for-gate identical (kind, qubits), params equal within ``param_tol``.

    Name and circuit_type are ignored.
    """
    if a.nb_qubits != b.nb_qubits or len(a.gates) != len(b.gates):
        return False
    for ga, gb in zip(a.gates, b.gates):
        if ga.kind != gb.kind or ga.qubits != gb.qubits:
            return False
        if any(abs(pa - pb) > param_tol for pa, pb in zip(ga.params, gb.params)):
            return False
    return True
