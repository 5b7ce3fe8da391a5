"""
Decomposition rules: one gate kind rewritten as a short sequence of other gates.

Every identity here holds up to global phase; soundness is checked numerically
by the test-suite against the simulator, not assumed. Operand slots refer to
the positions of the rewritten gate's qubits (0 = first operand / control).

``ecr`` intentionally has no rule.
"""
from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass
from functools import lru_cache
from math import pi
from typing import Callable, Iterator

from ..ir import KINDS, GateInstance, GateKind


@dataclass(frozen=True)
class TemplateGate:
    kind: GateKind
    slots: tuple[int, ...]
    params: Callable[..., tuple[float, ...]] | None = None

    def bind(self, qubits: tuple[int, ...], params: tuple[float, ...]) -> GateInstance:
        values = self.params(*params) if self.params is not None else ()
        return GateInstance(self.kind, tuple(qubits[s] for s in self.slots), values)


@dataclass(frozen=True)
class RewriteRule:
    lhs: GateKind
    rhs: tuple[TemplateGate, ...]

    def apply(self, g: GateInstance) -> list[GateInstance]:
        if g.kind != self.lhs:
            raise ValueError(f"rule for {self.lhs.name} applied to {g.kind.name}")
        return [t.bind(g.qubits, g.params) for t in self.rhs]


class RuleDatabase(Mapping):
    """Read-only mapping GateKind -> RewriteRule."""

    def __init__(self, rules: Mapping[GateKind, RewriteRule] | None = None):
        self._rules = dict(rules or {})
        for k, r in self._rules.items():
            if r.lhs != k:
                raise ValueError(f"rule keyed by {k.name} rewrites {r.lhs.name}")

    def __getitem__(self, kind: GateKind) -> RewriteRule:
        return self._rules[kind]

    def __iter__(self) -> Iterator[GateKind]:
        return iter(self._rules)

    def __len__(self) -> int:
        return len(self._rules)

    def __repr__(self) -> str:
        return f"RuleDatabase({sorted(k.name for k in self._rules)})"

    def merged(self, extra: Mapping[GateKind, RewriteRule]) -> RuleDatabase:
        return RuleDatabase({**self._rules, **extra})


def _g(name: str, *slots: int, params=None) -> TemplateGate:
    return TemplateGate(KINDS[name], slots, params)


def _const(*values: float):
    return lambda *_: values


_A, _B, _C = 0, 1, 2

_TOFFOLI = (
    _g("h", _C),
    _g("cx", _B, _C),
    _g("tdg", _C),
    _g("cx", _A, _C),
    _g("t", _C),
    _g("cx", _B, _C),
    _g("tdg", _C),
    _g("cx", _A, _C),
    _g("t", _B),
    _g("t", _C),
    _g("h", _C),
    _g("cx", _A, _B),
    _g("t", _A),
    _g("tdg", _B),
    _g("cx", _A, _B),
)

_RULES: dict[str, tuple[TemplateGate, ...]] = {
    # single-qubit
    "p": (_g("rz", _A, params=lambda lam: (lam,)),),
    "u1": (_g("rz", _A, params=lambda lam: (lam,)),),
    "u3": (
        _g("rz", _A, params=lambda th, ph, lam: (lam,)),
        _g("ry", _A, params=lambda th, ph, lam: (th,)),
        _g("rz", _A, params=lambda th, ph, lam: (ph,)),
    ),
    "u2": (
        _g("rz", _A, params=lambda ph, lam: (lam,)),
        _g("ry", _A, params=_const(pi / 2)),
        _g("rz", _A, params=lambda ph, lam: (ph,)),
    ),
    "s": (_g("rz", _A, params=_const(pi / 2)),),
    "sdg": (_g("rz", _A, params=_const(-pi / 2)),),
    "t": (_g("rz", _A, params=_const(pi / 4)),),
    "tdg": (_g("rz", _A, params=_const(-pi / 4)),),
    "sx": (_g("rx", _A, params=_const(pi / 2)),),
    "sxdg": (_g("rx", _A, params=_const(-pi / 2)),),
    "x": (_g("rx", _A, params=_const(pi)),),
    "y": (_g("ry", _A, params=_const(pi)),),
    "z": (_g("rz", _A, params=_const(pi)),),
    "h": (_g("ry", _A, params=_const(pi / 2)), _g("rx", _A, params=_const(pi))),
    # two-qubit, fixed
    "cy": (_g("sdg", _B), _g("cx", _A, _B), _g("s", _B)),
    "cz": (_g("h", _B), _g("cx", _A, _B), _g("h", _B)),
    "ch": (
        _g("s", _B),
        _g("h", _B),
        _g("t", _B),
        _g("cx", _A, _B),
        _g("tdg", _B),
        _g("h", _B),
        _g("sdg", _B),
    ),
    "swap": (_g("cx", _A, _B), _g("cx", _B, _A), _g("cx", _A, _B)),
    "iswap": (
        _g("s", _A),
        _g("s", _B),
        _g("h", _A),
        _g("cx", _A, _B),
        _g("cx", _B, _A),
        _g("h", _B),
    ),
    "csx": (_g("h", _B), _g("cp", _A, _B, params=_const(pi / 2)), _g("h", _B)),
    # two-qubit, parametric
    "crz": (
        _g("rz", _B, params=lambda t: (t / 2,)),
        _g("cx", _A, _B),
        _g("rz", _B, params=lambda t: (-t / 2,)),
        _g("cx", _A, _B),
    ),
    "cry": (
        _g("ry", _B, params=lambda t: (t / 2,)),
        _g("cx", _A, _B),
        _g("ry", _B, params=lambda t: (-t / 2,)),
        _g("cx", _A, _B),
    ),
    "crx": (_g("h", _B), _g("crz", _A, _B, params=lambda t: (t,)), _g("h", _B)),
    "cp": (
        _g("p", _A, params=lambda t: (t / 2,)),
        _g("cx", _A, _B),
        _g("p", _B, params=lambda t: (-t / 2,)),
        _g("cx", _A, _B),
        _g("p", _B, params=lambda t: (t / 2,)),
    ),
    "rzz": (_g("cx", _A, _B), _g("rz", _B, params=lambda t: (t,)), _g("cx", _A, _B)),
    "rxx": (
        _g("h", _A),
        _g("h", _B),
        _g("rzz", _A, _B, params=lambda t: (t,)),
        _g("h", _A),
        _g("h", _B),
    ),
    "ryy": (
        _g("rx", _A, params=_const(pi / 2)),
        _g("rx", _B, params=_const(pi / 2)),
        _g("rzz", _A, _B, params=lambda t: (t,)),
        _g("rx", _A, params=_const(-pi / 2)),
        _g("rx", _B, params=_const(-pi / 2)),
    ),
    "rzx": (_g("h", _B), _g("rzz", _A, _B, params=lambda t: (t,)), _g("h", _B)),
    # three-qubit
    "ccx": _TOFFOLI,
    "ccz": (_g("h", _C), _g("ccx", _A, _B, _C), _g("h", _C)),
    "cswap": (_g("cx", _C, _B), _g("ccx", _A, _B, _C), _g("cx", _C, _B)),
}


@lru_cache(maxsize=None)
def builtin_rules() -> RuleDatabase:
    return RuleDatabase({KINDS[k]: RewriteRule(KINDS[k], rhs) for k, rhs in _RULES.items()})
