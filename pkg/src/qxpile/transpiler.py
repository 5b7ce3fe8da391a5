"""
Transpilation strategies.

    - one_to_one: gate-for-gate copy; fails on the first kind the target lacks
    - hybrid: copy supported gates, decompose the rest (rules for multi-qubit
      kinds, ZYZ synthesis for single-qubit kinds)
    - hub_and_spokes: hybrid into a hub dialect, then hybrid into the target

Global phase is dropped everywhere; no peephole optimisation is attempted.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .dialects import Dialect, RuleDatabase, builtin_dialects, builtin_rules
from .ir import KINDS, Circuit, GateInstance, GateKind, get_kind
from .simulator import kind_matrix

__all__ = [
    "TranspileError",
    "NotUnitary",
    "ZYZAngles",
    "zyz_decompose",
    "one_to_one",
    "rebase",
    "hybrid",
    "hub_and_spokes",
    "STRATEGIES",
    "transpile",
    "DEFAULT_HUB",
    "MAX_EXPANSION_DEPTH",
]

MAX_EXPANSION_DEPTH = 16
DEFAULT_HUB = "cascade"

_RZ = KINDS["rz"]
_RY = KINDS["ry"]


class TranspileError(Exception):
    """``kind`` in {unsupported_gate, no_rule, depth_exceeded}; ``stage`` in {direct, hub_leg_1, hub_leg_2}."""

    def __init__(self, kind: str, gate: GateKind | str, stage: str = "direct"):
        self.kind = kind
        self.gate = get_kind(gate) if isinstance(gate, str) else gate
        self.stage = stage
        super().__init__(str(self))

    def __str__(self) -> str:
        suffix = "" if self.stage == "direct" else f" ({self.stage})"
        return f"{self.kind} {self.gate.name}{suffix}"

    def with_stage(self, stage: str) -> TranspileError:
        return TranspileError(self.kind, self.gate, stage)


class NotUnitary(ValueError):
    pass


@dataclass(frozen=True)
class ZYZAngles:
    """U = exp(i*alpha) * Rz(phi) @ Ry(theta) @ Rz(lam)."""

    theta: float
    phi: float
    lam: float
    alpha: float

    def matrix(self) -> np.ndarray:
        return (
            cmath.exp(1j * self.alpha)
            * kind_matrix(_RZ, (self.phi,))
            @ kind_matrix(_RY, (self.theta,))
            @ kind_matrix(_RZ, (self.lam,))
        )


_DEGENERATE_TOL = 1e-12


def zyz_decompose(u) -> ZYZAngles:
    u = np.asarray(u, dtype=complex)
    if u.shape != (2, 2) or not np.allclose(u.conj().T @ u, np.eye(2), atol=1e-10, rtol=0):
        raise NotUnitary("expected a 2x2 unitary")
    # Strip the determinant phase so that v is in SU(2):
    # v = [[e^{-i(phi+lam)/2} c, -e^{-i(phi-lam)/2} s], [e^{i(phi-lam)/2} s, e^{i(phi+lam)/2} c]]
    v = u / cmath.sqrt(np.linalg.det(u))
    theta = 2 * math.atan2(abs(v[1, 0]), abs(v[0, 0]))
    if abs(u[0, 1]) <= _DEGENERATE_TOL and abs(u[1, 0]) <= _DEGENERATE_TOL:
        theta, lam = 0.0, 0.0
        phi = 2 * cmath.phase(v[1, 1])
    elif abs(u[0, 0]) <= _DEGENERATE_TOL and abs(u[1, 1]) <= _DEGENERATE_TOL:
        theta, lam = math.pi, 0.0
        phi = 2 * cmath.phase(v[1, 0])
    else:
        plus = 2 * cmath.phase(v[1, 1])
        minus = 2 * cmath.phase(v[1, 0])
        phi, lam = (plus + minus) / 2, (plus - minus) / 2
    phi = _wrap(phi)
    lam = _wrap(lam)
    # Fix the global phase against the reconstruction itself, at its largest entry.
    r = ZYZAngles(theta, phi, lam, 0.0).matrix()
    k = np.unravel_index(np.argmax(np.abs(r)), r.shape)
    alpha = _wrap(cmath.phase(u[k] / r[k]))
    return ZYZAngles(theta, phi, lam, alpha)


def _wrap(a: float) -> float:
    """Map an angle into (-pi, pi]; exact zeros stay zero."""
    a = math.remainder(a, 2 * math.pi)
    return math.pi if a == -math.pi else a + 0.0


def _zyz_gates(g: GateInstance) -> list[GateInstance]:
    angles = zyz_decompose(kind_matrix(g.kind, g.params))
    q = g.qubits
    return [
        GateInstance(_RZ, q, (angles.lam,)),
        GateInstance(_RY, q, (angles.theta,)),
        GateInstance(_RZ, q, (angles.phi,)),
    ]


def one_to_one(c: Circuit, target: Dialect) -> Circuit:
    for g in c.gates:
        if g.kind not in target.supported:
            raise TranspileError("unsupported_gate", g.kind)
    return c.with_gates(c.gates)


def _expand(g: GateInstance, target: Dialect, rules: RuleDatabase, budget: int, out: list):
    if g.kind in target.supported:
        out.append(g)
    elif g.kind.arity == 1:
        out.extend(_zyz_gates(g))
    elif budget <= 0:
        raise TranspileError("depth_exceeded", g.kind)
    elif g.kind not in rules:
        raise TranspileError("no_rule", g.kind)
    else:
        for h in rules[g.kind].apply(g):
            _expand(h, target, rules, budget - 1, out)


def rebase(
    c: Circuit,
    target: Dialect,
    rules: RuleDatabase | None = None,
    max_expansion_depth: int = MAX_EXPANSION_DEPTH,
) -> Circuit:
    """Rewrite ``c`` so every gate is supported by ``target``.

    Supported kinds are copied; unsupported single-qubit kinds become
    rz(lam) ry(theta) rz(phi); unsupported multi-qubit kinds are replaced by their
    rule and the result rebased again, at most ``max_expansion_depth`` levels deep.
    """
    if max_expansion_depth < 1:
        raise ValueError("max_expansion_depth must be >= 1")
    if rules is None:
        rules = builtin_rules()
    out: list[GateInstance] = []
    for g in c.gates:
        _expand(g, target, rules, max_expansion_depth, out)
    return c.with_gates(out)


def hybrid(c: Circuit, target: Dialect, rules: RuleDatabase | None = None) -> Circuit:
    return rebase(c, target, rules, MAX_EXPANSION_DEPTH)


def hub_and_spokes(
    c: Circuit,
    hub: Dialect | None,
    target: Dialect,
    rules: RuleDatabase | None = None,
) -> Circuit:
    if hub is None:
        hub = builtin_dialects()[DEFAULT_HUB]
    try:
        mid = hybrid(c, hub, rules)
    except TranspileError as e:
        raise e.with_stage("hub_leg_1") from None
    try:
        return hybrid(mid, target, rules)
    except TranspileError as e:
        raise e.with_stage("hub_leg_2") from None


STRATEGIES = ("one_to_one", "hub_and_spokes", "hybrid")


def transpile(
    c: Circuit,
    strategy: str,
    target: Dialect,
    rules: RuleDatabase | None = None,
    hub: Dialect | None = None,
) -> Circuit:
    """Dispatch to one of :data:`STRATEGIES` by name."""
    if strategy == "one_to_one":
        return one_to_one(c, target)
    if strategy == "hybrid":
        return hybrid(c, target, rules)
    if strategy == "hub_and_spokes":
        return hub_and_spokes(c, hub, target, rules)
    raise ValueError(f"unknown strategy {strategy!r}; expected one of {STRATEGIES}")
