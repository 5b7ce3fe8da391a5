"""
Dense unitary construction and equivalence up to global phase.

Ordering convention: qubit 0 is the least-significant bit of the basis index, so
for two qubits the basis order is |q1 q0> = |00>, |01>, |10>, |11>.
Gate matrices returned by :func:`kind_matrix` are in textbook form with the
*first* operand as the most-significant bit (controls first).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .ir import Circuit, GateKind, get_kind

__all__ = [
    "TooLarge",
    "DimensionMismatch",
    "CheckResult",
    "kind_matrix",
    "circuit_unitary",
    "equal_up_to_global_phase",
    "max_phase_deviation",
    "check_transpilation",
]

DEFAULT_MAX_QUBITS = 10


class TooLarge(ValueError):
    pass


class DimensionMismatch(ValueError):
    pass


@dataclass(frozen=True)
class CheckResult:
    checked: bool
    correct: bool


_I2 = np.eye(2, dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z = np.diag([1, -1]).astype(complex)
_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
_SX = np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]], dtype=complex) / 2

_FIXED = {
    "x": _X,
    "y": _Y,
    "z": _Z,
    "h": _H,
    "s": np.diag([1, 1j]),
    "sdg": np.diag([1, -1j]),
    "t": np.diag([1, np.exp(1j * np.pi / 4)]),
    "tdg": np.diag([1, np.exp(-1j * np.pi / 4)]),
    "sx": _SX,
    "sxdg": _SX.conj().T,
    "swap": np.eye(4)[[0, 2, 1, 3]],
    "iswap": np.array([[1, 0, 0, 0], [0, 0, 1j, 0], [0, 1j, 0, 0], [0, 0, 0, 1]]),
    "ecr": np.array([[0, 1, 0, 1j], [1, 0, -1j, 0], [0, 1j, 0, 1], [-1j, 0, 1, 0]]) / np.sqrt(2),
}


def _rx(t):
    c, s = np.cos(t / 2), np.sin(t / 2)
    return np.array([[c, -1j * s], [-1j * s, c]])


def _ry(t):
    c, s = np.cos(t / 2), np.sin(t / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def _rz(t):
    return np.diag([np.exp(-0.5j * t), np.exp(0.5j * t)])


def _p(lam):
    return np.diag([1, np.exp(1j * lam)])


def _u3(theta, phi, lam):
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array(
        [
            [c, -np.exp(1j * lam) * s],
            [np.exp(1j * phi) * s, np.exp(1j * (phi + lam)) * c],
        ]
    )


def _controlled(u: np.ndarray) -> np.ndarray:
    n = u.shape[0]
    out = np.eye(2 * n, dtype=complex)
    out[n:, n:] = u
    return out


def _pauli_rotation(pa: np.ndarray, pb: np.ndarray, theta: float) -> np.ndarray:
    # exp(-i theta/2 P) with P^2 = I
    return np.cos(theta / 2) * np.eye(4) - 1j * np.sin(theta / 2) * np.kron(pa, pb)


_PARAMETRIC = {
    "p": _p,
    "u1": _p,
    "rx": _rx,
    "ry": _ry,
    "rz": _rz,
    "u2": lambda phi, lam: _u3(np.pi / 2, phi, lam),
    "u3": _u3,
    "crx": lambda t: _controlled(_rx(t)),
    "cry": lambda t: _controlled(_ry(t)),
    "crz": lambda t: _controlled(_rz(t)),
    "cp": lambda t: _controlled(_p(t)),
    "rxx": lambda t: _pauli_rotation(_X, _X, t),
    "ryy": lambda t: _pauli_rotation(_Y, _Y, t),
    "rzz": lambda t: _pauli_rotation(_Z, _Z, t),
    "rzx": lambda t: _pauli_rotation(_Z, _X, t),
}


def _ccx():
    m = np.eye(8, dtype=complex)
    m[6:, 6:] = _X
    return m


def _cswap():
    return np.eye(8, dtype=complex)[[0, 1, 2, 3, 4, 6, 5, 7]]


_CONTROLLED_FIXED = {
    "cx": lambda: _controlled(_X),
    "cy": lambda: _controlled(_Y),
    "cz": lambda: _controlled(_Z),
    "ch": lambda: _controlled(_H),
    "csx": lambda: _controlled(_SX),
    "ccx": _ccx,
    "ccz": lambda: np.diag([1, 1, 1, 1, 1, 1, 1, -1]).astype(complex),
    "cswap": _cswap,
}


@lru_cache(maxsize=None)
def _fixed_matrix(name: str) -> np.ndarray:
    m = _CONTROLLED_FIXED[name]() if name in _CONTROLLED_FIXED else _FIXED[name]
    m = np.asarray(m, dtype=complex)
    m.setflags(write=False)
    return m


def kind_matrix(kind: GateKind | str, params=()) -> np.ndarray:
    """Matrix of one gate kind, first operand most significant."""
    if isinstance(kind, str):
        kind = get_kind(kind)
    if len(params) != kind.param_count:
        raise ValueError(f"{kind.name} takes {kind.param_count} parameter(s), got {len(params)}")
    if kind.param_count:
        return np.asarray(_PARAMETRIC[kind.name](*params), dtype=complex)
    return _fixed_matrix(kind.name)


def _apply(state: np.ndarray, n: int, m: np.ndarray, qubits) -> np.ndarray:
    """Left-multiply gate ``m`` on ``qubits`` into ``state`` shaped (2,)*n + (cols,)."""
    k = len(qubits)
    axes = [n - 1 - q for q in qubits]
    gate = m.reshape((2,) * (2 * k))
    out = np.tensordot(gate, state, axes=(list(range(k, 2 * k)), axes))
    return np.moveaxis(out, list(range(k)), axes)


def _embed(m: np.ndarray, qubits, block: tuple[int, ...]) -> np.ndarray:
    """``m`` acting on ``qubits`` as a matrix over ``block`` (block[0] most significant)."""
    b = len(block)
    local = [b - 1 - block.index(q) for q in qubits]
    eye = np.eye(1 << b, dtype=complex).reshape((2,) * b + (1 << b,))
    return _apply(eye, b, m, local).reshape(1 << b, 1 << b)


def _fuse(c: Circuit) -> list[tuple[tuple[int, ...], np.ndarray]]:
    """Group the gate list into blocks of at most 3 qubits with the same product.

    A gate joins the most recent block on its qubits when that block already
    covers them; a fresh multi-qubit block swallows pending single-qubit blocks
    on its operands. Both moves only reorder gates on disjoint qubits.
    """
    blocks: list[list | None] = []  # [qubits, matrix]
    last: dict[int, int] = {}
    for g in c.gates:
        m = kind_matrix(g.kind, g.params)
        qs = g.qubits
        owners = {last.get(q) for q in qs}
        if len(owners) == 1 and None not in owners:
            i = owners.pop()
            bq, bm = blocks[i]
            if set(qs) <= set(bq):
                blocks[i][1] = _embed(m, qs, bq) @ bm
                continue
        if len(qs) > 1:
            m = m.copy()
            for q in qs:
                i = last.get(q)
                if i is not None and len(blocks[i][0]) == 1:
                    m = m @ _embed(blocks[i][1], (q,), qs)
                    blocks[i] = None
        blocks.append([qs, m])
        for q in qs:
            last[q] = len(blocks) - 1
    return [(b[0], b[1]) for b in blocks if b is not None]


def circuit_unitary(c: Circuit, max_qubits: int = DEFAULT_MAX_QUBITS) -> np.ndarray:
    """Ordered product of the circuit's gates (later gates on the left)."""
    n = c.nb_qubits
    if n > max_qubits:
        raise TooLarge(f"{n} qubits exceeds the verification limit of {max_qubits}")
    dim = 2**n
    state = np.eye(dim, dtype=complex).reshape((2,) * n + (dim,))
    for qubits, m in _fuse(c):
        state = _apply(state, n, m, qubits)
    return state.reshape(dim, dim)


def _phase_aligned_diff(u: np.ndarray, v: np.ndarray, atol: float) -> np.ndarray:
    u = np.asarray(u)
    v = np.asarray(v)
    if u.shape != v.shape:
        raise DimensionMismatch(f"shapes differ: {u.shape} vs {v.shape}")
    k = np.unravel_index(np.argmax(np.abs(u)), u.shape)
    if abs(u[k]) <= atol:
        return np.abs(u - v)
    ratio = v[k] / u[k]
    phase = ratio / abs(ratio) if ratio != 0 else 1.0
    return np.abs(phase * u - v)


def max_phase_deviation(u, v, atol: float = 1e-7) -> float:
    """Largest elementwise deviation after aligning the global phase of ``u`` to ``v``."""
    diff = _phase_aligned_diff(u, v, atol)
    return float(diff.max(initial=0.0))


def equal_up_to_global_phase(u, v, atol: float = 1e-7) -> bool:
    if atol <= 0:
        raise ValueError("atol must be positive")
    return max_phase_deviation(u, v, atol) <= atol


def check_transpilation(
    initial: Circuit,
    transpiled: Circuit,
    atol: float = 1e-7,
    max_qubits: int = DEFAULT_MAX_QUBITS,
) -> CheckResult:
    if initial.nb_qubits != transpiled.nb_qubits:
        return CheckResult(checked=True, correct=False)
    if initial.nb_qubits > max_qubits:
        return CheckResult(checked=False, correct=False)
    u = circuit_unitary(initial, max_qubits)
    v = circuit_unitary(transpiled, max_qubits)
    return CheckResult(checked=True, correct=equal_up_to_global_phase(u, v, atol))
