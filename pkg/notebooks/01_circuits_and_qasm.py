"""
Circuits, QASM and unitaries
============================

Build a small circuit, round-trip it through OpenQASM 2 and compare
unitaries up to a global phase.
"""

# %%
import numpy as np

from qxpile import Circuit, gate, depth, gatecount
from qxpile.qasm2 import emit, parse
from qxpile.simulator import circuit_unitary, equal_up_to_global_phase

# %% [markdown]
# A Bell pair. Qubit 0 is the least-significant bit of the basis index.

# %%
bell = Circuit(2, [gate("h", 0), gate("cx", 0, 1)])
print(emit(bell))
print("depth", depth(bell), "gatecount", gatecount(bell))

u = circuit_unitary(bell)
print(np.round(u[:, 0], 4))  # (|00> + |11>)/sqrt(2)

# %% [markdown]
# Angles survive the text round trip bit for bit.

# %%
c = Circuit(3, [gate("u3", 0, params=[0.1, 2.0, -1.3]), gate("rzz", 1, 2, params=[np.pi / 7])])
text = emit(c)
print(text)
assert parse(text).gates == c.gates

# %% [markdown]
# p and rz differ only by a global phase.

# %%
theta = 0.8
up = circuit_unitary(Circuit(1, [gate("p", 0, params=[theta])]))
uz = circuit_unitary(Circuit(1, [gate("rz", 0, params=[theta])]))
print("elementwise equal:", np.allclose(up, uz))
print("equal up to phase:", equal_up_to_global_phase(up, uz))
