"""
Three ways to transpile
=======================

one_to_one copies gates and gives up on the first one the target lacks.
hybrid copies what it can and decomposes the rest. hub_and_spokes runs
hybrid twice, through an intermediate dialect.
"""

# %%
from qxpile import Circuit, gate
from qxpile.dialects import builtin_dialects
from qxpile.simulator import check_transpilation
from qxpile.transpiler import TranspileError, transpile

d = builtin_dialects()
for name, dialect in d.items():
    print(f"{name:9s} {len(dialect.supported):2d} kinds")

# %%
def attempt(c, target):
    for s in ("one_to_one", "hybrid", "hub_and_spokes"):
        try:
            out = transpile(c, s, d[target])
        except TranspileError as e:
            print(f"  {s:15s} error: {e}")
            continue
        ok = check_transpilation(c, out).correct
        print(f"  {s:15s} {len(out.gates):3d} gates  correct={ok}")

# %% [markdown]
# borealis lacks ch, so only the decomposing strategies succeed.

# %%
attempt(Circuit(2, [gate("ch", 0, 1)]), "borealis")

# %% [markdown]
# ecr is native to both endpoints but not to the cascade hub, and there is
# no rule for it, so the hub route fails where the direct routes pass.

# %%
attempt(Circuit(2, [gate("ecr", 0, 1)]), "borealis")

# %% [markdown]
# Single-qubit kinds never fail: they fall back to a ZYZ synthesis.

# %%
attempt(Circuit(1, [gate("u3", 0, params=[0.4, 1.0, 2.0])]), "cascade")
