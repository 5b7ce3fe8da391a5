"""
A small benchmark
=================

Generate a seeded corpus, run every strategy from avalon to borealis and
summarize by circuit type and strategy. Then time the strategies against
gatecount on 20-qubit circuits (too wide to verify, so only timed).
"""

# %%
from qxpile.dialects import builtin_dialects
from qxpile.harness import ExperimentPlan, format_summary, run_experiment, summarize, timing_profile
from qxpile.randgen import standard_corpus

d = builtin_dialects()
corpus = standard_corpus(seed=1, source=d["avalon"], count=10)
print(len(corpus), "circuits")

# %%
records = run_experiment(ExperimentPlan(corpus, d["avalon"], d["borealis"], iterations=2))
print(format_summary(summarize(records, ["circuit_type", "strategy"])))

# %% [markdown]
# Overall fail rates follow hybrid <= hub_and_spokes <= one_to_one.

# %%
print(format_summary(summarize(records)))

# %%
rows = timing_profile(seed=0, nb_qubits=20, gatecounts=range(100, 1001, 300), iterations=3)
for r in rows:
    print(f"{r.gatecount:5d} {r.strategy:15s} {r.mean_time_s * 1e3:8.3f} ms")
