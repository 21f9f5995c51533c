"""
Random and exhaustive checks
=============================

Every order-theoretic claim is checked on random diagrams and on all small
ones.  Counterexamples would be written out as documents.
"""

# %%
from specposet.oracle import GenParams, check_all, drop_one_pair, random_diagram, random_minfeasible, run_trials

gp = GenParams(seed=7, max_nodes=8)
d = random_diagram(gp)
p = random_minfeasible(d, gp)
print([(n.id, str(n.card)) for n in d.nodes])
print(p)

# %%
rep = check_all(d, p)
print(rep.ok, rep.checks, "checks", rep.chain_skips)

# %% [markdown]
# A broken quotient (one pair dropped) is caught right away.

# %%
bad = check_all(d, p, quotient=drop_one_pair)
print(bad.ok, bad.counterexample)

# %%
summary = run_trials(seed=2024, trials=200, max_nodes=10)
print(summary.summary())
