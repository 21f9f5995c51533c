"""
Collapsing minimal primes: Q[[x,y,z]]/(xyz)
============================================

T has three minimal primes (x), (y), (z).  We ask for a subring A with
completion T where (x) and (y) land on the same minimal prime of A and (z)
stays on its own.
"""

# %%
from specposet import load_fixture
from specposet.partition import over_set, under_set, validate_minfeasible
from specposet.precompletion import s_sets, spec_A
from specposet.io import render_dot

doc = load_fixture("xyz")
T, C = doc.diagram, doc.partition
print(len(T), "nodes,", len(T.covers), "covers")
for nd in T.nodes:
    print(f"  {nd.id:4s} {nd.card}   {nd.label}")

# %% [markdown]
# The partition C_1 = {(x),(y)}, C_2 = {(z)} is minfeasible: every minimal
# prime sits under exactly one C_i.

# %%
print(validate_minfeasible(T, C).ok)
for i in (1, 2):
    print(f"C_{i}: under {sorted(under_set(T, C, i))}  over {sorted(over_set(T, C, i))}")

# %% [markdown]
# (x,y) is over C_1 only; (x,z) and (y,z) are over both.
# Now build Spec(A).  Everything under C_i becomes one prime q_i.

# %%
A = spec_A(T, C, "exact", doc.characteristic)
for a in A.base.ids:
    print(f"  {a:10s} {str(A.base.card(a)):3s} <- {sorted(A.provenance[a])}")

# %%
r = s_sets(T, C, [1, 2], A)
print("S_T(1,2) =", sorted(r.s_T))
print("S_A(1,2) =", sorted(r.s_A))
print("|S1_T|, |S1_A| =", *map(str, r.s1_sizes(T, A)))

# %% [markdown]
# The two height-one primes (x,z), (y,z) of T share one node in A, but the
# node still carries two primes, so |S1_A(1,2)| = 2.  In countable mode the
# boxes drop to aleph_0.

# %%
Ac = spec_A(T, C, "countable", doc.characteristic)
print({a: str(Ac.base.card(a)) for a in Ac.base.ids})
print(render_dot(A, "spec_A"))
