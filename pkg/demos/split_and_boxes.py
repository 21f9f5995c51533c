"""
Two more pictures: a split minimal prime and height one boxes
"""

# %%
from specposet import load_fixture
from specposet.chains import chain_report, verify_chain_theorems
from specposet.precompletion import s_sets, spec_A

split = load_fixture("split")
T, C = split.diagram, split.partition
A = spec_A(T, C, "exact", split.characteristic)
r = s_sets(T, C, [1, 2], A)
print("S_T(1,2):", sorted(r.s_T))
print("S_A(1,2):", sorted(r.s_A))

# %% [markdown]
# (p1,z) and (p2,z) both go to the single node above q1 and q2.  As a set of
# primes that node has two elements; the ring drawn for this picture,
# Q[x,y,z]/(pz), has only (p,z) there.  Same shape, different count.

# %%
drawn = load_fixture("split_drawn_A").diagram
for a in A.base.ids:
    print(a, A.base.card(a))
print("drawn:", [(n.id, str(n.card)) for n in drawn.nodes])

# %%
boxes = load_fixture("xyzw")
T, C = boxes.diagram, boxes.partition
A = spec_A(T, C, "exact", boxes.characteristic, force=True)
r = s_sets(T, C, [1, 2], A)
print("S1bar_T(1,2):", sorted(r.s1bar_T))
print("S1_T(1,2):   ", sorted(r.s1_T))
print("S1_A(1,2):   ", sorted(r.s1_A), "holding", A.base.card(next(iter(r.s1_A))), "primes")

# %% [markdown]
# M is a minimal upper bound over one choice of minimal primes, but not
# minimal among all of them, which is why it drops out of S1_T.

# %%
print(chain_report(T).summary())
print(verify_chain_theorems(T, C, A).summary())
