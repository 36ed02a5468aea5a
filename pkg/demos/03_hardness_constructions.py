"""Hosts with many pair-disjoint copies of a pattern but few copies overall."""

# %%
import numpy as np

from gallai_lab import (
    EquationFamily,
    avoiding_set,
    d3_hardness,
    f4_hardness,
    triangle_hardness,
)
from gallai_lab.graphs import (
    ColoredGraph,
    color_projection,
    count_rainbow_triangles,
    d3_pattern,
    enumerate_copies,
    f4_pattern,
    verify_pair_disjoint,
)
from gallai_lab.hardness import design_family, lift_to_digraph, verify_avoiding_set

# %% [markdown]
# Equation-avoiding sets drive everything.  Greedy and sphere (Behrend)
# constructions for three-term progressions:

# %%
for m in (50, 500, 5000, 50000):
    g = avoiding_set(m, EquationFamily.three_ap())
    b = avoiding_set(m, EquationFamily.three_ap(), method="behrend")
    print(f"m={m:>6}: greedy {len(g):>5}  behrend {len(b):>5}")
print("verifier on {1,2,3}:", verify_avoiding_set([1, 2, 3], EquationFamily.three_ap()))

# %% [markdown]
# The design family: p^2 tuples, any two agreeing in at most one coordinate.

# %%
fam = design_family(10, 3)
print("p =", fam.p, " tuples =", len(fam))
print(fam.tuples[:6])

# %% [markdown]
# The F4 host: four blocks of sizes m, 2m, 3m, 4m, copies planted along
# arithmetic progressions with steps from S.  Exhaustive enumeration finds
# exactly the planted ones.

# %%
inst = f4_hardness(20)
found = enumerate_copies(inst.host, f4_pattern())
print("S =", inst.s)
print("planted:", len(inst.host_copies), " found:", len(found), " m|S| =", 20 * len(inst.s))
print("pair-disjoint:", verify_pair_disjoint(inst.host_copies)[0])

# %% [markdown]
# Same idea for digraphs: induced copies of D3 (a1->a3, a2->a3, a3->a2).

# %%
d = d3_hardness(20, factor=4)
print("D3 induced copies:", len(enumerate_copies(d.host, d3_pattern())), " m|S| =", 20 * len(d.s))
print("blowup vertices:", d.blown.n, " planted in blowup:", len(d.blown_copies),
      " pair-disjoint:", verify_pair_disjoint(d.blown_copies)[0])

# %% [markdown]
# Projecting a digraph to pair counts gives a 3-coloring; D3 becomes the
# rainbow triangle.  Lifting goes back while keeping planted copies induced.

# %%
proj = color_projection(d.host)
print("rainbow triangles in the projection:", count_rainbow_triangles(proj))
lifted = lift_to_digraph(proj, d3_pattern(), d.host_copies)
print("lift projects back exactly:", color_projection(lifted) == proj)

# %% [markdown]
# A generic pattern whose triangle avoids a color: monochromatic K3 in color 1
# with every other pair colored 2.

# %%
tri = triangle_hardness(ColoredGraph.constant(3, 1), avoided=2, m=20)
print("triangles avoiding color 2:", tri.claims["triangles_avoiding"],
      "<= f^4 m^2 =", tri.claims["triangles_avoiding_bound"])
print("host color counts:", np.bincount(tri.host.upper(), minlength=4)[1:])
