"""Gallai colorings: structure, decomposition, and the monochromatic partition finder.

Run with ``python demos/01_gallai_structure.py``.
"""

# %%
import numpy as np

from gallai_lab import (
    ColoredGraph,
    compose,
    count_rainbow_triangles,
    decompose,
    monochromatic_partition,
    random_gallai_tree,
)
from gallai_lab.graphs import rainbow_triangle

# %% [markdown]
# A random Gallai tree is a recursive recipe: each internal node chooses two
# colors and joins its children pairwise in one of them.  Composing it gives
# a 3-coloring of a complete graph with no rainbow triangle.

# %%
tree = random_gallai_tree(40, seed=3, max_children=3)
g = compose(tree)
print("vertices:", g.n, "tree height:", tree.height())
print("rainbow triangles:", count_rainbow_triangles(g))
print("color class sizes:", [int((g.upper() == c).sum()) for c in (1, 2, 3)])

# %% [markdown]
# The finder recovers a top-level split.  Parts are the components of one
# excluded color, merged until every cross bipartite graph is monochromatic.

# %%
a, b, part = monochromatic_partition(g)
print(f"(a, b) = ({a}, {b}); part sizes {part.sizes()}")
for i, pi in enumerate(part.parts):
    for j in range(i + 1, len(part.parts)):
        block = g.matrix[np.ix_(pi, part.parts[j])]
        print(f"  parts {i}-{j}: colors {sorted(set(block.ravel().tolist()))}")

# %% [markdown]
# Decomposing and recomposing is the identity on Gallai colorings.

# %%
again = compose(decompose(g))
print("round trip exact:", again == g)

# %% [markdown]
# A rainbow triangle anywhere blocks decomposition, and the finder simply
# reports that no partition exists for the rainbow triangle itself.

# %%
print("partition of the rainbow triangle:", monochromatic_partition(rainbow_triangle()))
bad = g.matrix.copy()
bad[0, 1] = bad[1, 0] = 1
bad[0, 2] = bad[2, 0] = 2
bad[1, 2] = bad[2, 1] = 3
broken = ColoredGraph(bad)
try:
    decompose(broken)
except ValueError as exc:
    print("decompose refused:", exc)

# %% [markdown]
# The tree exports to Graphviz for inspection.

# %%
small = random_gallai_tree(6, seed=1)
print(small.to_dot())
