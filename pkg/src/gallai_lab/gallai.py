"""Exact structure of Gallai colorings (3-colorings with no rainbow triangle).

A Gallai coloring on at least two vertices always splits into >= 2 parts such
that every pair of parts is joined in a single color, and all those joining
colors come from one pair {a, b}.  Applying this recursively gives a tree;
:func:`decompose` and :func:`compose` convert between the two views.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.sparse.csgraph import connected_components

from .graphs import (
    ColoredGraph,
    VertexPartition,
    cross_pair_count,
    find_rainbow_triangle,
    part_color_counts,
)


class RainbowTriangleError(ValueError):
    def __init__(self, witness):
        super().__init__(f"rainbow triangle at {witness}")
        self.witness = witness


class InvalidTree(ValueError):
    pass


def other_colors(c: int) -> tuple[int, int]:
    a, b = (x for x in (1, 2, 3) if x != c)
    return a, b


def _components(adj: np.ndarray) -> tuple[int, np.ndarray]:
    """Connected components labelled in order of their smallest vertex."""
    n = adj.shape[0]
    if n > 48:
        return connected_components(adj, directed=False)
    reach = adj | np.eye(n, dtype=bool)
    for _ in range(max(1, int(n).bit_length())):
        reach = (reach.astype(np.uint8) @ reach.astype(np.uint8)) > 0
    first = reach.argmax(axis=1)
    roots, labels = np.unique(first, return_inverse=True)
    return len(roots), labels


def _merge_until_monochromatic(g: ColoredGraph, labels: np.ndarray, parts: int):
    """Merge the lowest-indexed pair of parts whose cross graph uses >1 color, until none is left."""
    counts = part_color_counts(g, labels, parts)
    members = [[] for _ in range(parts)]
    for v, lab in enumerate(labels):
        members[lab].append(v)
    alive = list(range(parts))
    while len(alive) > 1:
        sub = counts[:, alive][:, :, alive]
        ncolors = (sub > 0).sum(axis=0)
        bad = np.argwhere(np.triu(ncolors > 1, 1))
        if len(bad) == 0:
            break
        i, j = alive[bad[0][0]], alive[bad[0][1]]
        counts[:, i, :] += counts[:, j, :]
        counts[:, :, i] += counts[:, :, j]
        counts[:, i, i] = 0
        members[i].extend(members[j])
        alive.remove(j)
    return [sorted(members[i]) for i in alive]


def monochromatic_partition(g: ColoredGraph):
    """Find colors (a, b) and an (a, b)-monochromatic partition with >= 2 parts.

    For each excluded color c (smallest first) the parts start as the
    components of the color-c graph and are merged until every cross graph is
    monochromatic.  Returns ``(a, b, partition)`` or ``None``.  A ``None``
    result certifies that no such partition exists for any pair of colors.
    """
    if g.k != 3:
        raise ValueError("monochromatic partitions are defined for 3 colors")
    if g.n < 2:
        raise ValueError("need at least two vertices")
    for c in (1, 2, 3):
        ncomp, labels = _components(g.matrix == c)
        if ncomp < 2:
            continue
        parts = _merge_until_monochromatic(g, labels, ncomp)
        if len(parts) >= 2:
            parts.sort(key=lambda p: p[0])
            a, b = other_colors(c)
            return a, b, VertexPartition.of(parts, g.n)
    return None


def is_monochromatic_partition(g: ColoredGraph, p: VertexPartition, a: int, b: int) -> bool:
    cost, _ = closeness_cost(g, p, a, b)
    return cost == 0


def closeness_cost(g: ColoredGraph, p: VertexPartition, a: int, b: int):
    """Fewest cross-pair recolorings that make ``p`` (a, b)-monochromatic.

    Returns ``(cost, targets)`` where ``targets[(i, j)]`` (i < j) is the
    color chosen for the pairs between parts i and j; ties go to ``a``.
    ``p`` is eps-close iff ``cost <= eps * cross_pair_count(p)``.
    """
    if p.n != g.n:
        raise ValueError("partition does not cover the graph")
    counts = part_color_counts(g, p.labels(), len(p))
    total = counts.sum(axis=0)
    keep_a, keep_b = counts[a - 1], counts[b - 1]
    cost = 0
    targets = {}
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if keep_a[i, j] >= keep_b[i, j]:
                targets[(i, j)] = a
                cost += int(total[i, j] - keep_a[i, j])
            else:
                targets[(i, j)] = b
                cost += int(total[i, j] - keep_b[i, j])
    return cost, targets


# -- trees --------------------------------------------------------------------

@dataclass
class GallaiTree:
    """Leaf (``vertex`` set) or internal node with colors ``pair`` and ``cross`` colors per child pair."""

    vertex: int | None = None
    pair: tuple[int, int] | None = None
    children: list[GallaiTree] = field(default_factory=list)
    cross: dict[tuple[int, int], int] = field(default_factory=dict)

    @property
    def is_leaf(self) -> bool:
        return self.vertex is not None

    def leaves(self) -> list[int]:
        out, stack = [], [self]
        while stack:
            node = stack.pop()
            if node.is_leaf:
                out.append(node.vertex)
            else:
                stack.extend(reversed(node.children))
        return out

    def nodes(self):
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))

    def height(self) -> int:
        best, stack = 0, [(self, 0)]
        while stack:
            node, h = stack.pop()
            best = max(best, h)
            stack.extend((c, h + 1) for c in node.children)
        return best

    def validate(self) -> None:
        for node in self.nodes():
            if node.is_leaf:
                if node.children:
                    raise InvalidTree("leaf with children")
                continue
            if len(node.children) < 2:
                raise InvalidTree("internal node needs at least two children")
            if node.pair is None or len(set(node.pair)) != 2:
                raise InvalidTree(f"bad color pair {node.pair}")
            m = len(node.children)
            want = {(i, j) for i in range(m) for j in range(i + 1, m)}
            if set(node.cross) != want:
                raise InvalidTree("cross colors must cover every child pair exactly once")
            for key, c in node.cross.items():
                if c not in node.pair:
                    raise InvalidTree(f"cross color {c} at {key} not in pair {node.pair}")
        leaves = self.leaves()
        if len(set(leaves)) != len(leaves):
            raise InvalidTree("children share vertices")

    def to_json(self) -> dict:
        if self.is_leaf:
            return {"vertex": self.vertex}
        return {
            "pair": list(self.pair),
            "children": [c.to_json() for c in self.children],
            "cross": [[i, j, c] for (i, j), c in sorted(self.cross.items())],
        }

    @classmethod
    def from_json(cls, data: dict) -> GallaiTree:
        if "vertex" in data:
            return cls(vertex=int(data["vertex"]))
        return cls(
            pair=tuple(data["pair"]),
            children=[cls.from_json(c) for c in data["children"]],
            cross={(int(i), int(j)): int(c) for i, j, c in data["cross"]},
        )

    def to_dot(self) -> str:
        lines = ["graph gallai {"]
        ids = {}
        for idx, node in enumerate(self.nodes()):
            ids[id(node)] = idx
            if node.is_leaf:
                lines.append(f'  n{idx} [shape=circle,label="{node.vertex}"];')
            else:
                cross = ",".join(f"{i}{j}:{c}" for (i, j), c in sorted(node.cross.items()))
                lines.append(f'  n{idx} [shape=box,label="{node.pair[0]}/{node.pair[1]}\\n{cross}"];')
        for node in self.nodes():
            for child in node.children:
                lines.append(f"  n{ids[id(node)]} -- n{ids[id(child)]};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def compose(tree: GallaiTree) -> ColoredGraph:
    """Build the coloring described by ``tree``; its leaves must be exactly 0..n-1."""
    tree.validate()
    leaves = tree.leaves()
    n = len(leaves)
    if sorted(leaves) != list(range(n)):
        raise InvalidTree("leaf vertices must be 0..n-1")
    m = np.zeros((n, n), dtype=np.int8)
    if n == 1:
        return ColoredGraph(m, k=3)
    for node in tree.nodes():
        if node.is_leaf:
            continue
        groups = [np.asarray(c.leaves()) for c in node.children]
        for (i, j), c in node.cross.items():
            m[np.ix_(groups[i], groups[j])] = c
            m[np.ix_(groups[j], groups[i])] = c
    return ColoredGraph(m, k=3)


def decompose(g: ColoredGraph) -> GallaiTree:
    """Recursive monochromatic partitions down to single vertices."""
    witness = find_rainbow_triangle(g)
    if witness is not None:
        raise RainbowTriangleError(witness)
    root = GallaiTree()
    stack = [(root, list(range(g.n)))]
    while stack:
        node, verts = stack.pop()
        if len(verts) == 1:
            node.vertex = verts[0]
            continue
        found = monochromatic_partition(g.induced(verts))
        if found is None:  # pragma: no cover - excluded by the rainbow check
            raise RainbowTriangleError(find_rainbow_triangle(g.induced(verts)))
        a, b, part = found
        node.pair = (a, b)
        node.children = [GallaiTree() for _ in part.parts]
        for i, pi in enumerate(part.parts):
            for j in range(i + 1, len(part.parts)):
                node.cross[(i, j)] = g.color(verts[pi[0]], verts[part.parts[j][0]])
        for child, pi in zip(node.children, part.parts):
            stack.append((child, [verts[x] for x in pi]))
    return root


def random_gallai_tree(n: int, seed=None, *, max_children: int = 4,
                       pairs=((1, 2), (1, 3), (2, 3)), shuffle: bool = True) -> GallaiTree:
    """Random valid tree on ``n`` leaves.

    Each internal node draws its number of children uniformly from
    ``2..max_children``, splits its leaves by a uniform random composition,
    picks a color pair from ``pairs`` and cross colors uniformly from it.
    Leaf labels are a random permutation when ``shuffle`` is set.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if max_children < 2:
        raise ValueError("max_children must be at least 2")
    pairs = [tuple(p) for p in pairs]
    if not pairs or any(len(set(p)) != 2 or not set(p) <= {1, 2, 3} for p in pairs):
        raise ValueError(f"bad color pairs {pairs}")
    rng = np.random.default_rng(seed)
    labels = rng.permutation(n) if shuffle else np.arange(n)
    root = GallaiTree()
    stack = [(root, 0, n)]
    while stack:
        node, start, size = stack.pop()
        if size == 1:
            node.vertex = int(labels[start])
            continue
        kids = int(rng.integers(2, min(max_children, size) + 1))
        cuts = np.sort(rng.choice(np.arange(1, size), size=kids - 1, replace=False))
        bounds = [0, *cuts.tolist(), size]
        node.pair = pairs[int(rng.integers(len(pairs)))]
        node.children = [GallaiTree() for _ in range(kids)]
        for i in range(kids):
            for j in range(i + 1, kids):
                node.cross[(i, j)] = node.pair[int(rng.integers(2))]
        for child, lo, hi in zip(node.children, bounds[:-1], bounds[1:]):
            stack.append((child, start + lo, hi - lo))
    return root


__all__ = [
    "GallaiTree",
    "InvalidTree",
    "RainbowTriangleError",
    "closeness_cost",
    "compose",
    "cross_pair_count",
    "decompose",
    "is_monochromatic_partition",
    "monochromatic_partition",
    "other_colors",
    "random_gallai_tree",
]
