"""Colored complete graphs, digraphs, and exact counting primitives.

Vertices are 0-based integers, colors are 1-based.  Both graph types hold a
dense numpy matrix that is frozen (read-only) after construction; every
mutation goes through :func:`apply_edits` and produces a new value.
"""

from __future__ import annotations

import itertools
import json
import os
from collections.abc import Iterable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

DEFAULT_BUDGET = 10**9


class UnsupportedColorCount(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    """Raised instead of truncating an exact enumeration."""


class EditConflict(ValueError):
    pass


def default_budget() -> int:
    return int(os.environ.get("GALLAI_LAB_BUDGET", DEFAULT_BUDGET))


class ColoredGraph:
    """A k-colored complete graph on ``n`` vertices.

    ``matrix[u, v]`` is the color of the pair {u, v}; the diagonal is 0.
    """

    __slots__ = ("k", "matrix", "n")

    def __init__(self, matrix, k: int = 3):
        m = np.array(matrix, dtype=np.int8)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
            raise ValueError("color matrix must be square and non-empty")
        if k < 2:
            raise ValueError("need at least two colors")
        np.fill_diagonal(m, 0)
        if not np.array_equal(m, m.T):
            raise ValueError("color matrix must be symmetric")
        off = ~np.eye(m.shape[0], dtype=bool)
        if m.shape[0] > 1 and (m[off].min() < 1 or m[off].max() > k):
            raise ValueError(f"colors must lie in [1..{k}]")
        m.setflags(write=False)
        self.n = m.shape[0]
        self.k = k
        self.matrix = m

    @classmethod
    def constant(cls, n: int, color: int = 1, k: int = 3) -> ColoredGraph:
        return cls(np.full((n, n), color, dtype=np.int8), k=k)

    @classmethod
    def from_pairs(cls, n: int, colors: dict, k: int = 3, default: int = 1) -> ColoredGraph:
        m = np.full((n, n), default, dtype=np.int8)
        for (u, v), c in colors.items():
            m[u, v] = m[v, u] = c
        return cls(m, k=k)

    @classmethod
    def from_upper(cls, n: int, upper: Sequence[int], k: int = 3) -> ColoredGraph:
        if len(upper) != n * (n - 1) // 2:
            raise ValueError(f"expected {n * (n - 1) // 2} colors, got {len(upper)}")
        m = np.zeros((n, n), dtype=np.int8)
        iu = np.triu_indices(n, 1)
        m[iu] = np.asarray(upper, dtype=np.int8)
        m = m + m.T
        return cls(m, k=k)

    def color(self, u: int, v: int) -> int:
        if u == v:
            raise ValueError("no self-pairs")
        return int(self.matrix[u, v])

    def upper(self) -> np.ndarray:
        """Row-major upper triangle; pair (u, v), u < v, sits at u*n - u(u+1)/2 + (v-u-1)."""
        return self.matrix[np.triu_indices(self.n, 1)]

    def onehot(self, c: int) -> np.ndarray:
        return (self.matrix == c).astype(np.float64)

    def color_degrees(self) -> np.ndarray:
        """``deg[x, i-1]`` is the number of color-i edges at x."""
        return np.stack([(self.matrix == c).sum(axis=1) for c in range(1, self.k + 1)], axis=1)

    def induced(self, vertices: Sequence[int]) -> ColoredGraph:
        idx = np.asarray(vertices, dtype=np.intp)
        return ColoredGraph(self.matrix[np.ix_(idx, idx)], k=self.k)

    def with_matrix(self, matrix) -> ColoredGraph:
        return ColoredGraph(matrix, k=self.k)

    def __eq__(self, other):
        return (
            isinstance(other, ColoredGraph)
            and self.k == other.k
            and np.array_equal(self.matrix, other.matrix)
        )

    def __hash__(self):
        return hash((self.k, self.matrix.tobytes()))

    def __repr__(self):
        return f"ColoredGraph(n={self.n}, k={self.k})"

    def to_json(self) -> dict:
        return {"n": self.n, "k": self.k, "colors": [int(c) for c in self.upper()]}

    @classmethod
    def from_json(cls, data: dict) -> ColoredGraph:
        return cls.from_upper(int(data["n"]), data["colors"], k=int(data["k"]))


class Digraph:
    """Loopless digraph; anti-parallel edges allowed, parallel edges impossible."""

    __slots__ = ("adj", "n")

    def __init__(self, adj):
        a = np.array(adj, dtype=bool)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("adjacency must be square")
        if a.diagonal().any():
            raise ValueError("loops are not allowed")
        a.setflags(write=False)
        self.n = a.shape[0]
        self.adj = a

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> Digraph:
        a = np.zeros((n, n), dtype=bool)
        for u, v in edges:
            if u == v:
                raise ValueError(f"loop at {u}")
            if a[u, v]:
                raise ValueError(f"duplicate edge ({u}, {v})")
            a[u, v] = True
        return cls(a)

    def edges(self) -> list[tuple[int, int]]:
        return [(int(u), int(v)) for u, v in zip(*np.nonzero(self.adj))]

    def induced(self, vertices: Sequence[int]) -> Digraph:
        idx = np.asarray(vertices, dtype=np.intp)
        return Digraph(self.adj[np.ix_(idx, idx)])

    def __eq__(self, other):
        return isinstance(other, Digraph) and np.array_equal(self.adj, other.adj)

    def __hash__(self):
        return hash(self.adj.tobytes())

    def __repr__(self):
        return f"Digraph(n={self.n}, edges={int(self.adj.sum())})"

    def to_json(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.edges()]}

    @classmethod
    def from_json(cls, data: dict) -> Digraph:
        return cls.from_edges(int(data["n"]), [tuple(e) for e in data["edges"]])


def dumps(obj: dict) -> str:
    """Canonical JSON text; loading and re-dumping is byte-identical."""
    return json.dumps(obj, separators=(",", ":")) + "\n"


def load_graph(path) -> ColoredGraph | Digraph:
    with open(path) as fh:
        data = json.load(fh)
    return graph_from_json(data)


def graph_from_json(data: dict) -> ColoredGraph | Digraph:
    if "colors" in data:
        return ColoredGraph.from_json(data)
    if "edges" in data:
        return Digraph.from_json(data)
    raise ValueError("not a graph document: expected 'colors' or 'edges'")


def save_graph(graph: ColoredGraph | Digraph, path) -> None:
    with open(path, "w") as fh:
        fh.write(dumps(graph.to_json()))


# -- named patterns -----------------------------------------------------------

def rainbow_triangle() -> ColoredGraph:
    return ColoredGraph.from_pairs(3, {(0, 1): 1, (0, 2): 2, (1, 2): 3})


def f4_pattern() -> ColoredGraph:
    """The 4-vertex 3-coloring in which every color class is a perfect matching."""
    return ColoredGraph.from_pairs(
        4, {(0, 1): 1, (2, 3): 1, (0, 3): 2, (1, 2): 2, (0, 2): 3, (1, 3): 3}
    )


def d3_pattern() -> Digraph:
    """Edges a1->a3, a2->a3, a3->a2 (0-based: 0->2, 1->2, 2->1)."""
    return Digraph.from_edges(3, [(0, 2), (1, 2), (2, 1)])


# -- projection and counting --------------------------------------------------

def color_projection(d: Digraph) -> ColoredGraph:
    """Color each pair by 1 + (number of edges between its endpoints)."""
    a = d.adj.astype(np.int8)
    return ColoredGraph(a + a.T + 1, k=3)


def count_rainbow_triangles(g: ColoredGraph) -> int:
    if g.k != 3:
        raise UnsupportedColorCount(f"rainbow triangles need k=3, got k={g.k}")
    # trace(A1 A2 A3) visits each rainbow triangle exactly once
    a1, a2, a3 = (g.onehot(c) for c in (1, 2, 3))
    return int(round(np.einsum("ij,ji->", a1 @ a2, a3)))


def find_rainbow_triangle(g: ColoredGraph) -> tuple[int, int, int] | None:
    """Lexicographically smallest rainbow triple, or None."""
    if g.k != 3:
        raise UnsupportedColorCount(f"rainbow triangles need k=3, got k={g.k}")
    m = g.matrix
    for u in range(g.n - 2):
        row = m[u]
        for v in range(u + 1, g.n - 1):
            cuv = row[v]
            w = np.nonzero((row[v + 1:] != cuv) & (m[v, v + 1:] != cuv)
                           & (row[v + 1:] != m[v, v + 1:]))[0]
            if len(w):
                return (u, v, int(w[0]) + v + 1)
    return None


def triangles_avoiding_color(g: ColoredGraph, c: int) -> int:
    if not 1 <= c <= g.k:
        raise ValueError(f"color {c} outside [1..{g.k}]")
    b = (g.matrix != c).astype(np.float64)
    np.fill_diagonal(b, 0.0)
    return int(round(np.einsum("ij,ji->", b @ b, b))) // 6


# -- copies -------------------------------------------------------------------

@dataclass
class CopyFamily:
    """Copies of a small pattern in a host; position i of a tuple plays pattern vertex i."""

    pattern: ColoredGraph | Digraph
    copies: list[tuple[int, ...]]
    injections: int | None = None

    def __len__(self):
        return len(self.copies)

    def validate(self, host_n: int) -> None:
        f = self.pattern.n
        for t in self.copies:
            if len(t) != f or len(set(t)) != f or min(t) < 0 or max(t) >= host_n:
                raise ValueError(f"bad copy tuple {t}")

    def to_json(self) -> dict:
        return {
            "pattern": self.pattern.to_json(),
            "role_map": list(range(self.pattern.n)),
            "copies": [list(map(int, t)) for t in self.copies],
        }

    @classmethod
    def from_json(cls, data: dict) -> CopyFamily:
        return cls(graph_from_json(data["pattern"]), [tuple(t) for t in data["copies"]])


def automorphism_count(pattern: ColoredGraph | Digraph) -> int:
    mat = pattern.matrix if isinstance(pattern, ColoredGraph) else pattern.adj
    f = mat.shape[0]
    count = 0
    for perm in itertools.permutations(range(f)):
        p = np.asarray(perm)
        if np.array_equal(mat[np.ix_(p, p)], mat):
            count += 1
    return count


def enumerate_copies(host, pattern, mode: str | None = None, *, max_pattern: int = 5,
                     budget: int | None = None, workers: int = 1) -> CopyFamily:
    """All copies of ``pattern`` in ``host``.

    ``mode`` is ``"colored"`` (pair colors preserved) or ``"induced"``
    (ordered edges and non-edges preserved); it defaults to the host type.
    Copies are returned once per vertex set; ``injections`` holds the raw
    count of pattern-preserving maps.  The backtracking search counts its
    nodes and raises :class:`BudgetExceeded` once ``budget`` is passed.
    """
    if mode is None:
        mode = "colored" if isinstance(host, ColoredGraph) else "induced"
    if mode == "colored":
        if not (isinstance(host, ColoredGraph) and isinstance(pattern, ColoredGraph)):
            raise TypeError("colored mode needs colored host and pattern")
        hm, pm = host.matrix, pattern.matrix
    elif mode == "induced":
        if not (isinstance(host, Digraph) and isinstance(pattern, Digraph)):
            raise TypeError("induced mode needs digraph host and pattern")
        hm, pm = host.adj, pattern.adj
    else:
        raise ValueError(f"unknown mode {mode!r}")
    f = pattern.n
    if f > max_pattern:
        raise ValueError(f"pattern has {f} vertices, cap is {max_pattern}")
    if budget is None:
        budget = default_budget()
    n = host.n
    if f > n:
        return CopyFamily(pattern, [], 0)

    def candidates(assigned: list[int], depth: int) -> np.ndarray:
        mask = np.ones(n, dtype=bool)
        for j, u in enumerate(assigned):
            mask &= hm[u] == pm[j, depth]
            if mode == "induced":
                mask &= hm[:, u] == pm[depth, j]
            mask[u] = False
        return mask

    def search(first_vertices) -> tuple[list[tuple[int, ...]], int]:
        found: list[tuple[int, ...]] = []
        nodes = 0
        stack = [[int(v)] for v in first_vertices]
        stack.reverse()
        while stack:
            assigned = stack.pop()
            nodes += 1
            if nodes > budget:
                raise BudgetExceeded(f"enumeration passed budget of {budget} search nodes")
            depth = len(assigned)
            if depth == f:
                found.append(tuple(assigned))
                continue
            nxt = np.nonzero(candidates(assigned, depth))[0]
            if depth == f - 1:
                nodes += len(nxt)
                found.extend(tuple(assigned) + (int(v),) for v in nxt)
                continue
            stack.extend(assigned + [int(v)] for v in nxt[::-1])
        return found, nodes

    firsts = np.arange(n)
    if workers > 1:
        chunks = np.array_split(firsts, workers)
        with ThreadPoolExecutor(workers) as pool:
            results = list(pool.map(search, chunks))
        maps = [t for r, _ in results for t in r]
        if sum(nodes for _, nodes in results) > budget:
            raise BudgetExceeded(f"enumeration passed budget of {budget} search nodes")
    else:
        maps, _ = search(firsts)

    seen: dict[frozenset, tuple[int, ...]] = {}
    for t in maps:
        seen.setdefault(frozenset(t), t)
    return CopyFamily(pattern, list(seen.values()), len(maps))


def verify_pair_disjoint(family: CopyFamily | Sequence[Sequence[int]]):
    """Return (ok, violations) where violations lists index pairs sharing >= 2 vertices."""
    copies = family.copies if isinstance(family, CopyFamily) else family
    owner: dict[tuple[int, int], list[int]] = {}
    for idx, t in enumerate(copies):
        for u, v in itertools.combinations(sorted(t), 2):
            owner.setdefault((u, v), []).append(idx)
    bad = set()
    for users in owner.values():
        for i, j in itertools.combinations(users, 2):
            bad.add((i, j))
    return not bad, sorted(bad)


def is_copy(host, pattern, t: Sequence[int]) -> bool:
    idx = np.asarray(t, dtype=np.intp)
    if len(set(t)) != len(t):
        return False
    if isinstance(host, ColoredGraph):
        return np.array_equal(host.matrix[np.ix_(idx, idx)], pattern.matrix)
    return np.array_equal(host.adj[np.ix_(idx, idx)], pattern.adj)


# -- edits --------------------------------------------------------------------

@dataclass(frozen=True)
class Edit:
    u: int
    v: int
    old: int
    new: int


@dataclass
class EditTranscript:
    edits: list[Edit] = field(default_factory=list)

    @property
    def cost(self) -> int:
        return sum(1 for e in self.edits if e.old != e.new)

    def __len__(self):
        return len(self.edits)

    def __iter__(self):
        return iter(self.edits)

    def append(self, u: int, v: int, old: int, new: int) -> None:
        u, v = min(u, v), max(u, v)
        self.edits.append(Edit(u, v, old, new))

    def inverse(self) -> EditTranscript:
        return EditTranscript([Edit(e.u, e.v, e.new, e.old) for e in reversed(self.edits)])

    def to_jsonl(self) -> str:
        return "".join(
            json.dumps({"u": e.u, "v": e.v, "old": e.old, "new": e.new}) + "\n" for e in self.edits
        )

    @classmethod
    def from_jsonl(cls, text: str) -> EditTranscript:
        edits = []
        for line in text.splitlines():
            if line.strip():
                d = json.loads(line)
                edits.append(Edit(int(d["u"]), int(d["v"]), int(d["old"]), int(d["new"])))
        return cls(edits)


def apply_edits(g: ColoredGraph, transcript: EditTranscript) -> ColoredGraph:
    m = g.matrix.copy()
    seen = set()
    for e in transcript:
        key = (min(e.u, e.v), max(e.u, e.v))
        if e.u == e.v or not (0 <= e.u < g.n and 0 <= e.v < g.n):
            raise ValueError(f"invalid pair {key}")
        if key in seen:
            raise EditConflict(f"pair {key} edited twice")
        seen.add(key)
        if m[e.u, e.v] != e.old:
            raise EditConflict(f"pair {key}: expected color {e.old}, found {m[e.u, e.v]}")
        if not 1 <= e.new <= g.k:
            raise ValueError(f"pair {key}: new color {e.new} out of range")
        m[e.u, e.v] = m[e.v, e.u] = e.new
    return g.with_matrix(m)


def recolor_random_pairs(g: ColoredGraph, count: int, seed) -> tuple[ColoredGraph, EditTranscript]:
    """Recolor ``count`` distinct uniformly chosen pairs, each to a different color."""
    total = g.n * (g.n - 1) // 2
    if not 0 <= count <= total:
        raise ValueError(f"cannot recolor {count} of {total} pairs")
    rng = np.random.default_rng(seed)
    flat = np.sort(rng.choice(total, size=count, replace=False))
    iu, iv = np.triu_indices(g.n, 1)
    shift = rng.integers(1, g.k, size=count)
    t = EditTranscript()
    for idx, sh in zip(flat, shift):
        u, v = int(iu[idx]), int(iv[idx])
        old = int(g.matrix[u, v])
        t.append(u, v, old, (old - 1 + int(sh)) % g.k + 1)
    return apply_edits(g, t), t


# -- partitions ---------------------------------------------------------------

@dataclass(frozen=True)
class VertexPartition:
    """Ordered, disjoint, non-empty parts covering range(n)."""

    parts: tuple[tuple[int, ...], ...]
    n: int

    def __post_init__(self):
        seen = np.zeros(self.n, dtype=np.int64)
        for part in self.parts:
            if not part:
                raise ValueError("empty part")
            for v in part:
                if not 0 <= v < self.n:
                    raise ValueError(f"vertex {v} outside range({self.n})")
                seen[v] += 1
        if (seen > 1).any():
            raise ValueError(f"overlapping parts at vertex {int(np.argmax(seen > 1))}")
        if (seen == 0).any():
            raise ValueError(f"vertex {int(np.argmin(seen))} not covered")

    @classmethod
    def of(cls, parts: Iterable[Iterable[int]], n: int | None = None) -> VertexPartition:
        parts = tuple(tuple(sorted(int(v) for v in p)) for p in parts)
        if n is None:
            n = sum(len(p) for p in parts)
        return cls(parts, n)

    def labels(self) -> np.ndarray:
        lab = np.empty(self.n, dtype=np.intp)
        for i, part in enumerate(self.parts):
            lab[list(part)] = i
        return lab

    def sizes(self) -> list[int]:
        return [len(p) for p in self.parts]

    def __len__(self):
        return len(self.parts)


def cross_pair_count(p: VertexPartition | Sequence[int]) -> int:
    """e(P): number of pairs split by the partition (or by a list of part sizes)."""
    sizes = p.sizes() if isinstance(p, VertexPartition) else [int(a) for a in p]
    total = sum(sizes)
    return (total * total - sum(a * a for a in sizes)) // 2


def part_color_counts(g: ColoredGraph, labels: np.ndarray, parts: int) -> np.ndarray:
    """``counts[c-1, i, j]`` = number of color-c pairs between parts i and j (i != j)."""
    ind = np.zeros((g.n, parts))
    ind[np.arange(g.n), labels] = 1.0
    out = np.empty((g.k, parts, parts), dtype=np.int64)
    for c in range(1, g.k + 1):
        out[c - 1] = np.rint(ind.T @ g.onehot(c) @ ind).astype(np.int64)
    return out
