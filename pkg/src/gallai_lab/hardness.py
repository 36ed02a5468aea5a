"""Behrend-type constructions: graphs with many pair-disjoint copies of a pattern but few copies overall.

Host vertices are laid out in consecutive blocks V_1, V_2, ... with
|V_i| = i*m.  A copy is planted at positions v_i = x + (i-1)s (1-based
inside V_i) for every x in [1..m] and s in an equation-avoiding set S.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
import sympy

from .graphs import (
    ColoredGraph,
    CopyFamily,
    Digraph,
    color_projection,
    d3_pattern,
    f4_pattern,
    is_copy,
    triangles_avoiding_color,
    verify_pair_disjoint,
)


class ConstructionError(ValueError):
    pass


# -- design family ------------------------------------------------------------

@dataclass
class DesignFamily:
    r: int
    d: int
    p: int
    tuples: np.ndarray  # shape (p*p, d), entries in 1..p

    def __len__(self):
        return len(self.tuples)


def max_agreement(tuples: np.ndarray) -> int:
    """Largest number of coordinates on which two distinct tuples agree (0 if fewer than two)."""
    tuples = np.asarray(tuples)
    if len(tuples) < 2:
        return 0
    d = tuples.shape[1]
    # two tuples agreeing on coordinates i and j collide in the (i, j) projection
    for i, j in itertools.combinations(range(d), 2):
        keys = tuples[:, i].astype(np.int64) * (tuples.max() + 1) + tuples[:, j]
        if len(np.unique(keys)) < len(keys):
            return 2
    return 1 if d >= 1 else 0


def design_family(r: int, d: int, *, check_limit: int = 200) -> DesignFamily:
    """p^2 tuples in [1..p]^d, pairwise agreeing in at most one coordinate, p the least prime > r/2."""
    if d < 2 or r < 2 * d:
        raise ValueError(f"need d >= 2 and r >= 2d, got r={r}, d={d}")
    p = int(sympy.nextprime(r // 2))
    a, b = np.meshgrid(np.arange(p), np.arange(p), indexing="ij")
    a, b = a.ravel(), b.ravel()
    i = np.arange(d)
    tuples = (a[:, None] + i[None, :] * b[:, None]) % p + 1
    if p <= check_limit and max_agreement(tuples) > 1:  # pragma: no cover - p > d rules this out
        raise ConstructionError("design family property failed")
    return DesignFamily(r, d, p, tuples)


# -- equation-avoiding sets ---------------------------------------------------

@dataclass(frozen=True)
class EquationFamily:
    """Linear equations to avoid over distinct elements.

    ``pq`` holds (p, q) pairs for p*s1 + q*s2 = (p+q)*s3 over distinct
    values; ``four`` forbids every solution of s1 + s2 + s3 = 3*s4 other
    than s1 = s2 = s3 = s4 (repeats allowed, e.g. 2a + b = 3c).
    """

    pq: tuple[tuple[int, int], ...] = ()
    four: bool = False

    def __post_init__(self):
        for p, q in self.pq:
            if p < 1 or q < 1:
                raise ValueError("coefficients must be at least 1")

    @classmethod
    def three_ap(cls) -> EquationFamily:
        return cls(pq=((1, 1),))

    @classmethod
    def four_term(cls) -> EquationFamily:
        return cls(four=True)

    @classmethod
    def weighted(cls, f: int) -> EquationFamily:
        """All (p, q) with 1 <= p, q <= f-1."""
        return cls(pq=tuple((p, q) for p in range(1, f) for q in range(1, f)))

    @property
    def coefficient_sum(self) -> int:
        sums = [p + q for p, q in self.pq]
        if self.four:
            sums.append(3)
        return max(sums, default=1)

    def to_json(self) -> dict:
        return {"pq": [list(x) for x in self.pq], "four": self.four}

    @classmethod
    def from_json(cls, data: dict) -> EquationFamily:
        return cls(pq=tuple(tuple(x) for x in data["pq"]), four=bool(data["four"]))


def verify_avoiding_set(s, family: EquationFamily):
    """Exhaustive check; returns (True, None) or (False, witness).

    Witnesses are (s1, s2, s3) for the weighted shape and (s1, s2, s3, s4)
    for the four-term shape.
    """
    vals = np.unique(np.asarray(sorted(s), dtype=np.int64))
    if len(vals) < 2 or (len(vals) < 3 and not family.four):
        return True, None
    lo, hi = int(vals[0]), int(vals[-1])
    member = np.zeros(hi - lo + 1, dtype=bool)
    member[vals - lo] = True

    def contains(x):
        inside = (x >= lo) & (x <= hi)
        out = np.zeros(x.shape, dtype=bool)
        out[inside] = member[x[inside] - lo]
        return out

    s1, s2 = np.meshgrid(vals, vals, indexing="ij")
    for p, q in family.pq:
        num = p * s1 + q * s2
        ok = (num % (p + q) == 0) & (s1 != s2)
        s3 = num // (p + q)
        hit = ok & contains(s3) & (s3 != s1) & (s3 != s2)
        if hit.any():
            i, j = np.argwhere(hit)[0]
            return False, (int(s1[i, j]), int(s2[i, j]), int(s3[i, j]))
    if family.four:
        # count s1 <= s2 with s1 + s2 = 3*s4 - s3, minus the all-equal solution
        iu = np.triu_indices(len(vals))
        sums = vals[iu[0]] + vals[iu[1]]
        hist = np.bincount(sums - 2 * lo, minlength=2 * (hi - lo) + 1)
        s3, s4 = s1, s2
        target = 3 * s4 - s3
        inside = (target >= 2 * lo) & (target <= 2 * hi)
        cnt = np.zeros(target.shape, dtype=np.int64)
        cnt[inside] = hist[target[inside] - 2 * lo]
        cnt -= (s3 == s4).astype(np.int64)
        hit = cnt > 0
        if hit.any():
            i, j = np.argwhere(hit)[0]
            a3, a4 = int(s3[i, j]), int(s4[i, j])
            rest = 3 * a4 - a3
            for a1 in vals.tolist():
                a2 = rest - a1
                if a1 <= a2 and lo <= a2 <= hi and member[a2 - lo] and len({a1, a2, a3, a4}) > 1:
                    return False, (a1, a2, a3, a4)
            raise AssertionError("four-term count and witness search disagree")  # pragma: no cover
    return True, None


def _extends(x: int, chosen: set, ordered: list, family: EquationFamily) -> bool:
    """True if adding x to ``chosen`` creates no forbidden solution."""
    for p, q in family.pq:
        for y in ordered:
            # x as s3, y as s1
            num = (p + q) * x - p * y
            if num % q == 0:
                z = num // q
                if z in chosen and z != y and z != x:
                    return False
            # x as s1, y as s2
            num = p * x + q * y
            if num % (p + q) == 0:
                z = num // (p + q)
                if z in chosen and z != y and z != x:
                    return False
            # x as s2, y as s1
            num = p * y + q * x
            if num % (p + q) == 0:
                z = num // (p + q)
                if z in chosen and z != y and z != x:
                    return False
    if family.four:
        pool = ordered + [x]
        for y in pool:
            for z in pool:
                # x as s4
                w = 3 * x - y - z
                if (w in chosen or w == x) and not (y == z == w == x):
                    return False
                # x as s1
                tot = x + y + z
                if tot % 3 == 0:
                    w = tot // 3
                    if (w in chosen or w == x) and not (y == z == w == x):
                        return False
    return True


def greedy_avoiding_set(m: int, family: EquationFamily) -> list[int]:
    chosen: set[int] = set()
    ordered: list[int] = []
    for x in range(1, m + 1):
        if _extends(x, chosen, ordered, family):
            chosen.add(x)
            ordered.append(x)
    return ordered


def behrend_set(m: int, family: EquationFamily) -> list[int]:
    """Sphere construction: digit vectors of one squared norm, base wide enough to avoid carries."""
    if m < 1:
        return []
    csum = family.coefficient_sum
    best: list[int] = [1]
    for dim in range(1, max(2, int(math.log2(m)) + 1)):
        # largest digit bound h with base B = csum*h + 1 and top value <= m
        h = 0
        while True:
            h2 = h + 1
            base = csum * h2 + 1
            top = 1 + h2 * (base**dim - 1) // (base - 1)
            if top > m:
                break
            h = h2
        if h == 0:
            continue
        base = csum * h + 1
        digits = np.array(list(itertools.product(range(h + 1), repeat=dim)), dtype=np.int64)
        norms = (digits**2).sum(axis=1)
        shells, sizes = np.unique(norms, return_counts=True)
        shell = shells[sizes.argmax()]
        chosen = digits[norms == shell]
        powers = base ** np.arange(dim, dtype=np.int64)
        vals = sorted(int(v) for v in chosen @ powers + 1)
        if len(vals) > len(best):
            best = vals
    return best


def avoiding_set(m: int, family: EquationFamily, method: str = "greedy") -> list[int]:
    """A subset of [1..m] with no solution to any equation in ``family``; always verified."""
    if m < 1:
        raise ValueError("m must be positive")
    if method in ("greedy", "exhaustive-greedy"):
        s = greedy_avoiding_set(m, family)
    elif method == "behrend":
        s = behrend_set(m, family)
    else:
        raise ValueError(f"unknown method {method!r}")
    while True:
        ok, witness = verify_avoiding_set(s, family)
        if ok:
            return sorted(s)
        s = [v for v in s if v != witness[-1]]  # pragma: no cover - both builders are sound


# -- blowups ------------------------------------------------------------------

def blowup(h, factor: int, inside=None):
    """Replace each vertex v by the class {v*factor, ..., v*factor + factor - 1}.

    For colored hosts ``inside`` is the color of pairs inside a class (a
    single color, or a per-vertex sequence); for digraphs classes become
    transitive tournaments ordered by id.
    """
    if factor < 1:
        raise ValueError("factor must be at least 1")
    n = h.n * factor
    if n > 200_000:
        raise OverflowError(f"blowup size {n} too large")
    cls = np.repeat(np.arange(h.n), factor)
    same = cls[:, None] == cls[None, :]
    if isinstance(h, ColoredGraph):
        if inside is None:
            raise ValueError("colored blowups need an inside color")
        m = h.matrix[np.ix_(cls, cls)].copy()
        inside_colors = np.broadcast_to(np.asarray(inside, dtype=np.int8), (h.n,))
        m[same] = np.repeat(inside_colors, factor)[np.nonzero(same)[0]]
        np.fill_diagonal(m, 0)
        return ColoredGraph(m, k=h.k)
    a = h.adj[np.ix_(cls, cls)].copy()
    upper = np.triu(np.ones((n, n), dtype=bool), 1)
    a[same] = upper[same]
    return Digraph(a)


def blow_up_family(copies, factor: int, design: np.ndarray | None):
    """Copies in the blowup: one per (host copy, design tuple) pair."""
    out = []
    for t in copies:
        base = np.asarray(t, dtype=np.int64) * factor
        for row in design:
            out.append(tuple(int(v) for v in base + np.asarray(row) - 1))
    return out


def blowup_design(factor: int, f: int) -> tuple[np.ndarray, str]:
    """Design tuples indexing blowup classes; the diagonal family when factor < 2f."""
    if factor >= 2 * f:
        return design_family(factor, f).tuples, "design"
    return np.repeat(np.arange(1, factor + 1)[:, None], f, axis=1), "diagonal"


# -- constructions ------------------------------------------------------------

@dataclass
class HardnessInstance:
    kind: str
    host: ColoredGraph | Digraph
    blown: ColoredGraph | Digraph
    pattern: ColoredGraph | Digraph
    host_copies: list[tuple[int, ...]]
    blown_copies: list[tuple[int, ...]]
    m: int
    s: list[int]
    factor: int
    blocks: list[tuple[int, int]]
    claims: dict = field(default_factory=dict)

    @property
    def f(self) -> int:
        return self.pattern.n

    def family(self) -> CopyFamily:
        return CopyFamily(self.pattern, self.host_copies)


def _layout(f: int, m: int) -> tuple[list[int], list[tuple[int, int]]]:
    starts, blocks, pos = [], [], 0
    for i in range(1, f + 1):
        starts.append(pos)
        blocks.append((pos, pos + i * m))
        pos += i * m
    return starts, blocks


def _planted_positions(f: int, m: int, s: list[int]) -> list[tuple[int, ...]]:
    starts, _ = _layout(f, m)
    return [
        tuple(starts[i] + x + i * step - 1 for i in range(f))
        for x in range(1, m + 1)
        for step in s
    ]


def _plant_colored(pattern: ColoredGraph, f: int, m: int, s: list[int], background: int):
    _, blocks = _layout(f, m)
    nv = blocks[-1][1]
    mat = np.full((nv, nv), background, dtype=np.int8)
    owner = -np.ones((nv, nv), dtype=np.int64)
    copies = _planted_positions(f, m, s)
    for idx, t in enumerate(copies):
        for i, j in itertools.combinations(range(f), 2):
            u, v = t[i], t[j]
            if owner[u, v] >= 0:
                raise ConstructionError(f"copies {owner[u, v]} and {idx} share pair {(u, v)}")
            owner[u, v] = owner[v, u] = idx
            mat[u, v] = mat[v, u] = pattern.matrix[i, j]
    return ColoredGraph(mat, k=pattern.k), copies, blocks


def has_triangle_avoiding(pattern: ColoredGraph, color: int) -> bool:
    m = pattern.matrix
    return any(
        m[i, j] != color and m[j, l] != color and m[i, l] != color
        for i, j, l in itertools.combinations(range(pattern.n), 3)
    )


def _finish(kind, host, pattern, copies, m, s, factor, blocks, inside, extra=None):
    design, design_kind = blowup_design(factor, pattern.n)
    blown = blowup(host, factor, inside)
    blown_copies = blow_up_family(copies, factor, design)
    inst = HardnessInstance(kind, host, blown, pattern, copies, blown_copies, m, list(s),
                            factor, blocks)
    inst.claims = {
        "kind": kind,
        "m": m,
        "S": list(s),
        "f": pattern.n,
        "factor": factor,
        "design": design_kind,
        "host_vertices": host.n,
        "blowup_vertices": blown.n,
        "planted_host": len(copies),
        "planted_blowup": len(blown_copies),
        "host_copies_exact": m * len(s),
        "implied_epsilon": len(s) / (4 * pattern.n**4 * m),
    }
    if extra:
        inst.claims.update(extra)
    ok, bad = verify_pair_disjoint(copies)
    if not ok:  # pragma: no cover - ruled out by _plant_colored
        raise ConstructionError(f"host family not pair-disjoint: {bad[:3]}")
    return inst


def triangle_hardness(pattern: ColoredGraph, avoided: int, m: int, factor: int = 1,
                      s: list[int] | None = None) -> HardnessInstance:
    """Host with m*|S| planted pair-disjoint copies of ``pattern``; every other pair gets ``avoided``."""
    f = pattern.n
    if f < 3:
        raise ValueError("pattern needs at least three vertices")
    if not 1 <= avoided <= pattern.k:
        raise ValueError(f"color {avoided} out of range")
    if not has_triangle_avoiding(pattern, avoided):
        raise ConstructionError(f"pattern has no triangle avoiding color {avoided}")
    if s is None:
        s = avoiding_set(m, EquationFamily.weighted(f))
    host, copies, blocks = _plant_colored(pattern, f, m, s, avoided)
    extra = {
        "avoided": avoided,
        "triangles_avoiding": triangles_avoiding_color(host, avoided),
        "triangles_avoiding_bound": f**4 * m * m,
    }
    return _finish("triangle", host, pattern, copies, m, s, factor, blocks, avoided, extra)


def f4_hardness(m: int, factor: int = 1, s: list[int] | None = None) -> HardnessInstance:
    if m < 1:
        raise ValueError("m must be positive")
    pattern = f4_pattern()
    if s is None:
        s = avoiding_set(m, EquationFamily.four_term())
    host, copies, blocks = _plant_colored(pattern, 4, m, s, 3)
    for i, j in ((0, 2), (1, 3)):
        (a0, a1), (b0, b1) = blocks[i], blocks[j]
        if not (host.matrix[a0:a1, b0:b1] == 3).all():  # pragma: no cover
            raise ConstructionError(f"blocks {i + 1} and {j + 1} are not all color 3")
    inst = _finish("f4", host, pattern, copies, m, s, factor, blocks, 3)
    inst.claims["implied_epsilon"] = len(s) / (400 * m)
    return inst


def d3_hardness(m: int, factor: int = 1, s: list[int] | None = None) -> HardnessInstance:
    """Digraph host: planted D3 copies, one edge on every other pair, block-3 -> block-1 unless planted."""
    if m < 1:
        raise ValueError("m must be positive")
    pattern = d3_pattern()
    if s is None:
        s = avoiding_set(m, EquationFamily.three_ap())
    _, blocks = _layout(3, m)
    nv = blocks[-1][1]
    block_of = np.repeat(np.arange(3), [hi - lo for lo, hi in blocks])
    adj = np.triu(np.ones((nv, nv), dtype=bool), 1)
    one_three = (block_of[:, None] == 0) & (block_of[None, :] == 2)
    adj[one_three] = False
    adj[one_three.T] = True
    copies = _planted_positions(3, m, s)
    owned = np.zeros((nv, nv), dtype=bool)
    for t in copies:
        for i, j in itertools.combinations(range(3), 2):
            u, v = t[i], t[j]
            if owned[u, v]:
                raise ConstructionError(f"pair {(u, v)} planted twice")
            owned[u, v] = owned[v, u] = True
            adj[u, v] = pattern.adj[i, j]
            adj[v, u] = pattern.adj[j, i]
    host = Digraph(adj)
    inst = _finish("d3", host, pattern, copies, m, s, factor, blocks, None)
    inst.claims["implied_epsilon"] = len(s) / (144 * m)
    return inst


def lift_to_digraph(g: ColoredGraph, pattern: Digraph, copies) -> Digraph:
    """A digraph whose projection is ``g`` and in which every listed copy is an induced ``pattern``.

    Pairs of color 3 get both edges; color-2 pairs inside a listed copy are
    oriented as in ``pattern``, all other color-2 pairs from lower to higher id.
    """
    if g.k != 3:
        raise ValueError("lifting needs a 3-colored graph")
    ok, bad = verify_pair_disjoint(copies)
    if not ok:
        raise ConstructionError(f"copies {bad[0]} are not pair-disjoint")
    want = color_projection(pattern)
    mat = g.matrix
    adj = np.zeros((g.n, g.n), dtype=bool)
    adj[mat == 3] = True
    single = np.triu(mat == 2, 1)
    adj[single] = True
    for t in copies:
        if not is_copy(g, want, t):
            raise ConstructionError(f"tuple {tuple(t)} is not colored like the pattern's projection")
        idx = np.asarray(t)
        adj[np.ix_(idx, idx)] = pattern.adj
    return Digraph(adj)


def block_transversal_count(inst: HardnessInstance) -> int:
    """Count pattern copies using one vertex per block (brute force over block products)."""
    host, pattern = inst.host, inst.pattern
    mat = host.matrix if isinstance(host, ColoredGraph) else host.adj
    pm = pattern.matrix if isinstance(pattern, ColoredGraph) else pattern.adj
    ranges = [np.arange(lo, hi) for lo, hi in inst.blocks]
    f = pattern.n
    count = 0
    for head in itertools.product(*ranges[:-2]):
        ok = all(mat[head[i], head[j]] == pm[i, j] for i, j in itertools.combinations(range(f - 2), 2))
        if not ok:
            continue
        a, b = ranges[-2], ranges[-1]
        good = np.ones((len(a), len(b)), dtype=bool)
        good &= mat[np.ix_(a, b)] == pm[f - 2, f - 1]
        good &= (mat[np.ix_(b, a)] == pm[f - 1, f - 2]).T
        for i, u in enumerate(head):
            good &= (mat[u, a] == pm[i, f - 2])[:, None]
            good &= (mat[a, u] == pm[f - 2, i])[:, None]
            good &= (mat[u, b] == pm[i, f - 1])[None, :]
            good &= (mat[b, u] == pm[f - 1, i])[None, :]
        count += int(good.sum())
    return count
