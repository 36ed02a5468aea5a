"""Approximate monochromatic partitions, edit-repair to a Gallai coloring, and a one-sided tester.

Everything random is driven by an explicit seed.  Partitions returned by
:func:`approximate_partition` are certified by exact recounting, so the
sampling parameters only affect how often a certificate is found, never
whether an accepted answer is correct.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .gallai import monochromatic_partition, other_colors
from .graphs import (
    ColoredGraph,
    EditTranscript,
    VertexPartition,
    count_rainbow_triangles,
    cross_pair_count,
    find_rainbow_triangle,
    part_color_counts,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class RepairConfig:
    """Sampling parameters.

    With ``paper_constants`` set, ``seed_size``, ``batch_size``, ``batches``
    and ``density`` are derived from ``epsilon`` (see :meth:`resolved`); the
    resulting sizes are astronomically large for any useful epsilon and only
    serve as documentation of the asymptotic regime.
    """

    epsilon: float = 0.1
    seed_size: int = 12
    batch_size: int = 40
    batches: int = 8
    density: float = 0.02
    retries: int = 64
    seed: int = 0
    paper_constants: bool = False
    exact_shortcut: bool = False
    seat_sample: bool = True
    optimal_targets: bool = False

    def __post_init__(self):
        if not 0 < self.epsilon < 1:
            raise ValueError("epsilon must lie in (0, 1)")
        if not self.paper_constants and min(self.seed_size, self.batch_size, self.batches) < 1:
            raise ValueError("sample sizes must be positive")
        if self.density <= 0 or self.retries < 1:
            raise ValueError("density and retries must be positive")

    @staticmethod
    def paper_values(epsilon: float) -> dict:
        e2 = epsilon * epsilon
        s = 128 * math.log(2000 / e2) / e2
        delta = e2 / (64 * s * s)
        k = 128 / e2
        t = 2 * (k + s * math.log(s)) / delta
        return {"seed_size": s, "density": delta, "batches": k, "batch_size": t}

    def resolved(self) -> RepairConfig:
        if not self.paper_constants:
            return self
        v = self.paper_values(self.epsilon)
        return replace(
            self,
            paper_constants=False,
            seed_size=math.ceil(v["seed_size"]),
            density=v["density"],
            batches=math.ceil(v["batches"]),
            batch_size=math.ceil(v["batch_size"]),
        )


@dataclass
class SampleState:
    seed_set: np.ndarray
    batches: list[np.ndarray]

    def prefix(self, j: int) -> np.ndarray:
        return np.unique(np.concatenate([self.seed_set, *self.batches[:j]]))


@dataclass
class LayeredSets:
    """Nested chains ``chains[l][i]`` (boolean masks over vertices) and the chosen level."""

    chains: list[list[np.ndarray]]
    level: int
    parts: list[np.ndarray]
    fringe: np.ndarray
    rest: np.ndarray


@dataclass
class PartitionResult:
    """Outcome of :func:`approximate_partition`.

    ``targets[i, j]`` is the color every pair between parts i and j is
    recolored to.  On failure ``partition`` holds the best candidate seen.
    """

    ok: bool
    case: str
    a: int | None = None
    b: int | None = None
    partition: VertexPartition | None = None
    targets: np.ndarray | None = None
    cost: int | None = None
    cross_pairs: int | None = None
    attempts: int = 0
    plan_cost: int | None = None

    @property
    def ratio(self) -> float:
        if not self.cross_pairs:
            return math.inf
        return self.cost / self.cross_pairs


def assignment_cost(g: ColoredGraph, p: VertexPartition, targets: np.ndarray) -> int:
    """Exact number of cross pairs whose color differs from its part-pair target."""
    counts = part_color_counts(g, p.labels(), len(p))
    total = counts.sum(axis=0)
    m = len(p)
    cost = 0
    for i in range(m):
        for j in range(i + 1, m):
            cost += int(total[i, j] - counts[targets[i, j] - 1, i, j])
    return cost


def optimal_targets(counts: np.ndarray, a: int, b: int) -> np.ndarray:
    """Per part pair, the better of a and b (ties to a)."""
    keep_a, keep_b = counts[a - 1], counts[b - 1]
    t = np.where(keep_a >= keep_b, a, b).astype(np.int8)
    return t


def certify(g: ColoredGraph, res: PartitionResult, epsilon: float) -> bool:
    """Independent recount of a result's cost against eps * e(P)."""
    if not res.ok:
        return False
    p = res.partition
    if len(p) < 2 or p.n != g.n:
        return False
    t = res.targets
    m = len(p)
    if any(t[i, j] not in (res.a, res.b) for i in range(m) for j in range(i + 1, m)):
        return False
    cost = 0
    mat = g.matrix
    for i, pi in enumerate(p.parts):
        for j in range(i + 1, m):
            block = mat[np.ix_(pi, p.parts[j])]
            cost += int((block != t[i, j]).sum())
    e = cross_pair_count(p)
    return cost == res.cost and e > 0 and cost <= epsilon * e


def _star_case(g: ColoredGraph, eps: float):
    deg = g.color_degrees()
    hits = np.argwhere(deg >= (1 - eps) * (g.n - 1))
    if len(hits) == 0:
        return None
    x, i = int(hits[0][0]), int(hits[0][1]) + 1
    p = VertexPartition.of([[x], [v for v in range(g.n) if v != x]], g.n)
    t = np.full((2, 2), i, dtype=np.int8)
    cost = int(g.n - 1 - deg[x, i - 1])
    return PartitionResult(True, "star", i, i % 3 + 1, p, t, cost, g.n - 1)


def _sparse_color_case(g: ColoredGraph, eps: float):
    pairs = g.n * (g.n - 1) // 2
    per_color = [int((g.upper() == c).sum()) for c in (1, 2, 3)]
    for i in (1, 2, 3):
        if per_color[i - 1] < eps * pairs:
            a, b = other_colors(i)
            p = VertexPartition.of([[v] for v in range(g.n)], g.n)
            t = g.matrix.copy()
            t[t == i] = a
            np.fill_diagonal(t, a)
            return PartitionResult(True, "sparse-color", a, b, p, t, per_color[i - 1], pairs)
    return None


def _exact_case(g: ColoredGraph):
    if count_rainbow_triangles(g) > 0:
        return None
    found = monochromatic_partition(g)
    if found is None:  # pragma: no cover - excluded by the Gallai structure theorem
        return None
    a, b, p = found
    counts = part_color_counts(g, p.labels(), len(p))
    t = optimal_targets(counts, a, b)
    return PartitionResult(True, "exact", a, b, p, t, 0, cross_pair_count(p))


def draw_sample(n: int, cfg: RepairConfig, rng: np.random.Generator) -> SampleState:
    s = min(cfg.seed_size, n)
    seed_set = np.sort(rng.choice(n, size=s, replace=False))
    pool = np.setdiff1d(np.arange(n), seed_set)
    t = min(cfg.batch_size, len(pool))
    batches = [np.sort(rng.choice(pool, size=t, replace=False)) for _ in range(cfg.batches)] if t else []
    return SampleState(seed_set, batches)


def grow_layers(g: ColoredGraph, seed_parts: list[np.ndarray], excluded: int, a: int, b: int,
                outside: np.ndarray, density: float, epsilon: float) -> LayeredSets:
    """Grow the chains V_i^(l) from the seed parts and stop at the first stalled level.

    Level 1 holds the outside vertices with an excluded-color edge into seed
    part i.  A vertex joins chain i at the next level when it has at least
    ``density * n`` excluded-color edges into the previous level, or that
    many edges of each of a and b.  The chosen level l is the least one with
    |V^(l+1)| <= |V^(l)| + eps^2 n / 128; overlaps go to the lowest index.
    """
    n = g.n
    thresh = density * n
    stall = epsilon * epsilon / 128 * n
    ac, aa, ab = g.onehot(excluded), g.onehot(a), g.onehot(b)
    chains = [[(ac[:, u].sum(axis=1) > 0) & outside for u in seed_parts]]

    def size(level):
        return int(np.logical_or.reduce(level).sum())

    while True:
        prev = chains[-1]
        nxt = []
        for mask in prev:
            f = mask.astype(np.float64)
            grow = (ac @ f >= thresh) | ((aa @ f >= thresh) & (ab @ f >= thresh))
            nxt.append(mask | (grow & outside))
        chains.append(nxt)
        if size(nxt) <= size(prev) + stall:
            break
    level = len(chains) - 2
    taken = np.zeros(n, dtype=bool)
    parts = []
    for mask in chains[level]:
        own = mask & ~taken
        taken |= own
        parts.append(own)
    upper = np.logical_or.reduce(chains[level + 1])
    return LayeredSets(chains, level + 1, parts, upper & ~taken, outside & ~upper)


def _seed_partition(g: ColoredGraph, sample: SampleState):
    """Monochromatic partition of the largest rainbow-free prefix S, S+T1, ..., restricted to S."""
    for j in range(len(sample.batches), -1, -1):
        r = sample.prefix(j)
        sub = g.induced(r)
        if count_rainbow_triangles(sub) == 0:
            break
    else:
        return None
    if len(r) < 2:
        return None
    found = monochromatic_partition(sub)
    if found is None:  # pragma: no cover - sub is rainbow-free
        return None
    a, b, w = found
    in_seed = np.isin(r, sample.seed_set)
    seed_parts = []
    for part in w.parts:
        members = r[np.asarray(part)]
        members = members[in_seed[np.asarray(part)]]
        if len(members):
            seed_parts.append(members)
    return a, b, seed_parts


def _sample_attempt(g: ColoredGraph, cfg: RepairConfig, rng: np.random.Generator):
    n = g.n
    sample = draw_sample(n, cfg, rng)
    found = _seed_partition(g, sample)
    if found is None:
        return None, "rainbow-sample"
    a, b, seed_parts = found
    if len(seed_parts) < 2:
        return None, "seed-unsplit"
    excluded = ({1, 2, 3} - {a, b}).pop()
    outside = np.ones(n, dtype=bool)
    outside[sample.seed_set] = False
    layers = grow_layers(g, seed_parts, excluded, a, b, outside, cfg.density, cfg.epsilon)

    parts: list[list[int]] = []
    kinds: list[str] = []
    seed_of: dict[int, int] = {}
    for idx, mask in enumerate(layers.parts):
        members = np.nonzero(mask)[0].tolist()
        if cfg.seat_sample:
            members += seed_parts[idx].tolist()
        if members:
            seed_of[len(parts)] = idx
            parts.append(members)
            kinds.append("core")
    junk = np.nonzero(layers.fringe)[0].tolist()
    if not cfg.seat_sample:
        junk += sample.seed_set.tolist()
    if junk:
        parts.append(junk)
        kinds.append("junk")
    for x in np.nonzero(layers.rest)[0].tolist():
        parts.append([x])
        kinds.append("single")
    if len(parts) < 2:
        return None, "one-part"
    p = VertexPartition.of(parts, n)
    m = len(p)
    counts = part_color_counts(g, p.labels(), m)

    # core-core pairs keep the seed parts' color, a singleton follows its
    # majority toward a core, excluded-color pairs between singletons go to a,
    # and everything touching the junk part goes to a
    plan = np.full((m, m), a, dtype=np.int8)
    for i in range(m):
        for j in range(i + 1, m):
            ki, kj = kinds[i], kinds[j]
            if "junk" in (ki, kj):
                c = a
            elif ki == "core" and kj == "core":
                c = int(g.matrix[seed_parts[seed_of[i]][0], seed_parts[seed_of[j]][0]])
            elif ki == "single" and kj == "single":
                c = int(g.matrix[parts[i][0], parts[j][0]])
                c = c if c in (a, b) else a
            else:
                c = a if counts[a - 1, i, j] >= counts[b - 1, i, j] else b
            plan[i, j] = plan[j, i] = c
    plan_cost = _cost_from_counts(counts, plan)
    if cfg.optimal_targets:
        targets = optimal_targets(counts, a, b)
        cost = _cost_from_counts(counts, targets)
    else:
        targets, cost = plan, plan_cost
    res = PartitionResult(True, "sampled", a, b, p, targets, cost, cross_pair_count(p),
                          plan_cost=plan_cost)
    return res, layers


def _cost_from_counts(counts: np.ndarray, targets: np.ndarray) -> int:
    total = counts.sum(axis=0)
    m = total.shape[0]
    iu = np.triu_indices(m, 1)
    keep = counts[targets[iu] - 1, iu[0], iu[1]]
    return int((total[iu] - keep).sum())


def approximate_partition(g: ColoredGraph, cfg: RepairConfig | None = None, rng=None) -> PartitionResult:
    """Find (a, b) and a partition that is eps-close to (a, b)-monochromatic.

    Tries, in order: the exact Gallai partition when ``g`` has no rainbow
    triangle (if ``cfg.exact_shortcut``), a near-monochromatic star, a
    sparse color class, and then up to ``cfg.retries`` sampled attempts.
    Every success satisfies ``cost <= eps * e(P)`` by exact count.
    """
    cfg = (cfg or RepairConfig()).resolved()
    if g.k != 3:
        raise ValueError("approximate partitions need k=3")
    if g.n < 2:
        raise ValueError("need at least two vertices")
    eps = cfg.epsilon
    if cfg.exact_shortcut:
        res = _exact_case(g)
        if res is not None:
            return res
    for case in (_star_case, _sparse_color_case):
        res = case(g, eps)
        if res is not None:
            return res
    if rng is None:
        rng = np.random.default_rng(cfg.seed)
    best = PartitionResult(False, "sampled")
    for attempt in range(1, cfg.retries + 1):
        res, _ = _sample_attempt(g, cfg, rng)
        if res is None:
            continue
        res.attempts = attempt
        if res.cost <= eps * res.cross_pairs and res.cross_pairs >= eps * g.n * g.n / 16:
            return res
        if not best.partition or res.ratio < best.ratio:
            best = replace(res, ok=False)
    best.attempts = cfg.retries
    return best


# -- repair -------------------------------------------------------------------

@dataclass
class RepairNode:
    vertices: list[int]
    case: str | None = None
    pair: tuple[int, int] | None = None
    cost: int = 0
    cross_pairs: int = 0
    children: list[RepairNode] = field(default_factory=list)

    def summary(self) -> dict:
        out = {"size": len(self.vertices), "case": self.case, "cost": self.cost}
        if self.pair:
            out["pair"] = list(self.pair)
            out["cross_pairs"] = self.cross_pairs
        if self.children:
            out["children"] = [c.summary() for c in self.children]
        return out


@dataclass
class RepairResult:
    transcript: EditTranscript
    complete: bool
    root: RepairNode
    epsilon: float
    n: int
    calls: list[tuple[list[int], PartitionResult]] = field(default_factory=list)
    diagnosis: str | None = None

    @property
    def cost(self) -> int:
        return self.transcript.cost

    def recertify(self, g: ColoredGraph) -> bool:
        """Recount every successful split on its own induced subgraph."""
        return all(certify(g.induced(v), r, self.epsilon) for v, r in self.calls if r.ok)

    def report(self) -> dict:
        return {
            "cost": self.cost,
            "epsilon": self.epsilon,
            "n": self.n,
            "certified": self.complete,
            "tree": self.root.summary(),
        }


def repair(g: ColoredGraph, epsilon: float | None = None, cfg: RepairConfig | None = None) -> RepairResult:
    """Edit ``g`` into a Gallai coloring by recursive approximate partitions.

    Leaves of size >= eps*n are split with :func:`approximate_partition`
    and their cross pairs recolored to the certified targets; smaller
    leaves that still hold a rainbow triangle get every internal pair
    recolored to 1.  When n < 1/eps the whole graph is a single leaf.  Each split node draws from its own RNG stream derived
    from ``cfg.seed`` and the node's index in processing order.
    """
    cfg = cfg or RepairConfig()
    if epsilon is not None:
        cfg = replace(cfg, epsilon=epsilon)
    if g.k != 3:
        raise ValueError("repair needs k=3")
    eps = cfg.epsilon
    n = g.n
    transcript = EditTranscript()
    root = RepairNode(list(range(n)))
    worklist = [root]
    calls = []
    complete = True
    diagnosis = None
    node_index = 0
    while worklist:
        node = worklist.pop(0)
        verts = node.vertices
        if len(verts) >= eps * n and len(verts) >= 2 and n * eps >= 1:
            sub = g.induced(verts)
            rng = np.random.default_rng([cfg.seed, node_index])
            node_index += 1
            res = approximate_partition(sub, cfg, rng)
            calls.append((list(verts), res))
            if not res.ok:
                complete = False
                node.case = "failed"
                diagnosis = (
                    f"no certified partition for a part of size {len(verts)} "
                    f"(best ratio {res.ratio:.3f} > eps={eps}); input is likely far from Gallai"
                )
                log.info(diagnosis)
                continue
            node.case, node.pair = res.case, (res.a, res.b)
            node.cost, node.cross_pairs = res.cost, res.cross_pairs
            parts = res.partition.parts
            mat = sub.matrix
            for i, pi in enumerate(parts):
                for j in range(i + 1, len(parts)):
                    target = int(res.targets[i, j])
                    block = mat[np.ix_(pi, parts[j])]
                    for x, y in np.argwhere(block != target):
                        u, v = verts[pi[x]], verts[parts[j][y]]
                        transcript.append(u, v, int(g.matrix[u, v]), target)
            for part in parts:
                child = RepairNode([verts[x] for x in part])
                node.children.append(child)
                worklist.append(child)
        else:
            node.case = "leaf"
            if len(verts) >= 3:
                sub = g.induced(verts)
                if count_rainbow_triangles(sub) > 0:
                    node.case = "leaf-cleared"
                    for x in range(len(verts)):
                        for y in range(x + 1, len(verts)):
                            if sub.matrix[x, y] != 1:
                                u, v = verts[x], verts[y]
                                transcript.append(u, v, int(g.matrix[u, v]), 1)
                                node.cost += 1
    return RepairResult(transcript, complete, root, eps, n, calls, diagnosis)


# -- tester -------------------------------------------------------------------

@dataclass
class TestResult:
    accept: bool
    queries: int
    witness: tuple[int, int, int] | None = None
    capped: bool = False
    exhaustive: bool = False

    __test__ = False

    def report(self) -> dict:
        return {
            "accept": self.accept,
            "queries": self.queries,
            "witness": list(self.witness) if self.witness else None,
            "confidence_guaranteed": not self.capped,
            "exhaustive": self.exhaustive,
        }


def tester_queries(epsilon: float, exponent: float = 36, confidence: float = 0.99) -> float:
    return math.ceil(math.log(1 / (1 - confidence)) / epsilon**exponent)


def _rainbow(c1, c2, c3):
    return (c1 != c2) & (c2 != c3) & (c1 != c3)


def test_rainbow_free(g: ColoredGraph, epsilon: float = 0.1, *, exponent: float = 36,
                      confidence: float = 0.99, seed=None, queries: int | None = None,
                      budget: int = 10**6) -> TestResult:
    """One-sided tester: sample triples, reject iff one is rainbow.

    ``queries`` overrides the sample size derived from ``epsilon`` and
    ``exponent``.  Sizes above ``budget`` are capped and the result is
    flagged; when the sample would cover every triple, all triples are
    checked instead.
    """
    n = g.n
    if n < 3:
        raise ValueError("need at least three vertices")
    if g.k != 3:
        raise ValueError("tester needs k=3")
    q = tester_queries(epsilon, exponent, confidence) if queries is None else int(queries)
    capped = False
    if q > budget:
        log.warning("tester sample size %s capped at %s; confidence not guaranteed", q, budget)
        q, capped = budget, True
    if q >= math.comb(n, 3):
        w = find_rainbow_triangle(g)
        return TestResult(w is None, math.comb(n, 3), w, capped, True)
    rng = np.random.default_rng(seed)
    triples = rng.integers(0, n, size=(q, 3))
    dup = (triples[:, 0] == triples[:, 1]) | (triples[:, 1] == triples[:, 2]) | (triples[:, 0] == triples[:, 2])
    while dup.any():
        triples[dup] = rng.integers(0, n, size=(int(dup.sum()), 3))
        dup = (triples[:, 0] == triples[:, 1]) | (triples[:, 1] == triples[:, 2]) | (triples[:, 0] == triples[:, 2])
    m = g.matrix
    x, y, z = triples.T
    hit = np.nonzero(_rainbow(m[x, y], m[y, z], m[x, z]))[0]
    if len(hit):
        w = tuple(sorted(int(v) for v in triples[hit[0]]))
        return TestResult(False, q, w, capped)
    return TestResult(True, q, None, capped)


def planted_rainbow_instance(n: int, density: float = 0.01, seed=None) -> tuple[ColoredGraph, float]:
    """All-1 coloring with a random 3-coloring planted on a vertex subset.

    The subset size is chosen so the exact fraction of rainbow triples is
    closest to (and at least) ``density`` among subset sizes tried; returns
    the graph and its exact rainbow-triple density.
    """
    rng = np.random.default_rng(seed)
    total = math.comb(n, 3)
    best = None
    for size in range(3, n + 1):
        block = rng.integers(1, 4, size=(size, size)).astype(np.int8)
        block = np.triu(block, 1)
        block = block + block.T
        m = np.ones((n, n), dtype=np.int8)
        verts = rng.choice(n, size=size, replace=False)
        m[np.ix_(verts, verts)] = block
        g = ColoredGraph(m, k=3)
        rho = count_rainbow_triangles(g) / total
        if rho >= density:
            best = (g, rho)
            break
    if best is None:
        raise ValueError(f"cannot reach density {density} with n={n}")
    return best
