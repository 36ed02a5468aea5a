import math
from dataclasses import replace

import numpy as np
import pytest

from gallai_lab.gallai import compose, decompose, random_gallai_tree
from gallai_lab.graphs import (
    ColoredGraph,
    apply_edits,
    count_rainbow_triangles,
    cross_pair_count,
    rainbow_triangle,
    recolor_random_pairs,
)
from gallai_lab.repair import (
    RepairConfig,
    approximate_partition,
    certify,
    draw_sample,
    grow_layers,
    planted_rainbow_instance,
    repair,
)
from gallai_lab.repair import test_rainbow_free as rainbow_tester
from gallai_lab.repair import (
    tester_queries as sample_size,
)

DESK = RepairConfig(epsilon=0.1, seed_size=12, batch_size=40, batches=8, density=0.02, retries=50)


def corrupted(n, seed, noise=0.001):
    g = compose(random_gallai_tree(n, seed))
    h, _ = recolor_random_pairs(g, math.floor(noise * n * n), seed=seed + 1)
    return h


def recount(g, res):
    """Cost of res straight from the color matrix, pair by pair."""
    labels = res.partition.labels()
    total = 0
    for u in range(g.n):
        for v in range(u + 1, g.n):
            i, j = labels[u], labels[v]
            if i != j and g.matrix[u, v] != res.targets[i, j]:
                total += 1
    return total


# -- approximate partitions --------------------------------------------------------

def test_star_case():
    g = ColoredGraph.from_upper(12, np.random.default_rng(0).integers(1, 4, size=66))
    m = g.matrix.copy()
    m[0, :] = m[:, 0] = 1
    star = g.with_matrix(m)
    res = approximate_partition(star, RepairConfig(epsilon=0.1))
    assert res.ok and res.case == "star" and res.cost == 0
    assert res.partition.parts[0] == (0,)


def test_sparse_color_case():
    rng = np.random.default_rng(1)
    g = ColoredGraph.from_upper(30, rng.integers(1, 3, size=435))
    # keep every vertex away from a near-monochromatic star
    res = approximate_partition(g, RepairConfig(epsilon=0.1))
    assert res.ok and res.case == "sparse-color" and res.cost == 0
    assert len(res.partition) == 30
    assert res.a == 1 and res.b == 2


def test_desk_instance_is_certified():
    g = corrupted(150, 3)
    res = approximate_partition(g, DESK)
    assert res.ok
    assert certify(g, res, 0.1)
    assert recount(g, res) == res.cost <= 0.1 * res.cross_pairs
    assert res.cross_pairs == cross_pair_count(res.partition)


def test_certify_rejects_tampered_cost():
    g = corrupted(120, 5)
    res = approximate_partition(g, DESK)
    assert certify(g, res, 0.1)
    res.cost += 1
    assert not certify(g, res, 0.1)


def test_far_instance_fails_with_best_candidate():
    rng = np.random.default_rng(2)
    g = ColoredGraph.from_upper(80, rng.integers(1, 4, size=80 * 79 // 2))
    res = approximate_partition(g, RepairConfig(epsilon=0.1, retries=5))
    assert not res.ok
    assert res.attempts == 5


def test_layers_grow_monotonically():
    g = corrupted(150, 8)
    rng = np.random.default_rng(0)
    sample = draw_sample(g.n, DESK, rng)
    outside = np.ones(g.n, dtype=bool)
    outside[sample.seed_set] = False
    seeds = [sample.seed_set[:6], sample.seed_set[6:]]
    layers = grow_layers(g, seeds, 3, 1, 2, outside, 0.02, 0.1)
    for lo, hi in zip(layers.chains, layers.chains[1:]):
        for a, b in zip(lo, hi):
            assert not (a & ~b).any()
    owned = np.logical_or.reduce(layers.parts)
    assert not (owned & layers.fringe).any() and not (owned & layers.rest).any()
    assert not (owned & ~outside).any()


def test_paper_values_are_huge():
    v = RepairConfig.paper_values(0.1)
    assert v["seed_size"] == pytest.approx(128 * math.log(2000 / 0.01) / 0.01)
    assert v["batches"] == pytest.approx(12800)
    assert v["density"] == pytest.approx(0.01 / (64 * v["seed_size"] ** 2))
    assert v["batch_size"] > 1e15
    cfg = RepairConfig(epsilon=0.1, paper_constants=True).resolved()
    assert cfg.seed_size == math.ceil(v["seed_size"])


# -- repair ------------------------------------------------------------------------

def test_gallai_input_costs_only_what_the_splits_cost():
    g = compose(random_gallai_tree(150, 4))
    res = repair(g, cfg=replace(DESK, seed=1))
    assert res.complete
    assert res.cost == sum(r.cost for _, r in res.calls)
    exact = repair(g, cfg=replace(DESK, exact_shortcut=True))
    assert all(r.cost == 0 for _, r in exact.calls)
    assert exact.cost == 0


def test_small_graph_is_a_single_leaf():
    g = rainbow_triangle()
    res = repair(g, epsilon=0.3)
    assert res.complete and not res.calls
    assert res.root.case == "leaf-cleared"
    fixed = apply_edits(g, res.transcript)
    assert fixed == ColoredGraph.constant(3, 1)
    assert res.cost == 2 <= 3


@pytest.mark.parametrize("seed", [7, 11, 19])
def test_corrupted_instance_repairs(seed):
    g = corrupted(150, seed)
    assert count_rainbow_triangles(g) > 0
    res = repair(g, cfg=replace(DESK, seed=seed))
    assert res.complete
    assert res.recertify(g)
    fixed = apply_edits(g, res.transcript)
    assert count_rainbow_triangles(fixed) == 0
    decompose(fixed)
    assert res.cost <= 0.1 * 150 * 150
    report = res.report()
    assert report["certified"] and report["tree"]["size"] == 150


def test_repair_is_deterministic():
    g = corrupted(150, 21)
    a = repair(g, cfg=replace(DESK, seed=5))
    b = repair(g, cfg=replace(DESK, seed=5))
    assert a.transcript.to_jsonl() == b.transcript.to_jsonl()
    assert a.report() == b.report()


# -- tester ------------------------------------------------------------------------

def test_tester_accepts_gallai_colorings():
    for seed in range(20):
        g = compose(random_gallai_tree(60, seed))
        assert rainbow_tester(g, queries=500, seed=seed).accept


def test_tester_rainbow_triangle_exhaustive():
    res = rainbow_tester(rainbow_triangle(), queries=1)
    assert not res.accept and res.exhaustive
    assert res.witness == (0, 1, 2)


def test_tester_caps_sample_size():
    g = compose(random_gallai_tree(200, 1))
    res = rainbow_tester(g, epsilon=0.1, budget=1000, seed=0)
    assert res.capped and res.queries == 1000 and res.accept
    assert not res.report()["confidence_guaranteed"]


def test_tester_query_formula():
    assert sample_size(0.5, exponent=2, confidence=0.99) == math.ceil(math.log(100) * 4)


def test_tester_witness_is_rainbow():
    g, rho = planted_rainbow_instance(120, 0.01, seed=3)
    assert rho >= 0.01
    res = rainbow_tester(g, queries=2000, seed=1)
    assert not res.accept
    u, v, w = res.witness
    assert len({g.color(u, v), g.color(u, w), g.color(v, w)}) == 3


def test_planted_density_is_exact():
    g, rho = planted_rainbow_instance(90, 0.01, seed=0)
    assert rho == count_rainbow_triangles(g) / math.comb(90, 3)
