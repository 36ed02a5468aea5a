import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import four_term_solution, max_three_ap_free, weighted_solution

from gallai_lab.graphs import (
    ColoredGraph,
    Digraph,
    color_projection,
    count_rainbow_triangles,
    d3_pattern,
    enumerate_copies,
    f4_pattern,
    is_copy,
    rainbow_triangle,
    verify_pair_disjoint,
)
from gallai_lab.hardness import (
    ConstructionError,
    EquationFamily,
    avoiding_set,
    block_transversal_count,
    blowup,
    d3_hardness,
    design_family,
    f4_hardness,
    lift_to_digraph,
    triangle_hardness,
    verify_avoiding_set,
)

FAMILIES = {
    "three_ap": EquationFamily.three_ap(),
    "four_term": EquationFamily.four_term(),
    "weighted3": EquationFamily.weighted(3),
}


def oracle_avoids(s, family):
    if family.four and four_term_solution(s) is not None:
        return False
    return all(weighted_solution(s, p, q) is None for p, q in family.pq)


def brute_pairwise_agreement(tuples):
    worst = 0
    for a, b in itertools.combinations(tuples.tolist(), 2):
        worst = max(worst, sum(x == y for x, y in zip(a, b)))
    return worst


# -- design family ----------------------------------------------------------------

def test_design_family_r4_d2():
    fam = design_family(4, 2)
    assert fam.p == 3 and len(fam) == 9 >= (4 / 2) ** 2
    assert brute_pairwise_agreement(fam.tuples) <= 1


def test_design_family_r8_d3():
    fam = design_family(8, 3)
    assert fam.p == 5 and len(fam) == 25 >= 16
    assert brute_pairwise_agreement(fam.tuples) <= 1
    assert fam.tuples.min() >= 1 and fam.tuples.max() <= fam.p <= 8


def test_design_family_precondition():
    with pytest.raises(ValueError):
        design_family(3, 2)


# -- avoiding sets -----------------------------------------------------------------

@pytest.mark.parametrize("name", sorted(FAMILIES))
def test_tiny_sets(name):
    assert avoiding_set(2, FAMILIES[name]) == [1, 2]
    assert verify_avoiding_set([1, 2], FAMILIES[name]) == (True, None)


def test_verifier_finds_three_ap():
    ok, witness = verify_avoiding_set([1, 2, 3], EquationFamily.three_ap())
    assert not ok
    assert sorted(witness[:2]) == [1, 3] and witness[2] == 2


def test_greedy_at_9_is_maximal_but_not_maximum():
    fam = EquationFamily.three_ap()
    s = avoiding_set(9, fam)
    assert s == [1, 2, 4, 5]
    assert verify_avoiding_set(s, fam)[0]
    # no element can be added ...
    for x in set(range(1, 10)) - set(s):
        assert not verify_avoiding_set(s + [x], fam)[0]
    # ... yet {1, 2, 4, 8, 9} is larger
    assert max_three_ap_free(9) == 5
    assert verify_avoiding_set([1, 2, 4, 8, 9], fam)[0]


@pytest.mark.parametrize("name", sorted(FAMILIES))
@pytest.mark.parametrize("method", ["greedy", "behrend"])
def test_outputs_pass_brute_force_check(name, method):
    fam = FAMILIES[name]
    for m in (5, 17, 40, 90):
        s = avoiding_set(m, fam, method=method)
        assert set(s) <= set(range(1, m + 1))
        assert oracle_avoids(s, fam)


@settings(max_examples=150, deadline=None)
@given(st.sampled_from(sorted(FAMILIES)), st.lists(st.integers(1, 40), max_size=9, unique=True))
def test_verifier_agrees_with_brute_force(name, s):
    fam = FAMILIES[name]
    ok, witness = verify_avoiding_set(s, fam)
    assert ok == oracle_avoids(s, fam)
    if not ok:
        if len(witness) == 4:
            assert sum(witness[:3]) == 3 * witness[3] and len(set(witness)) > 1
        else:
            assert len(set(witness)) == 3
            assert any(p * witness[0] + q * witness[1] == (p + q) * witness[2] for p, q in fam.pq)
        assert set(witness) <= set(s)


def test_behrend_at_ten_thousand():
    s = avoiding_set(10_000, EquationFamily.three_ap(), method="behrend")
    assert verify_avoiding_set(s, EquationFamily.three_ap())[0]
    assert max(s) <= 10_000 and len(s) > 30


# -- triangle construction -------------------------------------------------------

def brute_avoiding_triangles(g, color):
    m = g.matrix
    ok = (m != color)
    n = g.n
    total = 0
    for a in range(n):
        for b in range(a + 1, n):
            if ok[a, b]:
                total += int((ok[a, b + 1:] & ok[b, b + 1:]).sum())
    return total


def test_monochromatic_triangle_host():
    inst = triangle_hardness(ColoredGraph.constant(3, 1), avoided=2, m=10)
    assert len(inst.host_copies) == 10 * len(inst.s)
    assert verify_pair_disjoint(inst.host_copies)[0]
    fam = enumerate_copies(inst.host, ColoredGraph.constant(3, 1))
    assert len(fam) == 10 * len(inst.s)
    count = brute_avoiding_triangles(inst.host, 2)
    assert count == inst.claims["triangles_avoiding"] <= 3**4 * 10**2


def test_rainbow_pattern_cannot_avoid_a_color():
    for c in (1, 2, 3):
        with pytest.raises(ConstructionError):
            triangle_hardness(rainbow_triangle(), avoided=c, m=5)


def test_bad_set_inflates_copy_count():
    # 1 + 2 + 3 = 3 * 2, so extra F4 copies appear beyond the planted ones
    inst = f4_hardness(12, s=[1, 2, 3])
    assert verify_pair_disjoint(inst.host_copies)[0]
    assert len(enumerate_copies(inst.host, f4_pattern())) > 12 * 3


# -- F4 construction ---------------------------------------------------------------

def test_f4_single_copy():
    inst = f4_hardness(1)
    assert inst.host.n == 10 and inst.s == [1]
    assert len(enumerate_copies(inst.host, f4_pattern())) == 1


def test_f4_count_at_20():
    inst = f4_hardness(20)
    want = 20 * len(inst.s)
    assert block_transversal_count(inst) == want
    assert len(enumerate_copies(inst.host, f4_pattern())) == want
    assert verify_pair_disjoint(inst.host_copies)[0]
    assert all(is_copy(inst.host, f4_pattern(), t) for t in inst.host_copies)


def test_f4_blowup_keeps_copies_in_block_groups():
    inst = f4_hardness(5, factor=4)
    block_of = np.repeat(np.arange(4), [(hi - lo) * 4 for lo, hi in inst.blocks])
    fam = enumerate_copies(inst.blown, f4_pattern())
    assert len(fam) > 0
    for t in fam.copies:
        assert sorted(block_of[list(t)]) == [0, 1, 2, 3]


def test_f4_factor_8_family():
    inst = f4_hardness(20, factor=8)
    design = design_family(8, 4)
    assert len(inst.blown_copies) == 20 * len(inst.s) * len(design)
    assert verify_pair_disjoint(inst.blown_copies)[0]
    assert all(is_copy(inst.blown, f4_pattern(), t) for t in inst.blown_copies)


# -- D3 construction ---------------------------------------------------------------

def test_d3_single_copy():
    inst = d3_hardness(1)
    assert inst.host.n == 6
    assert len(enumerate_copies(inst.host, d3_pattern())) == 1


def test_d3_count_at_20():
    inst = d3_hardness(20)
    fam = enumerate_copies(inst.host, d3_pattern())
    assert len(fam) == 20 * len(inst.s)
    assert {frozenset(t) for t in fam.copies} == {frozenset(t) for t in inst.host_copies}


def test_d3_unplanted_pairs_have_one_edge():
    inst = d3_hardness(7)
    adj = inst.host.adj
    planted = np.zeros_like(adj)
    for t in inst.host_copies:
        idx = np.asarray(t)
        planted[np.ix_(idx, idx)] = True
    edges = adj.astype(int) + adj.T.astype(int)
    off = ~planted & ~np.eye(inst.host.n, dtype=bool)
    assert (edges[off] == 1).all()


def test_planted_d3_projects_to_rainbow():
    inst = d3_hardness(6)
    proj = color_projection(inst.host)
    for t in inst.host_copies:
        assert count_rainbow_triangles(proj.induced(list(t))) == 1


# -- blowups ---------------------------------------------------------------------

def test_blowup_factor_one_is_identity():
    g = ColoredGraph.from_upper(4, [1, 2, 3, 1, 2, 3])
    assert blowup(g, 1, inside=1) == g
    d = d3_pattern()
    assert blowup(d, 1) == d


def test_blowup_k2_arithmetic():
    g = blowup(ColoredGraph.constant(2, 1), 3, inside=2)
    assert g.n == 6
    up = g.upper()
    assert int((up == 1).sum()) == 9 and int((up == 2).sum()) == 6


def test_digraph_blowup_classes_are_transitive():
    b = blowup(d3_pattern(), 3)
    cls = b.adj[:3, :3]
    assert cls[0, 1] and cls[0, 2] and cls[1, 2] and not cls[1, 0]


# -- lifting -----------------------------------------------------------------------

def test_lift_empty_family():
    rng = np.random.default_rng(1)
    g = ColoredGraph.from_upper(9, rng.integers(1, 4, size=36))
    assert color_projection(lift_to_digraph(g, d3_pattern(), [])) == g


def test_lift_rainbow_triangle():
    d = lift_to_digraph(rainbow_triangle(), d3_pattern(), [(0, 1, 2)])
    assert d == d3_pattern()


def test_lift_d3_host():
    inst = d3_hardness(10)
    g = color_projection(inst.host)
    lifted = lift_to_digraph(g, d3_pattern(), inst.host_copies)
    assert color_projection(lifted) == g
    found = {frozenset(t) for t in enumerate_copies(lifted, d3_pattern()).copies}
    assert {frozenset(t) for t in inst.host_copies} <= found


def test_lift_rejects_overlapping_copies():
    g = color_projection(Digraph.from_edges(4, [(0, 2), (1, 2), (2, 1), (0, 3), (1, 3), (3, 1)]))
    with pytest.raises(ConstructionError):
        lift_to_digraph(g, d3_pattern(), [(0, 1, 2), (0, 1, 3)])
