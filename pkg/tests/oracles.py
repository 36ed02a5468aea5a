"""Brute-force reference implementations used only by the tests.

Nothing here calls into the library's algorithms; each function works
straight from raw color tables, tuples, or integer sets.
"""

import itertools

import numpy as np
from sympy.utilities.iterables import multiset_partitions


def all_colorings(n):
    """Every 3-coloring of K_n as rows of upper-triangle colors (row-major pair order)."""
    pairs = n * (n - 1) // 2
    return np.array(list(itertools.product((1, 2, 3), repeat=pairs)), dtype=np.int8)


def pair_index(n):
    return {p: i for i, p in enumerate(itertools.combinations(range(n), 2))}


def rainbow_free_mask(upper, n):
    """Boolean per row: does the coloring avoid rainbow triangles."""
    idx = pair_index(n)
    ok = np.ones(len(upper), dtype=bool)
    for a, b, c in itertools.combinations(range(n), 3):
        x, y, z = upper[:, idx[a, b]], upper[:, idx[a, c]], upper[:, idx[b, c]]
        ok &= ~((x != y) & (x != z) & (y != z))
    return ok


def partition_masks(upper, n):
    """Per row, two flags from scanning every set partition with >= 2 parts:

    ``exists``: some partition has every cross bipartite graph monochromatic,
    with at most two colors used overall;
    ``clean``: some such partition additionally has rainbow-free parts.
    """
    idx = pair_index(n)
    rows = np.arange(len(upper))
    exists = np.zeros(len(upper), dtype=bool)
    clean = np.zeros(len(upper), dtype=bool)
    for parts in multiset_partitions(list(range(n))):
        if len(parts) < 2:
            continue
        used = np.zeros((len(upper), 4), dtype=bool)
        mono = np.ones(len(upper), dtype=bool)
        for pi, pj in itertools.combinations(parts, 2):
            cols = np.stack([upper[:, idx[min(u, v), max(u, v)]] for u in pi for v in pj], axis=1)
            mono &= (cols == cols[:, :1]).all(axis=1)
            used[rows, cols[:, 0]] = True
        ok = mono & (used[:, 1:].sum(axis=1) <= 2)
        exists |= ok
        inner = np.ones(len(upper), dtype=bool)
        for part in parts:
            for a, b, c in itertools.combinations(sorted(part), 3):
                x, y, z = upper[:, idx[a, b]], upper[:, idx[a, c]], upper[:, idx[b, c]]
                inner &= ~((x != y) & (x != z) & (y != z))
        clean |= ok & inner
    return exists, clean


def brute_partition_ok(matrix, parts, a, b):
    """Direct check of an (a, b)-monochromatic partition on a color matrix."""
    if len(parts) < 2:
        return False
    for pi, pj in itertools.combinations(parts, 2):
        cols = {int(matrix[u][v]) for u in pi for v in pj}
        if len(cols) != 1 or not cols <= {a, b}:
            return False
    return True


def weighted_solution(s, p, q):
    """Distinct s1, s2, s3 in s with p*s1 + q*s2 = (p+q)*s3, by triple loop."""
    vals = sorted(set(s))
    for x, y, z in itertools.permutations(vals, 3):
        if p * x + q * y == (p + q) * z:
            return x, y, z
    return None


def max_three_ap_free(m):
    """Largest subset of 1..m without x + z = 2y, x != z, by exhaustive search."""
    best = 0
    for mask in range(1 << m):
        members = [i + 1 for i in range(m) if mask >> i & 1]
        if len(members) <= best:
            continue
        present = set(members)
        if not any(
            (x + z) % 2 == 0 and (x + z) // 2 in present
            for x, z in itertools.combinations(members, 2)
        ):
            best = len(members)
    return best


def four_term_solution(s):
    """s1 + s2 + s3 = 3*s4 over s (repeats allowed), excluding s1 = s2 = s3 = s4."""
    vals = sorted(set(s))
    present = set(vals)
    for x, y, z in itertools.combinations_with_replacement(vals, 3):
        if (x + y + z) % 3 == 0 and (x + y + z) // 3 in present and not x == y == z:
            return x, y, z, (x + y + z) // 3
    return None


def block_scan_count(matrix, blocks, pattern_matrix):
    """Count tuples (v_1, ..., v_f) with v_i in block i whose induced entries match the pattern.

    Walks the product of the first f-2 blocks in Python and the last two
    blocks as a boolean grid.  Works for color matrices and adjacency alike.
    """
    mat = np.asarray(matrix)
    pm = np.asarray(pattern_matrix)
    f = pm.shape[0]
    ranges = [np.arange(lo, hi) for lo, hi in blocks]
    a, b = ranges[f - 2], ranges[f - 1]
    base = (mat[np.ix_(a, b)] == pm[f - 2, f - 1]) & (mat[np.ix_(b, a)].T == pm[f - 1, f - 2])
    total = 0
    for head in itertools.product(*ranges[: f - 2]):
        if any(
            mat[head[i], head[j]] != pm[i, j] or mat[head[j], head[i]] != pm[j, i]
            for i, j in itertools.combinations(range(f - 2), 2)
        ):
            continue
        grid = base.copy()
        for i, u in enumerate(head):
            grid &= ((mat[u, a] == pm[i, f - 2]) & (mat[a, u] == pm[f - 2, i]))[:, None]
            grid &= ((mat[u, b] == pm[i, f - 1]) & (mat[b, u] == pm[f - 1, i]))[None, :]
        total += int(grid.sum())
    return total


def avoiding_triangle_count(matrix, color):
    """Triangles with no edge of ``color``, by row-wise common-neighbour sums."""
    ok = np.asarray(matrix) != color
    n = ok.shape[0]
    np.fill_diagonal(ok, False)
    total = 0
    for u in range(n):
        for v in np.nonzero(ok[u, u + 1:])[0] + u + 1:
            total += int((ok[u, v + 1:] & ok[v, v + 1:]).sum())
    return total
