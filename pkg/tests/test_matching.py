"""Exactness tests for the blossom matcher against independent oracles."""


import numpy as np
import pytest

from scfab.matching import max_weight_matching, min_weight_perfect_matching


def brute_force_max_weight(n, edges, maxcardinality):
    """Enumerate all matchings recursively; returns the best (|M|, weight)."""
    wmap = {}
    for i, j, w in edges:
        key = (min(i, j), max(i, j))
        if key not in wmap or wmap[key] < w:
            wmap[key] = w
    adj = {v: [] for v in range(n)}
    for (i, j), w in wmap.items():
        adj[i].append((j, w))
        adj[j].append((i, w))
    best_val = [(0, 0)]

    def rec(v, used, card, wt):
        while v < n and v in used:
            v += 1
        if v == n:
            val = (card, wt) if maxcardinality else (0, wt)
            if val > best_val[0]:
                best_val[0] = val
            return
        rec(v + 1, used, card, wt)  # leave v unmatched
        for u, w in adj[v]:
            if u > v and u not in used:
                used.add(v)
                used.add(u)
                rec(v + 1, used, card + 1, wt + w)
                used.discard(v)
                used.discard(u)

    rec(0, set(), 0, 0)
    return best_val[0]


def matching_value(n, edges, mate, maxcardinality):
    best = {}
    for i, j, w in edges:
        key = (min(i, j), max(i, j))
        if key not in best or best[key] < w:
            best[key] = w
    pairs = [(v, int(mate[v])) for v in range(n) if mate[v] >= 0 and v < mate[v]]
    wt = sum(best[p] for p in pairs)
    return (len(pairs), wt) if maxcardinality else (0, wt)


@pytest.mark.parametrize("maxcardinality", [False, True])
def test_small_random_graphs_vs_enumeration(maxcardinality):
    rng = np.random.default_rng(42)
    for _ in range(300):
        n = int(rng.integers(1, 9))
        m = int(rng.integers(0, n * (n - 1) // 2 + 1))
        edges = []
        seen = set()
        for _ in range(m):
            i, j = rng.integers(0, n, 2)
            if i == j:
                continue
            key = (min(i, j), max(i, j))
            if key in seen:
                continue
            seen.add(key)
            w = int(rng.integers(0, 20))
            edges.append((int(i), int(j), w))
        mate = max_weight_matching(n, edges, maxcardinality)
        for v in range(n):
            if mate[v] >= 0:
                assert mate[mate[v]] == v
        got = matching_value(n, edges, mate, maxcardinality)
        want = brute_force_max_weight(n, edges, maxcardinality)
        if maxcardinality:
            assert got == want, (n, edges)
        else:
            assert got[1] == want[1], (n, edges)


def test_tie_heavy_instances():
    # small weight alphabet forces many blossoms and ties
    rng = np.random.default_rng(7)
    for _ in range(60):
        n = int(rng.integers(6, 11))
        edges = [(i, j, int(rng.integers(0, 3)))
                 for i in range(n) for j in range(i + 1, n)
                 if rng.random() < 0.8]
        mate = max_weight_matching(n, edges, True)
        got = matching_value(n, edges, mate, True)
        want = brute_force_max_weight(n, edges, True)
        assert got == want


def test_perfect_matching_basic():
    # 2 defects cheaper together than via boundary
    edges = [(0, 1, 1.0), (0, 2, 5.0), (1, 3, 5.0), (2, 3, 0.0)]
    pairs = min_weight_perfect_matching(4, edges)
    assert sorted(pairs) == [(0, 1), (2, 3)]
    # 1 defect matched to its boundary copy
    pairs = min_weight_perfect_matching(2, [(0, 1, 2.5)])
    assert pairs == [(0, 1)]


def test_perfect_matching_validates():
    with pytest.raises(ValueError):
        min_weight_perfect_matching(3, [(0, 1, 1.0)])
    with pytest.raises(RuntimeError):
        min_weight_perfect_matching(4, [(0, 1, 1.0)])  # 2 and 3 unmatched
    with pytest.raises(ValueError):
        max_weight_matching(2, [(0, 0, 1)])
    assert min_weight_perfect_matching(0, []) == []


def test_perfect_matching_weight_vs_enumeration():
    rng = np.random.default_rng(11)
    for _ in range(80):
        d = int(rng.integers(1, 7))
        n = 2 * d
        edges = []
        for a in range(d):
            edges.append((a, d + a, float(rng.random() * 5)))
            for b in range(a + 1, d):
                if rng.random() < 0.8:
                    edges.append((a, b, float(rng.random() * 5)))
        for a in range(d):
            for b in range(d + a + 1, n):
                edges.append((d + a, b, 0.0))
        pairs = min_weight_perfect_matching(n, edges)
        assert len(pairs) == d
        wmap = {}
        for i, j, w in edges:
            key = (min(i, j), max(i, j))
            wmap[key] = min(wmap.get(key, np.inf), w)
        got = sum(wmap[p] for p in pairs)
        # oracle: enumerate involutions over defects (rest to boundary)
        best = np.inf
        defect_edges = {k: v for k, v in wmap.items() if k[1] < d}
        bw = {a: wmap[(a, d + a)] for a in range(d)}

        def enum(rem, acc):
            nonlocal best
            if acc >= best:
                return
            if not rem:
                best = min(best, acc)
                return
            a = rem[0]
            enum(rem[1:], acc + bw[a])
            for b in rem[1:]:
                key = (a, b)
                if key in defect_edges:
                    rest = [x for x in rem[1:] if x != b]
                    enum(rest, acc + defect_edges[key])

        enum(list(range(d)), 0.0)
        assert got == pytest.approx(best, abs=1e-5)
