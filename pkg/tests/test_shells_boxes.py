import itertools
import math

import numpy as np
import pytest

from fpplab.boxes import (
    AParams,
    BlackParams,
    black2_v1,
    build_box_frame,
    build_skeleton,
    c_size_bound,
    check_A_condition,
    edge_distances,
    edges_meeting,
    ell_counts,
    is_black,
    resample_edges,
    skeleton_path,
)
from fpplab.goodness import GoodnessParams, detour_rewrite, is_good_edge, shell_diameter
from fpplab.lattice import Box, EdgeId, LatticeError, l1, linf, path_edges, shell
from fpplab.order import f as order_f
from fpplab.passage import path_time
from fpplab.weights import DistributionSpec, WeightConfig, weight

from oracles import bellman_ford

EXP = DistributionSpec.exponential()


# ------------------------------------------------------------ good edges


def test_zero_weights_good_at_first_shell():
    cfg = WeightConfig(DistributionSpec.constant(0), 0)
    assert is_good_edge(cfg, EdgeId((0, 0), 0), GoodnessParams(M=1, N=10**4)) == (True, 1)


def heavy_shells(e, params, d, factor=10.0):
    thr = params.threshold(d)
    over = {}
    for k in range(1, params.k_max(d) + 1):
        for ed in shell(e, k).edges():
            over[ed] = factor * thr
    return over


@pytest.mark.parametrize("variant", ["subexp", "moment", "superexp"])
def test_heavy_shells_not_good(variant):
    e = EdgeId((0, 0), 0)
    params = GoodnessParams(M=1, N=10**4, r=1.0, variant=variant)
    cfg = WeightConfig(EXP, 0).with_overrides(heavy_shells(e, params, 2))
    assert is_good_edge(cfg, e, params) == (False, None)


def test_goodness_domain_check():
    e = EdgeId((0, 0), 0)
    with pytest.raises(LatticeError):
        is_good_edge(WeightConfig(EXP, 0), e, GoodnessParams(M=1, N=10**4), domain=Box((-1, -1), (1, 1)))


def test_shell_diameter_matches_oracle():
    cfg = WeightConfig(EXP, 4)
    e = EdgeId((2, -1), 1)
    for k in (1, 2, 3):
        sh = shell(e, k)
        verts = sh.vertices()
        best = 0.0
        for v in verts:
            best = max(best, max(bellman_ford(cfg, v, verts).values()))
        assert abs(shell_diameter(cfg, e, k) - best) < 1e-9


def test_goodness_monotone_under_heavier_shells():
    e = EdgeId((0, 0), 0)
    params = GoodnessParams(M=0.5, N=256)
    rng = np.random.default_rng(0)
    for seed in range(40):
        cfg = WeightConfig(EXP, seed)
        good, _ = is_good_edge(cfg, e, params)
        if good:
            continue
        extra = {}
        for k in range(1, params.k_max(2) + 1):
            for ed in shell(e, k).edges():
                extra[ed] = weight(cfg, ed) + float(rng.exponential())
        assert not is_good_edge(cfg.with_overrides(extra), e, params)[0]


def test_detour_handcrafted():
    e = EdgeId((5, 0), 0)
    cfg = WeightConfig(DistributionSpec.constant(1), 0).with_overrides({e: 100.0})
    params = GoodnessParams(M=1, N=10**4)
    path = [(x, 0) for x in range(11)]
    new = detour_rewrite(cfg, path, e, 1, params)
    assert new[0] == (0, 0) and new[-1] == (10, 0)
    assert e not in path_edges(new)
    assert path_time(cfg, new) <= path_time(cfg, path) - 100 + 5


def test_detour_random_configs():
    params = GoodnessParams(M=2, N=10**4)
    thr = params.threshold(2)
    rng = np.random.default_rng(1)
    done = 0
    for seed in range(100):
        k = int(rng.integers(1, 4))
        e = EdgeId((k + 2, 0), 0)
        heavy = float(thr + 1 + 50 * rng.random())
        cfg = WeightConfig(DistributionSpec.uniform(0, 1), seed).with_overrides({e: heavy})
        # a wiggly path through the heavy edge that leaves the shell on both sides
        path = [(x, 0) for x in range(0, 2 * k + 6)]
        if rng.random() < 0.5:
            path = [(0, 0), (0, 1), (1, 1), (1, 0)] + path[2:]
        new = detour_rewrite(cfg, path, e, k, params)
        assert new[0] == path[0] and new[-1] == path[-1]
        assert all(l1(a, b) == 1 for a, b in zip(new, new[1:]))
        assert len(set(new)) == len(new)
        assert path_time(cfg, new) < path_time(cfg, path)
        done += 1
    assert done == 100


def test_detour_guards():
    e = EdgeId((5, 0), 0)
    params = GoodnessParams(M=1, N=10**4)
    light = WeightConfig(DistributionSpec.constant(1), 0)
    with pytest.raises(LatticeError):
        detour_rewrite(light, [(x, 0) for x in range(11)], e, 1, params)
    heavy = light.with_overrides({e: 100.0})
    with pytest.raises(LatticeError):
        detour_rewrite(heavy, [(5, 0), (6, 0)], e, 2, params)
    with pytest.raises(LatticeError):
        detour_rewrite(heavy, [(0, 0), (1, 0)], e, 1, params)


# ------------------------------------------------------------ frames and skeletons


def test_frame_example():
    fr = build_box_frame((0, 0), 6, 1)
    assert fr.S.size == 36
    assert fr.B.shape == (7, 19)
    assert fr.S.issubset(fr.T)
    fr3 = build_box_frame((1, -1, 0), 4, -2)
    assert sorted(fr3.B.shape) == [5, 13, 13]
    assert fr3.B.shape[1] == 5
    with pytest.raises(LatticeError):
        build_box_frame((0, 0), 6, 3)
    with pytest.raises(LatticeError):
        build_box_frame((0, 0), 0, 1)


def test_cubes_tile():
    seen = set()
    for l in itertools.product(range(-1, 2), repeat=2):
        for p in map(tuple, build_box_frame(l, 3, 1).S.points().tolist()):
            assert p not in seen
            seen.add(p)
    assert seen == set(map(tuple, Box((-3, -3), (5, 5)).points().tolist()))


FRAMES = [((0, 0), 12, 1, 4), ((1, 0), 16, -2, 4), ((0, 0), 24, 2, 8), ((0, 0, 0), 8, 1, 4), ((0, 1, 0), 12, -3, 4)]


@pytest.mark.parametrize("l,n,j,n1", FRAMES)
def test_skeleton_definitions(l, n, j, n1):
    fr = build_box_frame(l, n, j)
    B = fr.B
    for variant in ("v1", "v2"):
        sk = build_skeleton(fr, n1, variant, N=10**4)
        assert sk.D
        for x in sk.D:
            assert all(c % n1 == 0 for c in x)
            # sup-distance to the complement of B exceeds n1
            assert all(x[i] - B.lo[i] > n1 - 1 and B.hi[i] - x[i] > n1 - 1 for i in range(fr.d))
            assert all(x[i] - B.lo[i] >= n1 + 0 for i in range(fr.d))
        assert sk.D <= sk.C
        assert all(B.contains(p) for p in sk.C)
        assert len(sk.C) <= c_size_bound(fr, n1)
        for e in sk.C_edges:
            assert e.base in sk.C and e.other in sk.C
        if variant == "v1":
            assert not sk.E
            inner = sk.C - sk.boundary
            for e in sk.E_edges:
                a, b = e.endpoints
                assert (a in inner) != (b in inner)
        else:
            for v in sk.E:
                assert v in sk.C
                assert any(l1(v, w) == n1 // 2 for w in sk.C)
                assert min(l1(v, x) for x in sk.D) == n1 // 2
            for e in sk.E_edges:
                assert e.base in sk.E and e.other in sk.C


def test_skeleton_scale_checks():
    fr = build_box_frame((0, 0), 8, 1)
    with pytest.raises(LatticeError):
        build_skeleton(fr, 8)
    with pytest.raises(LatticeError):
        build_skeleton(fr, 3, "v2")


def pairs_within(points, r):
    pts = sorted(points)
    S = set(pts)
    d = len(pts[0])
    offs = [o for o in itertools.product(range(-r, r + 1), repeat=d) if sum(map(abs, o)) <= r]
    for a in pts:
        for o in offs:
            b = tuple(x + y for x, y in zip(a, o))
            if b in S:
                yield a, b


@pytest.mark.parametrize("l,n,j,n1", [((0, 0), 12, 1, 4), ((0, 0), 24, 1, 8), ((0, 0), 24, -2, 4), ((0, 0, 0), 12, 1, 4), ((0, 0, 0), 16, 3, 8)])
def test_skeleton_path_clauses_exhaustive(l, n, j, n1):
    fr = build_box_frame(l, n, j)
    sk = build_skeleton(fr, n1, "v2")
    CE = sk.C - sk.E
    comps = {}
    for a in sorted(CE):
        if a not in comps:
            W = sk.component(a)
            for p in W:
                comps[p] = W
    # (i): geodesic-length path inside C \ E between any two points of a component
    for W in {id(w): w for w in comps.values()}.values():
        Ws = sorted(W)
        for a in Ws[:: max(1, len(Ws) // 12)]:
            for b in Ws:
                res = skeleton_path(sk, a, b, "i")
                assert len(res.path) - 1 == l1(a, b)
                assert all(p in CE for p in res.path)
    r_strict = math.ceil(n1 / 4) - 1
    # (ii) and (iii)
    for a, b in pairs_within(sk.C, r_strict):
        res = skeleton_path(sk, a, b, "ii")
        assert len(res.path) - 1 == l1(a, b) and all(p in sk.C for p in res.path)
    near_bd = [p for p in sk.boundary if any(l1(p, c) <= r_strict for c in sk.C)]
    for a in near_bd:
        for b in sk.C:
            if l1(a, b) <= r_strict:
                res = skeleton_path(sk, a, b, "iii")
                assert len(res.path) - 1 == l1(a, b)
                assert all(p in sk.C or p in sk.boundary for p in res.path)
    # (iv): points close together in different components are separated by a crossing edge
    n_iv = 0
    for a, b in pairs_within(CE, n1 // 4):
        if comps[a] is comps[b]:
            continue
        res = skeleton_path(sk, a, b, "iv")
        n_iv += 1
        assert res.crossing_edge is not None
        y1, y2 = res.crossing_edge.endpoints
        assert min(l1(a, y1), l1(a, y2)) <= n1 / 4 + 1
        assert res.crossing_edge in sk.E_edges
    # with n1 = 4 the removed layer E is already wider than n1/4
    assert n_iv > 0 or n1 < 8


def test_skeleton_path_trivial_and_guards():
    sk = build_skeleton(build_box_frame((0, 0), 12, 1), 4, "v2")
    a = sorted(sk.D)[0]
    assert skeleton_path(sk, a, a, "i").path == [a]
    far = sorted(sk.C)[-1]
    with pytest.raises(LatticeError):
        skeleton_path(sk, a, far, "ii")


def test_edge_distances_and_counts():
    fr = build_box_frame((0, 0), 16, 1)
    sk = build_skeleton(fr, 4, "v2")
    v = sorted(sk.E)[0]
    e = EdgeId(v, 0)
    assert edge_distances(sk, e).ell == 0
    bases, axes = edges_meeting(sk.B)
    brute = {}
    E = sorted(sk.E)
    for b, ax in zip(bases.tolist(), axes.tolist()):
        o = list(b)
        o[ax] += 1
        dist = min(min(l1(b, y), l1(o, y)) for y in E)
        brute[dist] = brute.get(dist, 0) + 1
        ed = edge_distances(sk, EdgeId(tuple(b), ax))
        assert ed.ell == dist
        assert ed.ell1 <= ed.ell
    counts = ell_counts(sk)
    assert counts == brute
    assert all(c == 0 for ell, c in counts.items() if ell > 2 * fr.d * sk.n1)
    # polynomial shape: counts grow no faster than (ell + 1)^{d-1} times a fixed constant
    ratios = [c / (ell + 1) ** (fr.d - 1) for ell, c in counts.items()]
    assert max(ratios) < 10 * len(sk.E)
    with pytest.raises(LatticeError):
        edge_distances(build_skeleton(fr, 4, "v1"), e)


# ------------------------------------------------------------ blackness


def test_black_fails_for_constant_weights():
    fr = build_box_frame((0, 0), 4, 1)
    cfg = WeightConfig(DistributionSpec.constant(1), 0)
    res = is_black(cfg, fr, BlackParams(M=10, delta7=0.1), n1=2)
    assert not res and res.clause == "Black-1"


def cheap_boundary_config(fr, sk, inner_w=10.0, bd_w=1.0):
    box = fr.B.expand(fr.n + 1)
    bases, axes = edges_meeting(box)
    over = {}
    for b, ax in zip(bases.tolist(), axes.tolist()):
        e = EdgeId(tuple(b), ax)
        both_bd = e.base in sk.boundary and e.other in sk.boundary
        over[e] = bd_w if both_bd else inner_w
    return WeightConfig(DistributionSpec.uniform(0, 1), 0).with_overrides(over)


def test_black_handcrafted_v1():
    fr = build_box_frame((0, 0), 8, 1)
    sk = build_skeleton(fr, 2, "v1")
    cfg = cheap_boundary_config(fr, sk)
    res = is_black(cfg, fr, BlackParams(M=4, delta7=0.5), skel=sk)
    assert res, res
    ok, witness = black2_v1(cfg, sk, 4)
    assert ok
    W = sk.C & sk.boundary
    assert set(witness) == set(sk.boundary)
    for v, path in witness.items():
        assert path[0] == v and path[-1] in W
        assert all(p in sk.boundary for p in path)
        assert path_time(cfg, path) <= 4 * sk.n1
        assert l1(v, path[-1]) <= 2 * fr.d * sk.n1
    # make the boundary expensive: Black-2 fails
    cfg2 = cheap_boundary_config(fr, sk, bd_w=10.0)
    res2 = is_black(cfg2, fr, BlackParams(M=4, delta7=0.5), skel=sk)
    assert not res2 and res2.clause == "Black-2"


def test_black_v2_clause3():
    fr = build_box_frame((0, 0), 8, 1)
    sk = build_skeleton(fr, 2, "v2", N=10**4)
    cfg = cheap_boundary_config(fr, sk, bd_w=50.0)
    res = is_black(cfg, fr, BlackParams(M=4, N=10**4, delta7=0.5, variant="v2"), skel=sk)
    assert not res and res.clause == "Black-3"
    cfg = cheap_boundary_config(fr, sk, bd_w=1.0)
    res = is_black(cfg, fr, BlackParams(M=4, N=10**4, delta7=0.5, variant="v2"), skel=sk)
    assert res, res


# ------------------------------------------------------------ A-conditions


def a1_config(sk, params, d):
    fv = order_f(d, params.r, params.N)
    over = {e: 1.5 * params.c * fv for e in sk.E_edges}
    over.update({e: 0.0 for e in sk.C_edges - sk.E_edges})
    return WeightConfig(EXP, 1).with_overrides(over)


def test_a1_handcrafted():
    fr = build_box_frame((0, 0), 8, 1)
    sk = build_skeleton(fr, 2, "v1")
    params = AParams(c=1.0, gamma=2.0, M=1.0, N=10**4)
    cfg = a1_config(sk, params, 2)
    assert check_A_condition(cfg, sk, params)
    e = sorted(sk.E_edges)[0]
    fv = order_f(2, 1.0, 10**4)
    bad = cfg.with_overrides({e: 0.5 * fv})
    res = check_A_condition(bad, sk, params)
    assert not res and res.clause == "A1:E-tilde" and res.witness == (e,)
    e2 = sorted(sk.C_edges - sk.E_edges)[0]
    res = check_A_condition(cfg.with_overrides({e2: 5.0}), sk, params)
    assert not res and res.clause == "A1:C-tilde"


def test_a2_a3_handcrafted():
    fr = build_box_frame((0, 0), 8, 1)
    sk = build_skeleton(fr, 4, "v2", N=10**4)
    for variant in ("A2", "A3"):
        params = AParams(c=1.0, gamma=2.0, M=1.0, N=10**4, variant=variant)
        fv = order_f(2, 1.0, 10**4) if variant == "A2" else order_f(2, 1, 10**4)
        over = {}
        bases, axes = edges_meeting(sk.B)
        for b, ax in zip(bases.tolist(), axes.tolist()):
            over[EdgeId(tuple(b), ax)] = 100.0
        over.update({e: 0.0 for e in sk.C_edges - sk.E_edges})
        over.update({e: 1.5 * fv for e in sk.E_edges})
        cfg = WeightConfig(EXP, 2).with_overrides(over)
        assert check_A_condition(cfg, sk, params), variant
        e = sorted(sk.E_edges)[0]
        res = check_A_condition(cfg.with_overrides({e: 0.0}), sk, params)
        assert not res and res.clause == f"{variant}:E-tilde"
    with pytest.raises(LatticeError):
        check_A_condition(cfg, build_skeleton(fr, 2, "v1"), AParams(1, 2, 1, 10**4, variant="A2"))


def test_a3tilde():
    fr = build_box_frame((0, 0), 6, 1)
    sk = build_skeleton(fr, 2, "v2", N=10**4)
    params = AParams(c=1.0, gamma=2.0, M=1.0, N=10**4, variant="A3tilde", delta7=0.5)
    heavy = {EdgeId(tuple(b), ax): 2.0 for b, ax in zip(*[x.tolist() for x in edges_meeting(fr.B.expand(fr.n + 1))])}
    # skeleton edges are cheap but excluded from the check
    heavy.update({e: 0.0 for e in sk.C_edges})
    assert check_A_condition(WeightConfig(EXP, 0).with_overrides(heavy), sk, params)
    res = check_A_condition(WeightConfig(DistributionSpec.constant(0.1), 0), sk, params)
    assert not res and res.clause == "A3tilde"


def test_resample_edges_sets():
    fr = build_box_frame((0, 0), 8, 1)
    sk1 = build_skeleton(fr, 2, "v1")
    assert set(resample_edges(sk1)) == sk1.C_edges | sk1.E_edges
    sk2 = build_skeleton(fr, 2, "v2")
    inner = Box(tuple(x + 1 for x in fr.B.lo), tuple(x - 1 for x in fr.B.hi))
    for e in resample_edges(sk2):
        assert inner.contains(e.base) or inner.contains(e.other)
