import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fpplab.lattice import (
    Box,
    EdgeId,
    FullLattice,
    LatticeError,
    VertexSet,
    as_point,
    boundary,
    canonical_edge,
    connected_component,
    interior,
    l1,
    linf,
    shell,
    shell_path,
    shells_disjoint,
)

from oracles import bfs_component, box_vertices

points2 = st.tuples(st.integers(-50, 50), st.integers(-50, 50))


def test_canonical_edge_examples():
    e = canonical_edge((0, 0), (1, 0))
    assert e.v_e == (0, 0)
    assert canonical_edge((-1, 0), (0, 0)).v_e == (0, 0)
    assert canonical_edge((2, 2), (2, 3)) == canonical_edge((2, 3), (2, 2))


def test_canonical_edge_rejects_non_adjacent():
    with pytest.raises(LatticeError):
        canonical_edge((0, 0), (1, 1))
    with pytest.raises(LatticeError):
        canonical_edge((0, 0), (0, 0))
    with pytest.raises(LatticeError):
        canonical_edge((0, 0), (2, 0))


def test_point_range_checked():
    with pytest.raises(LatticeError):
        as_point((2**63, 0))
    with pytest.raises(LatticeError):
        as_point((1, 2), d=3)


@given(points2, st.integers(0, 1), st.sampled_from([-1, 1]))
def test_canonical_edge_round_trip(p, axis, s):
    q = list(p)
    q[axis] += s
    q = tuple(q)
    e = canonical_edge(p, q)
    assert set(e.endpoints) == {p, q}
    assert canonical_edge(*e.endpoints) == e
    assert canonical_edge(q, p) == e
    assert abs(sum(map(abs, e.endpoints[0])) - sum(map(abs, e.endpoints[1]))) == 1
    assert sum(map(abs, e.v_e)) == min(sum(map(abs, p)), sum(map(abs, q)))


def test_edge_ids_biject_adjacent_pairs():
    pts = box_vertices((0, 0, 0), (2, 2, 2))
    pairs = {frozenset((a, b)) for a in pts for b in pts if l1(a, b) == 1}
    ids = {canonical_edge(*tuple(pr)) for pr in pairs}
    assert len(ids) == len(pairs) == 54


def test_shell_examples():
    e = canonical_edge((0, 0), (1, 0))
    sh = shell(e, 1)
    assert len(sh.vertices()) == 8
    assert len(sh.edges()) == 8
    e3 = canonical_edge((0, 0, 0), (1, 0, 0))
    assert len(shell(e3, 1).vertices()) == 26


def test_shell_rejects_bad_k():
    e = canonical_edge((0, 0), (1, 0))
    for k in (0, -1, 1.5):
        with pytest.raises(LatticeError):
            shell(e, k)


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_shell_sizes_and_disjointness(d):
    rng = np.random.default_rng(d)
    for _ in range(3):
        base = tuple(int(x) for x in rng.integers(-5, 5, d))
        e = EdgeId(base, int(rng.integers(0, d)))
        kmax = 10 if d <= 2 else (5 if d == 3 else 3)
        for k in range(1, kmax + 1):
            sh = shell(e, k)
            verts = sh.vertices()
            brute = {p for p in box_vertices([c - k for c in sh.center], [c + k for c in sh.center]) if linf(p, sh.center) == k}
            assert verts == brute
            assert len(verts) == sh.expected_size()
            assert len(verts) <= 2 * d * (2 * k + 1) ** (d - 1)
            assert len(verts) <= 4**d * d * k ** (d - 1)
        assert shells_disjoint(e, range(1, kmax + 1))


@pytest.mark.parametrize("d", [2, 3])
def test_shell_path_stays_on_shell(d):
    e = EdgeId((0,) * d, 0)
    for k in (1, 2, 4):
        sh = shell(e, k)
        verts = sorted(sh.vertices())
        rng = np.random.default_rng(k)
        for _ in range(60):
            v = verts[rng.integers(len(verts))]
            w = verts[rng.integers(len(verts))]
            path = shell_path(sh, v, w)
            assert path[0] == v and path[-1] == w
            assert all(p in sh for p in path)
            assert all(l1(a, b) == 1 for a, b in zip(path, path[1:]))
            assert len(path) - 1 <= 4 * d * d * (2 * k + 1)


def test_boundary_interior_examples():
    D = Box((0, 0), (2, 2))
    assert len(boundary(D)) == 8
    assert interior(D).points().tolist() == [[1, 1]]
    single = VertexSet([(3, 4)])
    assert boundary(single) == {(3, 4)}
    assert len(interior(single)) == 0
    assert len(boundary(Box((0, 0, 0), (3, 3, 3)))) == 56


def test_boundary_rejects_infinite():
    with pytest.raises(LatticeError):
        boundary(FullLattice(2))


@settings(max_examples=40, deadline=None)
@given(st.sets(st.tuples(st.integers(0, 5), st.integers(0, 5)), min_size=1, max_size=25))
def test_boundary_partition_explicit_sets(pts):
    D = VertexSet(pts, 2)
    b = boundary(D).as_set()
    i = interior(D).as_set()
    assert b | i == set(pts)
    assert not b & i
    for p in pts:
        has_out = any(q not in pts for q in [(p[0] + 1, p[1]), (p[0] - 1, p[1]), (p[0], p[1] + 1), (p[0], p[1] - 1)])
        assert (p in b) == has_out


def test_box_boundary_matches_explicit():
    D = Box((-1, 0, 2), (2, 3, 4))
    explicit = VertexSet(box_vertices(D.lo, D.hi), 3)
    assert boundary(D) == boundary(explicit).as_set()
    assert interior(D).points().tolist() == interior(explicit).points().tolist()


def test_connected_component_examples():
    D = VertexSet([(0, 0), (1, 0), (5, 5)])
    assert connected_component((0, 0), D) == {(0, 0), (1, 0)}
    box = Box((0, 0), (3, 2))
    assert len(connected_component((1, 1), box)) == 12
    strips = VertexSet([(0, 0), (1, 0), (3, 0), (4, 0)])
    assert connected_component((1, 0), strips) == {(0, 0), (1, 0)}
    with pytest.raises(LatticeError):
        connected_component((9, 9), strips)


@settings(max_examples=40, deadline=None)
@given(st.sets(st.tuples(st.integers(0, 6), st.integers(0, 6)), min_size=1, max_size=30))
def test_connected_component_matches_bfs(pts):
    x = sorted(pts)[0]
    assert connected_component(x, VertexSet(pts, 2)) == bfs_component(x, pts)


def test_box_helpers():
    b = Box.cube((1, 1), 2)
    assert b.lo == (-1, -1) and b.hi == (3, 3)
    assert b.size == 25 == len(b.points())
    assert b.intersect(Box((2, 2), (9, 9))) == Box((2, 2), (3, 3))
    assert b.intersect(Box((5, 5), (9, 9))) is None
    assert Box((0, 0), (1, 1)).issubset(b)
    pts = b.points()
    assert list(map(tuple, pts.tolist())) == list(itertools.product(range(-1, 4), range(-1, 4)))
    with pytest.raises(LatticeError):
        Box((0, 0), (-1, 0))
