"""Passage times, geodesic DAGs and max-edge statistics over geodesics."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import breadth_first_order, dijkstra

from .graph import LatticeGraph
from .lattice import Box, EdgeId, FullLattice, LatticeError, Region, as_point, as_region, linf

REL_TOL = 1e-12


class GeodesicOverflowError(RuntimeError):
    """More geodesics than the enumeration cap."""


@dataclass
class PassageResult:
    time: float
    source: tuple
    target: tuple
    region: Region
    envelope_limited: bool = False


def _resolve(D: Region, d: int):
    """Return (finite region to compute on, whether it is a stand-in envelope)."""
    if isinstance(D, FullLattice):
        if D.envelope is None:
            raise LatticeError("full-lattice queries need an explicit envelope box")
        return D.envelope, True
    return D, False


def staircase_bound(cfg, v, w) -> float:
    """Passage time of the axis-ordered monotone path from v to w (an upper bound)."""
    v, w = np.array(v, dtype=np.int64), np.array(w, dtype=np.int64)
    bases, axes = [], []
    cur = v.copy()
    for a in range(len(v)):
        step = 1 if w[a] >= cur[a] else -1
        lo, hi = sorted((int(cur[a]), int(w[a])))
        n = hi - lo
        if n:
            b = np.repeat(cur[None, :], n, axis=0)
            b[:, a] = np.arange(lo, hi)
            bases.append(b)
            axes.append(np.full(n, a))
        cur[a] = w[a]
    if not bases:
        return 0.0
    return float(cfg.edge_weights(np.concatenate(bases), np.concatenate(axes)).sum())


def _limit(bound: float) -> float:
    return bound * (1 + 1e-9) + 1e-12 if math.isfinite(bound) else np.inf


def _tol(cfg, T: float) -> float:
    return 0.0 if cfg.integer_valued else REL_TOL * max(abs(T), 1.0)


def passage_time(cfg, v, w, D: Region) -> PassageResult:
    """Restricted first passage time t_D(v, w) by Dijkstra; inf if disconnected."""
    D = as_region(D)
    v = as_point(v, D.d)
    w = as_point(w, D.d)
    R, envelope = _resolve(D, D.d)
    if not (R.contains(v) and R.contains(w)):
        raise LatticeError("terminals must lie in the region")
    if v == w:
        return PassageResult(0.0, v, w, D)
    if envelope:
        dag = geodesic_dag(cfg, v, w, D)
        return PassageResult(dag.time, v, w, D, dag.envelope_limited)
    g = LatticeGraph(R, cfg)
    bound = staircase_bound(cfg, v, w) if isinstance(R, Box) else np.inf
    dist = dijkstra(g.csr(), directed=True, indices=g.index(v), limit=_limit(bound))
    return PassageResult(float(dist[g.index(w)]), v, w, D)


def box_to_box(cfg, D0: Region, D1: Region, envelope: Region) -> PassageResult:
    """min over v in D0, w in D1 of t(v, w) restricted to ``envelope``."""
    envelope, _ = _resolve(as_region(envelope), D0.d)
    g = LatticeGraph(envelope, cfg)
    m0 = g.vertex_mask(D0)
    m1 = g.vertex_mask(D1)
    if m0.sum() != len(D0) or m1.sum() != len(D1):
        raise LatticeError("both boxes must lie inside the envelope")
    if np.any(m0 & m1):
        raise LatticeError("the two regions overlap")
    src = np.flatnonzero(m0)
    dist = dijkstra(g.csr(), directed=True, indices=src, min_only=True)
    tgt = np.flatnonzero(m1)
    j = int(np.argmin(dist[tgt]))
    return PassageResult(
        float(dist[tgt[j]]), g.point(int(src[0])), g.point(int(tgt[j])), envelope
    )


@dataclass
class GeodesicDag:
    """Union of all geodesics from ``source`` to ``target``.

    ``tail``/``head`` index into ``points``; zero-weight edges on plateaus
    are stored once, oriented from the lexicographically smaller endpoint.
    """

    source: tuple
    target: tuple
    time: float
    points: np.ndarray
    tail: np.ndarray
    head: np.ndarray
    weight: np.ndarray
    dist_from_source: np.ndarray
    dist_to_target: np.ndarray
    tol: float
    envelope_limited: bool = False
    region: Region | None = None
    source_index: np.ndarray | None = None
    target_index: np.ndarray | None = None

    @property
    def n_edges(self) -> int:
        return len(self.tail)

    def edges(self) -> list:
        out = []
        for a, b in zip(self.tail, self.head):
            p, q = self.points[a], self.points[b]
            axis = int(np.flatnonzero(p != q)[0])
            base = p if p[axis] < q[axis] else q
            out.append(EdgeId(tuple(int(x) for x in base), axis))
        return out

    def edge_set(self) -> frozenset:
        return frozenset(self.edges())

    def vertex_set(self) -> frozenset:
        return frozenset(map(tuple, self.points.tolist()))

    def _adjacency(self, keep=None, hub: bool = False) -> csr_matrix:
        """Walk graph: DAG edges plus reversed zero-weight edges.

        With ``hub`` an extra vertex (index n) points at every source.
        """
        keep = np.ones(self.n_edges, bool) if keep is None else keep
        z = keep & (self.weight == 0)
        rows = np.concatenate([self.tail[keep], self.head[z]])
        cols = np.concatenate([self.head[keep], self.tail[z]])
        n = len(self.points)
        if hub:
            rows = np.concatenate([rows, np.full(len(self.source_index), n)])
            cols = np.concatenate([cols, self.source_index])
            n += 1
        return csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(n, n))


def geodesic_dag(cfg, v, w, D: Region) -> GeodesicDag:
    """Forward and backward Dijkstra; keep edges with zero slack."""
    D = as_region(D)
    v = as_point(v, D.d)
    w = as_point(w, D.d)
    R, envelope = _resolve(D, D.d)
    if not (R.contains(v) and R.contains(w)):
        raise LatticeError("terminals must lie in the region")
    g = LatticeGraph(R, cfg)
    return _dag_from_graph(cfg, g, v, w, envelope_check=envelope, region=D)


def _dag_from_graph(cfg, g: LatticeGraph, v, w, envelope_check=False, region=None) -> GeodesicDag:
    iv, iw = g.index(v), g.index(w)
    bound = staircase_bound(cfg, v, w) if isinstance(g.region, Box) else np.inf
    return _dag_core(cfg, g, np.array([iv]), np.array([iw]), v, w, bound, envelope_check, region)


def _dag_core(cfg, g, src, tgt, v, w, bound, envelope_check, region) -> GeodesicDag:
    A = g.csr()
    df = dijkstra(A, directed=True, indices=src, limit=_limit(bound), min_only=True)
    T = float(df[tgt].min())
    if not math.isfinite(T):
        raise LatticeError("target unreachable from source inside the region")
    db = dijkstra(A, directed=True, indices=tgt, limit=_limit(T), min_only=True)
    tol = _tol(cfg, T)
    s, t, wt = g.src, g.dst, g.weights
    fwd = np.abs(df[s] + wt + db[t] - T) <= tol
    bwd = np.abs(df[t] + wt + db[s] - T) <= tol
    # zero-weight plateau edges qualify both ways; keep the lex-increasing one
    both = fwd & bwd
    bwd = bwd & ~both
    tails = np.concatenate([s[fwd], t[bwd]])
    heads = np.concatenate([t[fwd], s[bwd]])
    wts = np.concatenate([wt[fwd], wt[bwd]])
    src_used = src[np.abs(db[src] - T) <= tol]
    tgt_used = tgt[np.abs(df[tgt] - T) <= tol]
    verts = np.unique(np.concatenate([tails, heads, src_used, tgt_used]))
    remap = np.full(g.n, -1, dtype=np.int64)
    remap[verts] = np.arange(len(verts))
    pts = g.points[verts]
    limited = False
    if envelope_check:
        bb = g.region.bbox()
        limited = bool(np.any((pts == np.array(bb.lo)) | (pts == np.array(bb.hi))))
    return GeodesicDag(
        source=v,
        target=w,
        time=T,
        points=pts,
        tail=remap[tails],
        head=remap[heads],
        weight=wts,
        dist_from_source=df[verts],
        dist_to_target=db[verts],
        tol=tol,
        envelope_limited=limited,
        region=region,
        source_index=remap[src_used],
        target_index=remap[tgt_used],
    )


def box_geodesic_dag(cfg, D0: Region, D1: Region, envelope: Box, envelope_check: bool = True) -> GeodesicDag:
    """Union of optimal paths from any vertex of D0 to any vertex of D1."""
    g = LatticeGraph(envelope, cfg)
    m0, m1 = g.vertex_mask(D0), g.vertex_mask(D1)
    if m0.sum() != len(D0) or m1.sum() != len(D1):
        raise LatticeError("both regions must lie inside the envelope")
    if np.any(m0 & m1):
        raise LatticeError("the two regions overlap")
    return _dag_core(cfg, g, np.flatnonzero(m0), np.flatnonzero(m1), D0, D1, np.inf, envelope_check, envelope)


@dataclass
class MaxWeightStats:
    max_over_geodesics: float
    min_over_geodesics: float
    argmax_edges: list = field(default_factory=list)


def _connects(dag: GeodesicDag, keep) -> bool:
    hub = len(dag.points)
    order = breadth_first_order(dag._adjacency(keep, hub=True), hub, directed=True, return_predecessors=False)
    return bool(np.isin(dag.target_index, order).any())


def max_weight_stats(dag: GeodesicDag) -> MaxWeightStats:
    """Max and min over geodesics of the largest edge weight along the geodesic.

    Every DAG edge lies on some geodesic, so the max is the largest DAG
    weight.  The min is the smallest threshold whose sub-DAG still joins
    the terminals, found by bisection over the sorted distinct weights.
    """
    if dag.n_edges == 0:
        raise LatticeError("empty geodesic DAG")
    mx = float(dag.weight.max())
    levels = np.unique(dag.weight)
    lo, hi = 0, len(levels) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if _connects(dag, dag.weight <= levels[mid]):
            hi = mid
        else:
            lo = mid + 1
    arg = [e for e, x in zip(dag.edges(), dag.weight) if x == mx]
    return MaxWeightStats(mx, float(levels[lo]), arg)


def enumerate_geodesics(cfg, v, w, D: Region, cap: int = 100_000) -> list:
    """All self-avoiding geodesics as lists of points (DFS over the DAG)."""
    dag = geodesic_dag(cfg, v, w, D)
    return dag_paths(dag, cap)


def dag_paths(dag: GeodesicDag, cap: int = 100_000) -> list:
    A = dag._adjacency()
    s, t = int(dag.source_index[0]), int(dag.target_index[0])
    pts = [tuple(int(x) for x in p) for p in dag.points]
    if s == t:
        return [[pts[s]]]
    out = []
    stack = [(s, iter(A.indices[A.indptr[s] : A.indptr[s + 1]]))]
    on_path = {s}
    path = [s]
    while stack:
        node, it = stack[-1]
        nxt = next(it, None)
        if nxt is None:
            stack.pop()
            on_path.discard(path.pop())
            continue
        nxt = int(nxt)
        if nxt in on_path:
            continue
        if nxt == t:
            out.append([pts[i] for i in path] + [pts[t]])
            if len(out) > cap:
                raise GeodesicOverflowError(f"more than {cap} geodesics")
            continue
        on_path.add(nxt)
        path.append(nxt)
        stack.append((nxt, iter(A.indices[A.indptr[nxt] : A.indptr[nxt + 1]])))
    return out


def path_time(cfg, path) -> float:
    if len(path) < 2:
        return 0.0
    p = np.asarray(path, dtype=np.int64)
    a, b = p[:-1], p[1:]
    diff = b - a
    if not np.all(np.abs(diff).sum(axis=1) == 1):
        raise LatticeError("consecutive path points must be nearest neighbours")
    axes = np.argmax(np.abs(diff), axis=1)
    bases = np.where((diff.sum(axis=1) > 0)[:, None], a, b)
    return float(cfg.edge_weights(bases, axes).sum())


@dataclass
class EnvelopeCheck:
    contained: bool
    max_displacement: int
    dag: GeodesicDag


def geodesic_envelope_check(cfg, N: int, K: float, domain: Box) -> EnvelopeCheck:
    """Is the geodesic DAG from 0 to N e_1 inside [-KN, KN]^d?

    ``max_displacement`` is the largest sup-distance from a DAG vertex to
    the segment [0, N e_1].
    """
    d = domain.d
    R = int(math.floor(K * N))
    bkn = Box.cube((0,) * d, R)
    if not (bkn.issubset(domain) and domain != bkn):
        raise LatticeError(f"domain must strictly contain B_KN = [-{R},{R}]^{d}")
    v = (0,) * d
    w = (N,) + (0,) * (d - 1)
    dag = geodesic_dag(cfg, v, w, domain)
    pts = dag.points
    contained = bool(np.all(np.abs(pts) <= R))
    x = pts[:, 0]
    dx = np.maximum(np.maximum(-x, x - N), 0)
    rest = np.abs(pts[:, 1:]).max(axis=1) if d > 1 else np.zeros(len(pts), np.int64)
    disp = int(np.maximum(dx, rest).max()) if len(pts) else 0
    return EnvelopeCheck(contained, disp, dag)
