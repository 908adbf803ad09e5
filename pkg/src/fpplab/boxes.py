"""n-cube / n-box geometry, skeletons, blackness and A-condition checks.

A frame is indexed by ``l`` (cube index), scale ``n`` and a signed axis
``j`` in {+-1, ..., +-d}; axes are 1-based in ``j`` and 0-based elsewhere.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse.csgraph import dijkstra
from scipy.spatial import cKDTree

from .graph import LatticeGraph
from .lattice import Box, EdgeId, LatticeError, VertexSet, as_point, l1, neighbors
from .order import f as order_f
from .weights import EdgeSet


@dataclass(frozen=True)
class BoxFrame:
    l: tuple
    n: int
    j: int

    def __post_init__(self):
        l = as_point(self.l)
        object.__setattr__(self, "l", l)
        if self.n < 1:
            raise LatticeError("scale n must be positive")
        if self.j == 0 or abs(self.j) > len(l):
            raise LatticeError(f"j must be in +-1..+-{len(l)}")

    @property
    def d(self) -> int:
        return len(self.l)

    @property
    def axis(self) -> int:
        return abs(self.j) - 1

    @property
    def S(self) -> Box:
        """Half-open n-cube [n l_i, n(l_i+1)) as a closed box."""
        n = self.n
        return Box(tuple(n * x for x in self.l), tuple(n * (x + 1) - 1 for x in self.l))

    def T_of(self, l) -> Box:
        n = self.n
        return Box(tuple(n * x - n for x in l), tuple(n * (x + 2) for x in l))

    @property
    def T(self) -> Box:
        return self.T_of(self.l)

    @property
    def B(self) -> Box:
        other = list(self.l)
        other[self.axis] += 2 * (1 if self.j > 0 else -1)
        out = self.T.intersect(self.T_of(other))
        assert out is not None
        return out

    def boundary_mask(self, pts) -> np.ndarray:
        B = self.B
        pts = np.asarray(pts)
        return np.any((pts == np.array(B.lo)) | (pts == np.array(B.hi)), axis=1)


def build_box_frame(l, n: int, j: int) -> BoxFrame:
    return BoxFrame(tuple(l), int(n), int(j))


def _edges_within(points: set, d: int) -> set:
    out = set()
    for p in points:
        for i in range(d):
            q = list(p)
            q[i] += 1
            if tuple(q) in points:
                out.add(EdgeId(p, i))
    return out


@dataclass
class Skeleton:
    frame: BoxFrame
    n1: int
    variant: str
    D: frozenset
    C: frozenset
    C_edges: frozenset
    E: frozenset
    E_edges: frozenset
    boundary: frozenset
    F: frozenset = frozenset()
    log_N: float | None = None
    _trees: dict = field(default_factory=dict, repr=False)

    @property
    def d(self) -> int:
        return self.frame.d

    @property
    def B(self) -> Box:
        return self.frame.B

    def interior_contains(self, p) -> bool:
        return self.B.contains(p) and p not in self.boundary

    def component(self, a) -> frozenset:
        """W_a: component of a in C minus E."""
        a = tuple(a)
        allowed = self.C - self.E
        if a not in allowed:
            raise LatticeError("a must lie in C minus E")
        return frozenset(_bfs_component(a, allowed))

    def _tree(self, name):
        if name not in self._trees:
            pts = np.array(sorted(getattr(self, name)), dtype=np.float64)
            self._trees[name] = cKDTree(pts) if len(pts) else None
        return self._trees[name]

    def l1_distance(self, pts, name: str) -> np.ndarray:
        tree = self._tree(name)
        pts = np.asarray(pts, dtype=np.float64).reshape(-1, self.d)
        if tree is None:
            return np.full(len(pts), np.inf)
        dist, _ = tree.query(pts, k=1, p=1)
        return np.rint(dist)


def _bfs_component(a, allowed) -> set:
    seen = {a}
    q = deque([a])
    while q:
        p = q.popleft()
        for r in neighbors(p):
            if r in allowed and r not in seen:
                seen.add(r)
                q.append(r)
    return seen


def build_skeleton(frame: BoxFrame, n1: int, variant: str = "v1", N: int | None = None) -> Skeleton:
    """Skeleton of an n-box.

    D: points of n1 Z^d at sup-distance > n1 from the complement of B.
    C: the axis lines through D, clipped to B.
    v1: E is empty; E-tilde = edges from C minus dB to its complement.
    v2: E = points of C at 1-distance exactly n1/2 from D;
        E-tilde = <v, v+e_i> with v in E and v+e_i in C.
        F (when N is given) = points of B off dB and C within 1-distance
        (log N)^{1/(8 d^2)} of C.
    """
    if variant not in ("v1", "v2"):
        raise ValueError("variant must be v1 or v2")
    n, d = frame.n, frame.d
    if n1 < 1 or n1 >= n:
        raise LatticeError("need 1 <= n1 < n")
    if variant == "v2" and (n1 < 2 or n1 % 2):
        raise LatticeError("v2 skeletons need an even n1 >= 2")
    B = frame.B
    ranges = []
    for lo, hi in zip(B.lo, B.hi):
        a = -((-(lo + n1)) // n1) * n1  # ceil to multiple of n1
        ranges.append(list(range(a, hi - n1 + 1, n1)))
    D = set()
    if all(ranges):
        grid = np.stack(np.meshgrid(*[np.array(r) for r in ranges], indexing="ij"), -1).reshape(-1, d)
        D = set(map(tuple, grid.tolist()))
    C = set()
    for x in D:
        for i in range(d):
            for k in range(B.lo[i], B.hi[i] + 1):
                p = list(x)
                p[i] = k
                C.add(tuple(p))
    bd = {p for p in map(tuple, B.points().tolist()) if any(c in (lo, hi) for c, lo, hi in zip(p, B.lo, B.hi))}
    C_edges = _edges_within(C, d)
    if variant == "v1":
        E = set()
        inner = C - bd
        E_edges = set()
        for p in inner:
            for q in neighbors(p):
                if q not in inner:
                    E_edges.add(_edge(p, q))
    else:
        half = n1 // 2
        E = set()
        if D:
            Dt = cKDTree(np.array(sorted(D), dtype=np.float64))
            Cl = sorted(C)
            dist, _ = Dt.query(np.array(Cl, dtype=np.float64), k=1, p=1)
            E = {p for p, dd in zip(Cl, np.rint(dist).astype(int)) if dd == half}
        E_edges = set()
        for v in E:
            for i in range(d):
                q = list(v)
                q[i] += 1
                if tuple(q) in C:
                    E_edges.add(EdgeId(v, i))
    F = set()
    log_n = None
    if N is not None:
        log_n = math.log(N)
        if variant == "v2" and C:
            radius = log_n ** (1.0 / (8 * d * d))
            cand = [p for p in map(tuple, B.points().tolist()) if p not in bd and p not in C]
            if cand:
                Ct = cKDTree(np.array(sorted(C), dtype=np.float64))
                dist, _ = Ct.query(np.array(cand, dtype=np.float64), k=1, p=1)
                F = {p for p, dd in zip(cand, dist) if dd <= radius + 1e-9}
    return Skeleton(
        frame=frame,
        n1=n1,
        variant=variant,
        D=frozenset(D),
        C=frozenset(C),
        C_edges=frozenset(C_edges),
        E=frozenset(E),
        E_edges=frozenset(E_edges),
        boundary=frozenset(bd),
        F=frozenset(F),
        log_N=log_n,
    )


def _edge(p, q) -> EdgeId:
    i = next(k for k in range(len(p)) if p[k] != q[k])
    return EdgeId(p if p[i] < q[i] else q, i)


def c_size_bound(frame: BoxFrame, n1: int) -> float:
    return frame.d * (3 * frame.n / n1) ** (frame.d - 1) * frame.n


# ------------------------------------------------------------ skeleton paths


@dataclass
class SkeletonPath:
    clause: str
    path: list | None = None
    crossing_edge: EdgeId | None = None


def _bfs_path(a, b, allowed) -> list | None:
    if a == b:
        return [a]
    prev = {a: None}
    q = deque([a])
    while q:
        p = q.popleft()
        for r in neighbors(p):
            if r in allowed and r not in prev:
                prev[r] = p
                if r == b:
                    out = [r]
                    while prev[out[-1]] is not None:
                        out.append(prev[out[-1]])
                    return out[::-1]
                q.append(r)
    return None


def skeleton_path(skel: Skeleton, a, b, clause: str | None = None) -> SkeletonPath:
    """Shortest lattice path between a and b inside the set each clause names.

    (i)   a in C\\E, b in W_a: path inside C\\E
    (ii)  a, b in C with |a-b|_1 < n1/4: path inside C
    (iii) a in dB, b in C with |a-b|_1 < n1/4: path inside C u dB
    (iv)  |a-b|_1 <= n1/4 and W_a != W_b: a crossing edge <y1,y2> in E-tilde
          near a and b and on the axis line through a and b
    """
    a, b = tuple(a), tuple(b)
    CE = skel.C - skel.E
    dist = l1(a, b)
    if clause is None:
        if a in CE and b in CE:
            if b in skel.component(a):
                clause = "i"
            elif dist <= skel.n1 / 4:
                clause = "iv"
            else:
                raise LatticeError("no clause applies")
        elif a in skel.C and b in skel.C:
            clause = "ii"
        elif a in skel.boundary and b in skel.C:
            clause = "iii"
        else:
            raise LatticeError("no clause applies")
    if clause == "i":
        if a not in CE or b not in skel.component(a):
            raise LatticeError("clause (i) needs a in C\\E and b in W_a")
        return SkeletonPath("i", _bfs_path(a, b, CE))
    if clause == "ii":
        if a not in skel.C or b not in skel.C or not dist < skel.n1 / 4:
            raise LatticeError("clause (ii) needs a, b in C and |a-b|_1 < n1/4")
        return SkeletonPath("ii", _bfs_path(a, b, skel.C))
    if clause == "iii":
        if a not in skel.boundary or b not in skel.C or not dist < skel.n1 / 4:
            raise LatticeError("clause (iii) needs a in dB, b in C and |a-b|_1 < n1/4")
        return SkeletonPath("iii", _bfs_path(a, b, skel.C | skel.boundary))
    if clause == "iv":
        if not dist <= skel.n1 / 4:
            raise LatticeError("clause (iv) needs |a-b|_1 <= n1/4")
        if a in CE and b in CE and b in skel.component(a):
            raise LatticeError("clause (iv) needs W_a != W_b")
        diff = [i for i in range(len(a)) if a[i] != b[i]]
        for e in sorted(skel.E_edges):
            y1, y2 = e.endpoints
            for ya, yb in ((y1, y2), (y2, y1)):
                if l1(a, ya) > skel.n1 / 4 + 1 or l1(b, ya) > skel.n1 / 4 + 1:
                    continue
                if _collinear([a, b, ya, yb]):
                    return SkeletonPath("iv", crossing_edge=e)
        return SkeletonPath("iv")
    raise ValueError(f"unknown clause {clause!r}")


def _collinear(pts) -> bool:
    """All points on one axis-parallel line."""
    pts = np.array(pts)
    varying = np.flatnonzero(np.ptp(pts, axis=0) > 0)
    return len(varying) <= 1


# ------------------------------------------------------------ distances


@dataclass(frozen=True)
class EdgeDistances:
    ell: int
    ell1: int
    ell2: int


def point_distances(skel: Skeleton, pts) -> tuple:
    """(l, l1, l2) per point: 1-distance to E, to C, and their difference."""
    dE = skel.l1_distance(pts, "E")
    dC = skel.l1_distance(pts, "C")
    return dE, dC, dE - dC


def edge_distances(skel: Skeleton, e: EdgeId) -> EdgeDistances:
    if skel.variant != "v2":
        raise LatticeError("edge distances use the v2 skeleton")
    dE, dC, d2 = point_distances(skel, [e.base, e.other])
    return EdgeDistances(int(dE.min()), int(dC.min()), int(d2.min()))


def edges_meeting(box: Box) -> tuple:
    """(bases, axes) of all edges with at least one endpoint in ``box``."""
    g = LatticeGraph(box.expand(1))
    a = box.contains_array(g.points[g.src])
    b = box.contains_array(g.points[g.dst])
    keep = a | b
    return g.points[g.src[keep]], g.axis[keep]


def ell_counts(skel: Skeleton) -> dict:
    """#{e meeting B : l(e) = l} for every attained l."""
    bases, axes = edges_meeting(skel.B)
    other = bases.copy()
    other[np.arange(len(axes)), axes] += 1
    dE = np.minimum(skel.l1_distance(bases, "E"), skel.l1_distance(other, "E"))
    vals, counts = np.unique(dE.astype(np.int64), return_counts=True)
    return dict(zip(vals.tolist(), counts.tolist()))


# ------------------------------------------------------------ blackness


@dataclass(frozen=True)
class BlackParams:
    """delta7 defaults to 0.05 (mean - F_minus) when None."""

    M: float
    N: int = 10**4
    delta7: float | None = None
    variant: str = "v1"
    r: float = 1.0
    margin: int | None = None
    chunk: int = 256


@dataclass
class CheckResult:
    ok: bool
    clause: str | None = None
    witness: tuple | None = None
    value: float | None = None
    bound: float | None = None

    def __bool__(self):
        return self.ok


def default_delta7(dist) -> float:
    return 0.05 * (dist.mean - dist.F_minus)


def _black1(cfg, B: Box, n: int, slope: float, margin: int, chunk: int):
    env = B.expand(margin)
    g = LatticeGraph(env, cfg)
    A = g.csr()
    idx = g.index_array(B.points())
    pts = g.points[idx]
    for start in range(0, len(idx), chunk):
        src = idx[start : start + chunk]
        sp = g.points[src]
        dl1 = np.abs(sp[:, None, :] - pts[None, :, :]).sum(axis=2)
        lim = slope * dl1.max()
        dist = dijkstra(A, directed=True, indices=src, limit=lim * (1 + 1e-12))
        sub = dist[:, idx]
        bad = (dl1 >= n) & (sub < slope * dl1)
        if bad.any():
            i, k = np.argwhere(bad)[0]
            return CheckResult(
                False,
                "Black-1",
                (g.point(int(src[i])), tuple(int(x) for x in pts[k])),
                float(sub[i, k]),
                float(slope * dl1[i, k]),
            )
    return CheckResult(True)


def _boundary_graph(cfg, skel: Skeleton) -> LatticeGraph:
    return LatticeGraph(VertexSet(sorted(skel.boundary), skel.d), cfg)


def black2_v1(cfg, skel: Skeleton, M: float):
    """Every boundary vertex reaches some w in C n dB, within 1-distance
    2 d n1, by a path on dB of cost <= M n1.  Returns (result, witness paths)."""
    g = _boundary_graph(cfg, skel)
    W = sorted(skel.C & skel.boundary)
    cap = M * skel.n1
    if not W:
        return CheckResult(False, "Black-2", None, None, cap), {}
    widx = g.index_array(np.array(W))
    dist, pred = dijkstra(g.csr(), directed=True, indices=widx, limit=cap * (1 + 1e-12), return_predecessors=True)
    wp = np.array(W)
    bp = g.points
    near = np.abs(wp[:, None, :] - bp[None, :, :]).sum(axis=2) <= 2 * skel.d * skel.n1
    okm = near & (dist <= cap)
    witness = {}
    for v in range(g.n):
        rows = np.flatnonzero(okm[:, v])
        if not len(rows):
            best = np.where(near[:, v], dist[:, v], np.inf).min()
            return CheckResult(False, "Black-2", (g.point(v),), float(best), cap), witness
        r0 = int(rows[np.argmin(dist[rows, v])])
        path = [v]
        while path[-1] != widx[r0]:
            path.append(int(pred[r0, path[-1]]))
        witness[g.point(v)] = [g.point(i) for i in path]
    return CheckResult(True), witness


def is_black(cfg, frame: BoxFrame, params: BlackParams, skel: Skeleton | None = None, n1: int | None = None):
    """Check the blackness clauses in order; report the first failure."""
    d7 = params.delta7 if params.delta7 is not None else default_delta7(cfg.dist)
    B, n = frame.B, frame.n
    margin = params.margin if params.margin is not None else n
    if skel is None:
        if n1 is None:
            raise LatticeError("need a skeleton or n1")
        skel = build_skeleton(frame, n1, "v1" if params.variant == "v1" else "v2", params.N)
    if params.variant == "v2":
        # cheap clause first
        cap3 = math.log(params.N) ** (1.0 / (8 * frame.d * params.r))
        g = _boundary_graph(cfg, skel)
        if g.m and g.weights.max() > cap3:
            k = int(np.argmax(g.weights))
            e = EdgeId(g.point(int(g.src[k])), int(g.axis[k]))
            return CheckResult(False, "Black-3", (e,), float(g.weights[k]), cap3)
    res = _black1(cfg, B, n, cfg.dist.F_minus + d7, margin, params.chunk)
    if not res:
        return res
    if params.variant == "v1":
        res, _ = black2_v1(cfg, skel, params.M)
        return res
    lam = math.log(params.N) ** (1.0 / (8 * frame.d * params.r))
    g = _boundary_graph(cfg, skel)
    dist = dijkstra(g.csr(), directed=True)
    p = g.points
    dl1 = np.abs(p[:, None, :] - p[None, :, :]).sum(axis=2)
    bound = params.M * np.maximum(dl1, lam)
    bad = dist > bound
    if bad.any():
        i, k = np.argwhere(bad)[0]
        return CheckResult(False, "Black-2", (g.point(int(i)), g.point(int(k))), float(dist[i, k]), float(bound[i, k]))
    return CheckResult(True)


# ------------------------------------------------------------ A-conditions


@dataclass(frozen=True)
class AParams:
    c: float
    gamma: float
    M: float
    N: int
    r: float = 1.0
    variant: str = "A1"
    delta7: float | None = None
    margin: int | None = None
    chunk: int = 256


def resample_edges(skel: Skeleton) -> list:
    """Edges redrawn when flipping the configuration.

    v1: C-tilde u E-tilde.  v2: every edge meeting the box interior.
    """
    if skel.variant == "v1":
        return sorted(skel.C_edges | skel.E_edges)
    inner = skel.B
    lo = tuple(x + 1 for x in inner.lo)
    hi = tuple(x - 1 for x in inner.hi)
    if any(h < l for l, h in zip(lo, hi)):
        return []
    bases, axes = edges_meeting(Box(lo, hi))
    return [EdgeId(tuple(int(x) for x in b), int(a)) for b, a in zip(bases, axes)]


def _band(cfg, edges, lo, hi, name):
    if not edges:
        return None
    es = sorted(edges)
    w = cfg.edge_weights(np.array([e.base for e in es]), np.array([e.axis for e in es]))
    lo_arr = np.broadcast_to(lo, w.shape)
    hi_arr = np.broadcast_to(hi, w.shape)
    bad = (w < lo_arr) | (w > hi_arr)
    if bad.any():
        k = int(np.flatnonzero(bad)[0])
        bnd = lo_arr[k] if w[k] < lo_arr[k] else hi_arr[k]
        return CheckResult(False, name, (es[k],), float(w[k]), float(bnd))
    return None


def check_A_condition(cfg, skel: Skeleton, params: AParams) -> CheckResult:
    """Evaluate every clause of the chosen A-condition; report the first violation."""
    v = params.variant
    if v == "A1" and skel.variant != "v1":
        raise LatticeError("A1 uses the v1 skeleton")
    if v in ("A2", "A3", "A3tilde") and skel.variant != "v2":
        raise LatticeError(f"{v} uses the v2 skeleton")
    d, N, c, gam, M = skel.d, params.N, params.c, params.gamma, params.M
    Fm = cfg.dist.F_minus
    logN = math.log(N)
    inner_C = skel.C_edges - skel.E_edges
    if v == "A1":
        fv = order_f(d, params.r, N)
        for res in (
            _band(cfg, skel.E_edges, c * fv, gam * c * fv, "A1:E-tilde"),
            _band(cfg, inner_C, 0.0, Fm + c, "A1:C-tilde"),
        ):
            if res is not None:
                return res
        return CheckResult(True)
    if v == "A3tilde":
        return _a3tilde(cfg, skel, params)
    fv = order_f(d, params.r, N) if v == "A2" else order_f(d, d - 1, N)
    for res in (
        _band(cfg, skel.E_edges, c * c * fv, gam * c * c * fv, f"{v}:E-tilde"),
        _band(cfg, inner_C, 0.0, Fm + c * c, f"{v}:C-tilde"),
    ):
        if res is not None:
            return res
    bases, axes = edges_meeting(skel.B)
    other = bases.copy()
    other[np.arange(len(axes)), axes] += 1
    B = skel.B
    in_b = B.contains_array(bases), B.contains_array(other)
    on_bd = skel.frame.boundary_mask(bases) & in_b[0], skel.frame.boundary_mask(other) & in_b[1]
    interior = (in_b[0] & ~on_bd[0], in_b[1] & ~on_bd[1])
    ids = [EdgeId(tuple(int(x) for x in b), int(a)) for b, a in zip(bases, axes)]
    in_ct = np.array([e in skel.C_edges for e in ids], dtype=bool)
    w = cfg.edge_weights(bases, axes)
    if v == "A2":
        dE = np.minimum(skel.l1_distance(bases, "E"), skel.l1_distance(other, "E"))
        m3 = interior[0] & interior[1] & ~in_ct
        lo3 = np.maximum(c * fv / (dE + 1), M * M)
        m4 = (on_bd[0] | on_bd[1]) & (interior[0] | interior[1]) & ~in_ct
        lo4 = logN ** (1.0 / (2 * d * params.r))
    else:
        dE_b, dC_b = skel.l1_distance(bases, "E"), skel.l1_distance(bases, "C")
        dE_o, dC_o = skel.l1_distance(other, "E"), skel.l1_distance(other, "C")
        l1e = np.minimum(dC_b, dC_o)
        l2e = np.minimum(dE_b - dC_b, dE_o - dC_o)
        Fset = skel.F
        in_f = np.array([e.base in Fset or e.other in Fset for e in ids], dtype=bool)
        m3 = in_f & ~(on_bd[0] | on_bd[1])
        lo3 = np.maximum(c * fv / ((l1e + 1) * np.log(l2e + 2)), M * M)
        both_bd = on_bd[0] & on_bd[1]
        m4 = (on_bd[0] | on_bd[1]) & ~both_bd & ~in_ct
        lo4 = logN ** (1.0 / (2 * d * d))
    for mask, lo, name in ((m3, lo3, f"{v}:interior"), (m4, lo4, f"{v}:boundary-crossing")):
        lo_arr = np.broadcast_to(lo, w.shape)
        bad = mask & (w < lo_arr)
        if bad.any():
            k = int(np.flatnonzero(bad)[0])
            return CheckResult(False, name, (ids[k],), float(w[k]), float(lo_arr[k]))
    return CheckResult(True)


def _a3tilde(cfg, skel: Skeleton, params: AParams) -> CheckResult:
    """Paths avoiding C-tilde between interior points at 1-distance >= (log N)^{1/(8d^2)}
    cost at least (F_minus + delta7) times that distance."""
    d = skel.d
    d7 = params.delta7 if params.delta7 is not None else default_delta7(cfg.dist)
    slope = cfg.dist.F_minus + d7
    lam = math.log(params.N) ** (1.0 / (8 * d * d))
    B = skel.B
    margin = params.margin if params.margin is not None else skel.frame.n
    g = LatticeGraph(B.expand(margin), cfg, exclude=EdgeSet(skel.C_edges, d) if skel.C_edges else None)
    inner = [p for p in map(tuple, B.points().tolist()) if p not in skel.boundary]
    if not inner:
        return CheckResult(True)
    idx = g.index_array(np.array(inner))
    pts = g.points[idx]
    A = g.csr()
    for start in range(0, len(idx), params.chunk):
        src = idx[start : start + params.chunk]
        sp = g.points[src]
        dl1 = np.abs(sp[:, None, :] - pts[None, :, :]).sum(axis=2)
        dist = dijkstra(A, directed=True, indices=src, limit=slope * dl1.max() * (1 + 1e-12))
        sub = dist[:, idx]
        bad = (dl1 >= lam) & (sub < slope * dl1)
        if bad.any():
            i, k = np.argwhere(bad)[0]
            return CheckResult(
                False,
                "A3tilde",
                (g.point(int(src[i])), tuple(int(x) for x in pts[k])),
                float(sub[i, k]),
                float(slope * dl1[i, k]),
            )
    return CheckResult(True)
