"""Good edges: an edge is good when some small shell around it is cheap to
traverse between any two of its vertices.  A good heavy edge can be cut
out of any path by a detour along that shell."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.sparse.csgraph import dijkstra

from .graph import LatticeGraph
from .lattice import Box, EdgeId, LatticeError, VertexSet, shell
from .order import f as order_f
from .passage import path_time

VARIANTS = ("subexp", "moment", "superexp")


@dataclass(frozen=True)
class GoodnessParams:
    """``variant`` picks the shell range and threshold:

    subexp    k <= f_{d,r}(N),      threshold 2 M f_{d,r}(N)
    moment    k <= M f_{d,0}(N),    threshold 4 d^2 M^2 f_{d,0}(N)
    superexp  k <= f_{d,r}(N),      threshold 2 d M f_{d,r}(N)
    """

    M: float
    N: int
    r: float = 1.0
    variant: str = "subexp"

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}")

    def k_max(self, d: int) -> int:
        if self.variant == "moment":
            return int(math.floor(self.M * order_f(d, 0, self.N)))
        return int(math.floor(order_f(d, self.r, self.N)))

    def threshold(self, d: int) -> float:
        if self.variant == "moment":
            return 4 * d * d * self.M**2 * order_f(d, 0, self.N)
        fv = order_f(d, self.r, self.N)
        if self.variant == "superexp":
            return 2 * d * self.M * fv
        return 2 * self.M * fv


def shell_graph(cfg, e: EdgeId, k: int) -> LatticeGraph:
    sh = shell(e, k)
    return LatticeGraph(VertexSet(sh.vertex_array(), sh.d), cfg)


def shell_diameter(cfg, e: EdgeId, k: int) -> float:
    """max over v, w on the shell of the shell-restricted passage time."""
    g = shell_graph(cfg, e, k)
    dist = dijkstra(g.csr(), directed=True)
    return float(dist.max())


def is_good_edge(cfg, e: EdgeId, params: GoodnessParams, domain: Box | None = None):
    """Return ``(good, k)`` with the first witnessing shell index (or None)."""
    d = e.d
    if d < 2:
        raise LatticeError("goodness needs d >= 2")
    kmax = params.k_max(d)
    thr = params.threshold(d)
    if domain is not None and kmax >= 1:
        if not Box.cube(e.v_e, kmax).issubset(domain):
            raise LatticeError("shells up to k_max do not fit the simulation domain")
    for k in range(1, kmax + 1):
        if shell_diameter(cfg, e, k) <= thr:
            return True, k
    return False, None


def _loop_erase(path: list) -> list:
    out, pos = [], {}
    for p in path:
        if p in pos:
            cut = pos[p]
            for q in out[cut + 1 :]:
                del pos[q]
            out = out[: cut + 1]
        else:
            pos[p] = len(out)
            out.append(p)
    return out


def detour_rewrite(cfg, path, e_heavy: EdgeId, k: int, params: GoodnessParams) -> list:
    """Replace the stretch of ``path`` between its first and last visits to
    the k-th shell around ``e_heavy`` by a cheapest route on the shell.

    Refuses unless the heavy edge is above the goodness threshold, shell k
    is cheap enough, and the heavy edge lies strictly between the first and
    last shell visits.  The output is loop-erased.
    """
    path = [tuple(int(x) for x in p) for p in path]
    d = e_heavy.d
    thr = params.threshold(d)
    pos = None
    for i in range(len(path) - 1):
        if {path[i], path[i + 1]} == set(e_heavy.endpoints):
            pos = i
            break
    if pos is None:
        raise LatticeError("the heavy edge is not on the path")
    from .weights import weight

    if not weight(cfg, e_heavy) > thr:
        raise LatticeError("heavy edge is not above the goodness threshold")
    sh = shell(e_heavy, k)
    g = shell_graph(cfg, e_heavy, k)
    dist, pred = dijkstra(g.csr(), directed=True, return_predecessors=True)
    if dist.max() > thr:
        raise LatticeError(f"shell {k} is not cheap enough")
    hits = [i for i, p in enumerate(path) if sh.contains(p)]
    if not hits or not (hits[0] <= pos and hits[-1] >= pos + 1):
        raise LatticeError("path does not cross the shell around the heavy edge")
    m, l = hits[0], hits[-1]
    a, b = g.index(path[m]), g.index(path[l])
    route = [b]
    while route[-1] != a:
        route.append(int(pred[a, route[-1]]))
    route = [g.point(i) for i in reversed(route)]
    new = path[:m] + route + path[l + 1 :]
    new = _loop_erase(new)
    assert path_time(cfg, new) < path_time(cfg, path)
    return new
