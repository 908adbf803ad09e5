"""Hierarchical family of disjoint edge sets supporting 2^{(d-1)n} nearly
parallel routes from the origin, used for super-exponential tail bounds of
box-restricted passage times.

Level k (1 <= k <= n) owns one edge set per index tuple (i_1..i_k) with
each i_s in {0,1}^{d-1}.  Its route starts at (d 2^k, u) with
u = sum_s 2^{k-s} i_s, doubles the transverse coordinates while moving
along e_1, runs to x = d 2^{k+1}, and ends with a unit transverse cube whose
corners 2u + i are the starting heights of level k+1.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .lattice import EdgeId, LatticeError, canonical_edge, neighbors


def v_sequence(v, i: int) -> tuple:
    """Point reached after i steps of the doubling walk started at v.

    While i <= 2 s (s = v_2 + ... + v_d) the walk alternates a step along
    e_1 (even i) with a step raising the current transverse coordinate
    (odd i), doubling coordinates 2..d in order; afterwards it runs along
    e_1.  In both phases |v(i)|_1 = |v|_1 + i.
    """
    v = tuple(int(x) for x in v)
    if any(x < 0 for x in v):
        raise LatticeError("v must have nonnegative coordinates")
    if i < 0:
        raise LatticeError("i must be nonnegative")
    d = len(v)
    s = sum(v[1:])
    if i > 2 * s:
        return (v[0] + i - s,) + tuple(2 * x for x in v[1:])
    out = list(v)
    out[0] = v[0] + (i + 1) // 2
    done = 0  # running sum v_2 + ... + v_k
    for q in range(1, d):
        if i > 2 * (done + v[q]):
            out[q] = 2 * v[q]
            done += v[q]
            continue
        out[q] = v[q] + (i - 2 * done) // 2
        break
    return tuple(out)


def cube_edges(v) -> frozenset:
    """Edges of the unit cube spanned by the transverse axes at v."""
    v = tuple(v)
    d = len(v)
    out = set()
    for a in product((0, 1), repeat=d - 1):
        p = (v[0],) + tuple(x + y for x, y in zip(v[1:], a))
        for q in range(1, d):
            if a[q - 1] == 0:
                r = list(p)
                r[q] += 1
                out.add(EdgeId(p, q))
    return frozenset(out)


def walk_edges(v, x_stop: int) -> tuple:
    """Edges <v(i), v(i+1)> for i >= 0 while v(i+1) stays in x <= x_stop.

    Returns (edge set, end point v(l)).
    """
    out = set()
    i = 0
    cur = v_sequence(v, 0)
    while True:
        nxt = v_sequence(v, i + 1)
        if nxt[0] > x_stop:
            break
        out.add(canonical_edge(cur, nxt))
        cur = nxt
        i += 1
    return frozenset(out), cur


@dataclass
class XiFamily:
    d: int
    m: int
    n: int
    sets: dict = field(default_factory=dict)
    degenerate: bool = False
    fallback_path: list | None = None

    def level(self, k: int) -> dict:
        return {key[1]: es for key, es in self.sets.items() if key[0] == k}

    @property
    def root(self) -> frozenset:
        return self.sets[(0, ())]

    def leaf_target(self, idx) -> tuple:
        n = self.n
        trans = [0] * (self.d - 1)
        for j, ij in enumerate(idx, start=1):
            for q in range(self.d - 1):
                trans[q] += 2 ** (n - j + 1) * ij[q]
        return (self.d * 2 ** (n + 1),) + tuple(trans)


def level_start(d: int, idx) -> tuple:
    k = len(idx)
    u = [0] * (d - 1)
    for s, i_s in enumerate(idx, start=1):
        for q in range(d - 1):
            u[q] += 2 ** (k - s) * i_s[q]
    return (d * 2**k,) + tuple(u)


def xi_depth(d: int, m: int) -> int:
    return int(math.floor(math.log2(m / (6 * d))))


def build_xi(d: int, m: int) -> XiFamily:
    if d < 1:
        raise LatticeError("d must be at least 1")
    if m <= 12 * d:
        path = [(x,) + (0,) * (d - 1) for x in range(m + 1)]
        return XiFamily(d, m, 0, {}, degenerate=True, fallback_path=path)
    n = xi_depth(d, m)
    sets = {}
    walk, end = walk_edges((0,) * d, 2 * d)
    sets[(0, ())] = walk | cube_edges(end)
    bits = list(product((0, 1), repeat=d - 1))
    for k in range(1, n + 1):
        for idx in product(bits, repeat=k):
            start = level_start(d, idx)
            edges, end = walk_edges(start, d * 2 ** (k + 1))
            sets[(k, idx)] = edges | cube_edges(end)
    return XiFamily(d, m, n, sets)


def leaf_grid(d: int, n: int) -> set:
    """G_n = { sum_j 2^{n-j+1} i_j } in Z^{d-1}."""
    out = set()
    for idx in product(list(product((0, 1), repeat=d - 1)), repeat=n):
        out.add(tuple(sum(2 ** (n - j + 1) * ij[q] for j, ij in enumerate(idx, start=1)) for q in range(d - 1)))
    return out


def _bfs(edges, src, dst):
    adj = {}
    for e in edges:
        a, b = e.endpoints
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    prev = {src: None}
    q = deque([src])
    while q:
        p = q.popleft()
        if p == dst:
            out = [p]
            while prev[out[-1]] is not None:
                out.append(prev[out[-1]])
            return out[::-1]
        for r in adj.get(p, ()):
            if r not in prev:
                prev[r] = p
                q.append(r)
    return None


def leaf_path(fam: XiFamily, idx) -> list | None:
    """Path from 0 to the leaf target inside root u levels along idx."""
    edges = set(fam.root)
    for k in range(1, fam.n + 1):
        edges |= fam.sets[(k, tuple(idx[:k]))]
    return _bfs(edges, (0,) * fam.d, fam.leaf_target(idx))


def verify_conditions(fam: XiFamily) -> dict:
    """Check disjointness, containment, size bounds and leaf connectivity."""
    report = {"d": fam.d, "m": fam.m, "n": fam.n, "degenerate": fam.degenerate}
    if fam.degenerate:
        report["conditions"] = {c: "n/a" for c in ("xi1", "xi2", "xi3", "xi4")}
        report["counts"] = {}
        return report
    d, m, n = fam.d, fam.m, fam.n
    owner = {}
    xi1 = True
    for key, es in fam.sets.items():
        for e in es:
            if e in owner and owner[e] != key:
                xi1 = False
            owner[e] = key
    xi2 = True
    for key, es in fam.sets.items():
        for e in es:
            for p in e.endpoints:
                if not (0 <= p[0] <= m / 3 and all(0 <= x <= m / 2 for x in p[1:])):
                    xi2 = False
    counts = {}
    xi3 = True
    for (k, idx), es in fam.sets.items():
        cap = 2 ** (d + 1) if k == 0 else 2 ** (k + d + 1)
        counts.setdefault(str(k), []).append(len(es))
        if len(es) > cap:
            xi3 = False
    xi4 = True
    bits = list(product((0, 1), repeat=d - 1))
    for idx in product(bits, repeat=n):
        path = leaf_path(fam, idx)
        if path is None or path[-1] != fam.leaf_target(idx):
            xi4 = False
            break
    report["conditions"] = {
        "xi1": "pass" if xi1 else "fail",
        "xi2": "pass" if xi2 else "fail",
        "xi3": "pass" if xi3 else "fail",
        "xi4": "pass" if xi4 else "fail",
    }
    report["counts"] = {k: {"sets": len(v), "max_edges": max(v)} for k, v in counts.items()}
    return report


def v_sums(cfg, fam: XiFamily) -> list:
    """[V_0, V_1, ..., V_n]: V_0 sums the root's weights, V_k sums every level-k set."""
    def total(es):
        if not es:
            return 0.0
        es = list(es)
        return float(cfg.edge_weights(np.array([e.base for e in es]), np.array([e.axis for e in es])).sum())

    if fam.degenerate:
        return [0.0]
    out = [total(fam.root)]
    for k in range(1, fam.n + 1):
        out.append(sum(total(es) for es in fam.level(k).values()))
    return out


def straight_segment(vbar, m: int, n: int, d: int | None = None) -> list:
    """Axis-1 path from (d 2^n, vbar) to (m - d 2^n, vbar)."""
    vbar = tuple(int(x) for x in vbar)
    d = d if d is not None else len(vbar) + 1
    x0, x1 = d * 2**n, m - d * 2**n
    if m - d * 2 ** (n + 1) < 0:
        raise LatticeError("need m >= d 2^{n+1}")
    return [(x,) + vbar for x in range(x0, x1 + 1)]
