"""Finite nearest-neighbour graphs over lattice regions, as scipy CSR matrices."""

from __future__ import annotations

import numpy as np
from scipy.sparse import csr_matrix

from .lattice import Box, LatticeError, Region, VertexSet, as_point


class LatticeGraph:
    """Vertices of a finite region, the induced edges, and their weights.

    Vertices are indexed in row-major order of their coordinates.  Edge
    ``k`` joins ``src[k]`` (the lexicographically lower endpoint) to
    ``dst[k] = src[k] + e_axis[k]``.
    """

    def __init__(self, region: Region, cfg=None, exclude=None):
        if not region.finite:
            raise LatticeError("graphs need a finite region")
        self.region = region
        self.d = region.d
        pts = region.points()
        self.points = pts
        self.n = len(pts)
        bb = region.bbox() if self.n else None
        self._lo = np.array(bb.lo, dtype=np.int64) if bb else np.zeros(self.d, np.int64)
        self._shape = np.array(bb.shape, dtype=np.int64) if bb else np.ones(self.d, np.int64)
        self._is_box = isinstance(region, Box)
        keys = self._linear(pts)
        if not self._is_box:
            order = np.argsort(keys)
            pts = pts[order]
            keys = keys[order]
            self.points = pts
        self._keys = keys
        src, dst, axes = [], [], []
        for a in range(self.d):
            nb = pts.copy()
            nb[:, a] += 1
            idx = self.index_array(nb)
            ok = idx >= 0
            src.append(np.flatnonzero(ok))
            dst.append(idx[ok])
            axes.append(np.full(int(ok.sum()), a, dtype=np.int64))
        self.src = np.concatenate(src) if src else np.zeros(0, np.int64)
        self.dst = np.concatenate(dst) if dst else np.zeros(0, np.int64)
        self.axis = np.concatenate(axes) if axes else np.zeros(0, np.int64)
        if exclude is not None and len(self.src):
            keep = ~self._edge_mask(exclude)
            self.src, self.dst, self.axis = self.src[keep], self.dst[keep], self.axis[keep]
        self.m = len(self.src)
        self.weights = None
        self._csr = None
        if cfg is not None:
            self.set_weights(cfg.edge_weights(self.points[self.src], self.axis))

    # ---------------------------------------------------------- indexing
    def _linear(self, pts):
        rel = np.asarray(pts, dtype=np.int64) - self._lo
        key = np.zeros(len(rel), dtype=np.int64)
        for i in range(self.d):
            key = key * self._shape[i] + rel[:, i]
        return key

    def index_array(self, pts) -> np.ndarray:
        """Vertex indices of ``pts`` (``-1`` when outside the region)."""
        pts = np.asarray(pts, dtype=np.int64).reshape(-1, self.d)
        rel = pts - self._lo
        inside = np.all((rel >= 0) & (rel < self._shape), axis=1)
        out = np.full(len(pts), -1, dtype=np.int64)
        if not inside.any():
            return out
        keys = self._linear(pts[inside])
        if self._is_box:
            out[inside] = keys
            return out
        pos = np.searchsorted(self._keys, keys)
        pos = np.minimum(pos, max(self.n - 1, 0))
        hit = self._keys[pos] == keys if self.n else np.zeros(len(keys), bool)
        sub = np.full(len(keys), -1, dtype=np.int64)
        sub[hit] = pos[hit]
        out[inside] = sub
        return out

    def index(self, p) -> int:
        p = as_point(p, self.d)
        i = int(self.index_array(np.array([p]))[0])
        if i < 0:
            raise LatticeError(f"{p} is not in the region")
        return i

    def point(self, i: int) -> tuple:
        return tuple(int(x) for x in self.points[i])

    def _edge_mask(self, edges) -> np.ndarray:
        from .weights import EdgeSet

        es = edges if isinstance(edges, EdgeSet) else EdgeSet(edges, self.d)
        mask, _ = es.lookup(self.points[self.src], self.axis)
        return mask

    def edge_mask(self, edges) -> np.ndarray:
        return self._edge_mask(edges)

    def vertex_mask(self, region_or_pts) -> np.ndarray:
        if isinstance(region_or_pts, Region):
            return region_or_pts.contains_array(self.points)
        mask = np.zeros(self.n, dtype=bool)
        idx = self.index_array(np.asarray(list(region_or_pts), dtype=np.int64).reshape(-1, self.d))
        mask[idx[idx >= 0]] = True
        return mask

    # ---------------------------------------------------------- weights
    def set_weights(self, w):
        w = np.asarray(w, dtype=np.float64)
        if w.shape != (self.m,):
            raise ValueError("one weight per edge required")
        self.weights = w
        self._csr = None

    def csr(self) -> csr_matrix:
        """Symmetric adjacency; explicit zeros are kept and count as edges."""
        if self._csr is None:
            rows = np.concatenate([self.src, self.dst])
            cols = np.concatenate([self.dst, self.src])
            data = np.concatenate([self.weights, self.weights])
            order = np.lexsort((cols, rows))
            rows, cols, data = rows[order], cols[order], data[order]
            indptr = np.zeros(self.n + 1, dtype=np.int64)
            np.add.at(indptr, rows + 1, 1)
            indptr = np.cumsum(indptr)
            self._csr = csr_matrix((data, cols, indptr), shape=(self.n, self.n))
        return self._csr

    def subgraph_csr(self, edge_keep: np.ndarray) -> csr_matrix:
        rows = np.concatenate([self.src[edge_keep], self.dst[edge_keep]])
        cols = np.concatenate([self.dst[edge_keep], self.src[edge_keep]])
        data = np.concatenate([self.weights[edge_keep], self.weights[edge_keep]])
        order = np.lexsort((cols, rows))
        rows, cols, data = rows[order], cols[order], data[order]
        indptr = np.zeros(self.n + 1, dtype=np.int64)
        np.add.at(indptr, rows + 1, 1)
        return csr_matrix((data, cols, np.cumsum(indptr)), shape=(self.n, self.n))


def region_graph(region: Region, cfg=None, exclude=None) -> LatticeGraph:
    return LatticeGraph(region, cfg, exclude)


def vertex_set_from_mask(g: LatticeGraph, mask) -> VertexSet:
    return VertexSet(g.points[np.asarray(mask)], g.d)
