"""Geometry of Z^d: points, canonical edges, regions, boundaries, shells."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Iterator, Sequence

import numpy as np

INT64_MAX = np.iinfo(np.int64).max
INT64_MIN = np.iinfo(np.int64).min

Point = tuple


class LatticeError(ValueError):
    """Raised for invalid geometric input."""


def as_point(coords, d: int | None = None) -> tuple:
    """Validate and return a lattice point as a tuple of Python ints."""
    try:
        pt = tuple(int(c) for c in coords)
    except TypeError:
        raise LatticeError(f"not a coordinate vector: {coords!r}")
    for c, raw in zip(pt, coords):
        if c != raw:
            raise LatticeError(f"non-integer coordinate {raw!r}")
        if c > INT64_MAX or c < INT64_MIN:
            raise LatticeError(f"coordinate {c} outside signed 64-bit range")
    if len(pt) == 0:
        raise LatticeError("points need at least one coordinate")
    if d is not None and len(pt) != d:
        raise LatticeError(f"expected dimension {d}, got {len(pt)}")
    return pt


# Public alias: a lattice point is an immutable tuple of ints.
LatticePoint = as_point


def l1(a, b) -> int:
    return sum(abs(x - y) for x, y in zip(a, b))


def linf(a, b) -> int:
    return max(abs(x - y) for x, y in zip(a, b))


def unit(d: int, axis: int, sign: int = 1) -> tuple:
    return tuple(sign if i == axis else 0 for i in range(d))


def neighbors(p) -> Iterator[tuple]:
    for i in range(len(p)):
        for s in (-1, 1):
            q = list(p)
            q[i] += s
            yield tuple(q)


@dataclass(frozen=True, order=True)
class EdgeId:
    """Undirected nearest-neighbour edge stored as (lexicographically lower endpoint, axis).

    The other endpoint is ``base + e_axis``.
    """

    base: tuple
    axis: int

    def __post_init__(self):
        if not 0 <= self.axis < len(self.base):
            raise LatticeError(f"axis {self.axis} out of range for d={len(self.base)}")

    @property
    def d(self) -> int:
        return len(self.base)

    @property
    def other(self) -> tuple:
        q = list(self.base)
        q[self.axis] += 1
        return tuple(q)

    @property
    def endpoints(self) -> tuple:
        return (self.base, self.other)

    @property
    def v_e(self) -> tuple:
        """Endpoint of smaller 1-norm.

        The two endpoints differ by one in a single coordinate, so their
        1-norms always differ by exactly one and the choice is unique.
        """
        a, b = self.endpoints
        return a if sum(map(abs, a)) < sum(map(abs, b)) else b

    def __contains__(self, p) -> bool:
        return tuple(p) == self.base or tuple(p) == self.other

    def __repr__(self):
        return f"EdgeId({self.base}->{self.other})"


def canonical_edge(a, b) -> EdgeId:
    """Canonical id of the edge between two 1-norm adjacent points."""
    a = as_point(a)
    b = as_point(b, len(a))
    diff = [y - x for x, y in zip(a, b)]
    nz = [i for i, x in enumerate(diff) if x != 0]
    if len(nz) != 1 or abs(diff[nz[0]]) != 1:
        raise LatticeError(f"{a} and {b} are not nearest neighbours")
    axis = nz[0]
    return EdgeId(a if diff[axis] == 1 else b, axis)


def path_edges(path: Sequence) -> list:
    return [canonical_edge(path[i], path[i + 1]) for i in range(len(path) - 1)]


# ---------------------------------------------------------------- regions


class Region:
    """Base class for vertex regions of Z^d."""

    d: int

    def contains(self, p) -> bool:
        raise NotImplementedError

    def __contains__(self, p) -> bool:
        return self.contains(p)

    @property
    def finite(self) -> bool:
        return True

    def points(self) -> np.ndarray:
        """All vertices as an ``(n, d)`` int64 array in row-major order."""
        raise NotImplementedError

    def contains_array(self, pts: np.ndarray) -> np.ndarray:
        return np.array([self.contains(tuple(p)) for p in pts], dtype=bool)

    def bbox(self) -> "Box":
        raise NotImplementedError

    def __len__(self) -> int:
        return len(self.points())


@dataclass(frozen=True)
class Box(Region):
    """Closed box ``prod_i [lo_i, hi_i]``."""

    lo: tuple
    hi: tuple

    def __post_init__(self):
        lo = as_point(self.lo)
        hi = as_point(self.hi, len(lo))
        if any(h < l for l, h in zip(lo, hi)):
            raise LatticeError(f"empty box {lo}..{hi}")
        if any(h - l >= INT64_MAX for l, h in zip(lo, hi)):
            raise LatticeError("box side overflows signed 64-bit range")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def cube(cls, center, radius: int) -> "Box":
        center = as_point(center)
        return cls(tuple(c - radius for c in center), tuple(c + radius for c in center))

    @property
    def d(self) -> int:
        return len(self.lo)

    @property
    def shape(self) -> tuple:
        return tuple(h - l + 1 for l, h in zip(self.lo, self.hi))

    @property
    def size(self) -> int:
        return int(np.prod(self.shape, dtype=np.int64))

    def __len__(self) -> int:
        return self.size

    def contains(self, p) -> bool:
        return len(p) == self.d and all(l <= x <= h for x, l, h in zip(p, self.lo, self.hi))

    def contains_array(self, pts):
        pts = np.asarray(pts, dtype=np.int64)
        return np.all((pts >= np.array(self.lo)) & (pts <= np.array(self.hi)), axis=1)

    def points(self) -> np.ndarray:
        axes = [np.arange(l, h + 1, dtype=np.int64) for l, h in zip(self.lo, self.hi)]
        grid = np.meshgrid(*axes, indexing="ij")
        return np.stack([g.ravel() for g in grid], axis=1)

    def bbox(self) -> "Box":
        return self

    def expand(self, margin: int) -> "Box":
        return Box(tuple(l - margin for l in self.lo), tuple(h + margin for h in self.hi))

    def intersect(self, other: "Box") -> "Box | None":
        lo = tuple(max(a, b) for a, b in zip(self.lo, other.lo))
        hi = tuple(min(a, b) for a, b in zip(self.hi, other.hi))
        if any(h < l for l, h in zip(lo, hi)):
            return None
        return Box(lo, hi)

    def issubset(self, other: "Box") -> bool:
        return all(a >= b for a, b in zip(self.lo, other.lo)) and all(
            a <= b for a, b in zip(self.hi, other.hi)
        )


class VertexSet(Region):
    """Finite explicit vertex set."""

    def __init__(self, pts, d: int | None = None):
        arr = np.asarray(list(pts) if not isinstance(pts, np.ndarray) else pts, dtype=np.int64)
        if arr.size == 0:
            if d is None:
                raise LatticeError("empty vertex set needs an explicit dimension")
            arr = arr.reshape(0, d)
        if arr.ndim != 2:
            raise LatticeError("vertex set must be a list of points")
        if d is not None and arr.shape[1] != d:
            raise LatticeError(f"expected dimension {d}")
        arr = np.unique(arr, axis=0) if len(arr) else arr
        self._pts = arr
        self.d = arr.shape[1]
        self._set = frozenset(map(tuple, arr.tolist()))

    def contains(self, p) -> bool:
        return tuple(p) in self._set

    def contains_array(self, pts):
        return np.array([tuple(p) in self._set for p in np.asarray(pts).tolist()], dtype=bool)

    def points(self) -> np.ndarray:
        return self._pts

    def __len__(self) -> int:
        return len(self._pts)

    def __iter__(self):
        return iter(map(tuple, self._pts.tolist()))

    def as_set(self) -> frozenset:
        return self._set

    def bbox(self) -> Box:
        if not len(self._pts):
            raise LatticeError("empty vertex set has no bounding box")
        return Box(tuple(self._pts.min(axis=0).tolist()), tuple(self._pts.max(axis=0).tolist()))

    def __eq__(self, other):
        if isinstance(other, VertexSet):
            return self._set == other._set
        if isinstance(other, (set, frozenset)):
            return self._set == other
        return NotImplemented

    def __hash__(self):
        return hash(self._set)

    def __repr__(self):
        return f"VertexSet(n={len(self)}, d={self.d})"


@dataclass(frozen=True)
class FullLattice(Region):
    """All of Z^d.  Queries need a finite ``envelope`` box to run on."""

    d: int
    envelope: Box | None = None

    def contains(self, p) -> bool:
        return len(p) == self.d

    @property
    def finite(self) -> bool:
        return False

    def points(self):
        raise LatticeError("the full lattice is infinite")

    def bbox(self):
        raise LatticeError("the full lattice is infinite")


def as_region(D) -> Region:
    if isinstance(D, Region):
        return D
    return VertexSet(D)


def _require_finite(D: Region):
    if not D.finite:
        raise LatticeError("operation needs a finite region")


def boundary(D) -> VertexSet:
    """Inner boundary: vertices of D with a nearest neighbour outside D."""
    D = as_region(D)
    _require_finite(D)
    pts = D.points()
    if isinstance(D, Box):
        lo, hi = np.array(D.lo), np.array(D.hi)
        mask = np.any((pts == lo) | (pts == hi), axis=1)
        return VertexSet(pts[mask], D.d)
    out = []
    members = D.as_set() if isinstance(D, VertexSet) else None
    for p in map(tuple, pts.tolist()):
        if any((q not in members) if members is not None else not D.contains(q) for q in neighbors(p)):
            out.append(p)
    return VertexSet(out, D.d)


def interior(D) -> Region:
    """``D`` minus its inner boundary."""
    D = as_region(D)
    _require_finite(D)
    if isinstance(D, Box):
        lo = tuple(l + 1 for l in D.lo)
        hi = tuple(h - 1 for h in D.hi)
        if any(h < l for l, h in zip(lo, hi)):
            return VertexSet([], D.d)
        return Box(lo, hi)
    b = boundary(D).as_set()
    return VertexSet([p for p in map(tuple, D.points().tolist()) if p not in b], D.d)


def connected_component(x, D) -> VertexSet:
    """Vertices reachable from x by nearest-neighbour steps inside D."""
    D = as_region(D)
    _require_finite(D)
    x = as_point(x, D.d)
    if not D.contains(x):
        raise LatticeError(f"{x} is not in the region")
    seen = {x}
    queue = deque([x])
    while queue:
        p = queue.popleft()
        for q in neighbors(p):
            if q not in seen and D.contains(q):
                seen.add(q)
                queue.append(q)
    return VertexSet(seen, D.d)


# ---------------------------------------------------------------- shells


@dataclass(frozen=True)
class Shell:
    """Vertices at sup-distance exactly k from the distinguished endpoint of an edge."""

    center_edge: EdgeId
    k: int
    center: tuple = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "center", self.center_edge.v_e)

    @property
    def d(self) -> int:
        return self.center_edge.d

    def contains(self, p) -> bool:
        return linf(p, self.center) == self.k

    def __contains__(self, p) -> bool:
        return self.contains(p)

    def vertex_array(self) -> np.ndarray:
        pts = Box.cube(self.center, self.k).points()
        c = np.array(self.center)
        keep = np.abs(pts - c).max(axis=1) == self.k
        return pts[keep]

    def vertices(self) -> frozenset:
        return frozenset(map(tuple, self.vertex_array().tolist()))

    def edges(self) -> frozenset:
        verts = self.vertices()
        out = set()
        for p in verts:
            for i in range(self.d):
                q = list(p)
                q[i] += 1
                q = tuple(q)
                if q in verts:
                    out.add(EdgeId(p, i))
        return frozenset(out)

    def region(self) -> VertexSet:
        return VertexSet(self.vertex_array(), self.d)

    def expected_size(self) -> int:
        return (2 * self.k + 1) ** self.d - (2 * self.k - 1) ** self.d


def shell(e: EdgeId, k: int) -> Shell:
    if int(k) != k or k < 1:
        raise LatticeError(f"shell index must be a positive integer, got {k}")
    return Shell(e, int(k))


def shell_path(sh: Shell, v, w) -> list:
    """Deterministic walk from v to w along the surface of a shell.

    Strategy: if v and w sit on opposite faces, first climb an auxiliary
    axis to its top face; then move onto w's face along the connecting
    ridge; finally adjust the remaining coordinates in axis order.  Every
    intermediate point keeps at least one coordinate at +-k, so the walk
    stays on the shell.  The length is at most (2d + 3)k.
    """
    d, k = sh.d, sh.k
    if d < 2:
        raise LatticeError("shells are disconnected in dimension 1")
    c = sh.center
    v = as_point(v, d)
    w = as_point(w, d)
    if not (sh.contains(v) and sh.contains(w)):
        raise LatticeError("endpoints must lie on the shell")
    rel = [x - y for x, y in zip(v, c)]
    tgt = [x - y for x, y in zip(w, c)]
    path = [tuple(v)]

    def step_to(axis, value):
        while rel[axis] != value:
            rel[axis] += 1 if value > rel[axis] else -1
            path.append(tuple(x + y for x, y in zip(rel, c)))

    # face of w: first axis where |w_a| = k
    a = next(i for i in range(d) if abs(tgt[i]) == k)
    s = tgt[a]
    if rel[a] != s:
        others = [i for i in range(d) if i != a and abs(rel[i]) == k]
        if not others:
            # v lies only on the opposite face; lift an auxiliary axis first
            b = next(i for i in range(d) if i != a)
            step_to(b, k)
        step_to(a, s)
    for i in range(d):
        if i != a:
            step_to(i, tgt[i])
    return path


def shells_disjoint(e: EdgeId, ks: Iterable[int]) -> bool:
    seen_v, seen_e = set(), set()
    for k in ks:
        sh = shell(e, k)
        v, ed = sh.vertices(), sh.edges()
        if seen_v & v or seen_e & ed:
            return False
        seen_v |= v
        seen_e |= ed
    return True


def box_points_iter(box: Box):
    return product(*(range(l, h + 1) for l, h in zip(box.lo, box.hi)))
