"""Random edge-weight environments.

Weights are never stored.  Each edge's weight is the inverse CDF of a
uniform variate obtained by hashing ``(key, base coords, axis)`` with a
splitmix64-style mixer, so any edge can be queried in any order, from any
process, and always gets the same value.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from .lattice import EdgeId, canonical_edge

_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MASK = (1 << 64) - 1


def _mix(x: np.ndarray) -> np.ndarray:
    x = x ^ (x >> np.uint64(30))
    x = x * _M1
    x = x ^ (x >> np.uint64(27))
    x = x * _M2
    return x ^ (x >> np.uint64(31))


def mix64(*values: int) -> int:
    """Scalar keyed mixer used to derive sub-keys and per-replica seeds."""
    h = np.array([0x6A09E667F3BCC909], dtype=np.uint64)
    for v in values:
        h = _mix(h ^ (np.array([int(v) & _MASK], dtype=np.uint64) + _GOLDEN))
    return int(h[0])


def hash_edges(key: int, bases: np.ndarray, axes: np.ndarray) -> np.ndarray:
    """uint64 hash per edge; ``bases`` is ``(m, d)`` int64, ``axes`` is ``(m,)``."""
    bases = np.asarray(bases, dtype=np.int64)
    with np.errstate(over="ignore"):
        h = _mix(np.full(len(bases), int(key) & _MASK, dtype=np.uint64) + _GOLDEN)
        for i in range(bases.shape[1]):
            h = _mix(h ^ (bases[:, i].astype(np.uint64) + _GOLDEN))
        h = _mix(h ^ (np.asarray(axes, dtype=np.int64).astype(np.uint64) + _GOLDEN))
    return h


def uniforms(key: int, bases, axes) -> np.ndarray:
    """Open-interval uniforms in (0, 1) from the top 53 bits of the hash."""
    h = hash_edges(key, bases, axes)
    return ((h >> np.uint64(11)).astype(np.float64) + 0.5) / 9007199254740992.0


# ------------------------------------------------------------ distributions

FAMILIES = {
    "weibull_tail": ("r", "scale"),
    "exponential": ("rate",),
    "pareto": ("exponent", "min"),
    "uniform": ("lo", "hi"),
    "bernoulli_two_point": ("a", "b", "p_a"),
    "constant": ("v",),
}

_DEFAULTS = {"weibull_tail": {"scale": 1.0}, "exponential": {"rate": 1.0}, "pareto": {"min": 1.0}}


@dataclass(frozen=True)
class DistributionSpec:
    """One of the supported nonnegative weight laws.

    weibull_tail(r, scale)      P(tau > t) = exp(-(t/scale)^r)
    exponential(rate)
    pareto(exponent, min)       P(tau > t) = (min/t)^exponent, t >= min
    uniform(lo, hi)
    bernoulli_two_point(a, b, p_a)   tau = a w.p. p_a, else b
    constant(v)
    """

    family: str
    params: tuple = ()

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        p = dict(_DEFAULTS.get(self.family, {}))
        p.update(dict(self.params))
        missing = [k for k in FAMILIES[self.family] if k not in p]
        extra = [k for k in p if k not in FAMILIES[self.family]]
        if missing or extra:
            raise ValueError(f"{self.family}: missing {missing} / unexpected {extra}")
        p = {k: float(p[k]) for k in FAMILIES[self.family]}
        object.__setattr__(self, "params", tuple(p.items()))
        f = self.family
        if f == "weibull_tail" and not (p["r"] > 0 and p["scale"] > 0):
            raise ValueError("weibull_tail needs r > 0 and scale > 0")
        if f == "exponential" and not p["rate"] > 0:
            raise ValueError("exponential needs rate > 0")
        if f == "pareto" and not (p["exponent"] > 0 and p["min"] > 0):
            raise ValueError("pareto needs exponent > 0 and min > 0")
        if f == "uniform" and not (0 <= p["lo"] <= p["hi"]):
            raise ValueError("uniform needs 0 <= lo <= hi")
        if f == "bernoulli_two_point" and not (p["a"] >= 0 and p["b"] >= 0 and 0 <= p["p_a"] <= 1):
            raise ValueError("bernoulli_two_point needs a, b >= 0 and p_a in [0, 1]")
        if f == "constant" and not p["v"] >= 0:
            raise ValueError("constant needs v >= 0")

    @property
    def p(self) -> dict:
        return dict(self.params)

    # constructors
    @classmethod
    def weibull_tail(cls, r, scale=1.0):
        return cls("weibull_tail", (("r", r), ("scale", scale)))

    @classmethod
    def exponential(cls, rate=1.0):
        return cls("exponential", (("rate", rate),))

    @classmethod
    def pareto(cls, exponent, min=1.0):
        return cls("pareto", (("exponent", exponent), ("min", min)))

    @classmethod
    def uniform(cls, lo=0.0, hi=1.0):
        return cls("uniform", (("lo", lo), ("hi", hi)))

    @classmethod
    def bernoulli_two_point(cls, a, b, p_a):
        return cls("bernoulli_two_point", (("a", a), ("b", b), ("p_a", p_a)))

    @classmethod
    def constant(cls, v):
        return cls("constant", (("v", v),))

    # serialization
    def to_json(self) -> dict:
        return {"family": self.family, "params": self.p}

    @classmethod
    def from_json(cls, obj) -> "DistributionSpec":
        if isinstance(obj, str):
            obj = json.loads(obj)
        return cls(obj["family"], tuple(obj.get("params", {}).items()))

    # sampling
    def ppf_upper(self, u: np.ndarray) -> np.ndarray:
        """Map uniforms in (0,1) to weights.

        Continuous families use the survival-function inverse, which is
        distributionally identical to the CDF inverse and keeps far tails
        accurate.
        """
        u = np.asarray(u, dtype=np.float64)
        p, f = self.p, self.family
        if f == "weibull_tail":
            return p["scale"] * (-np.log(u)) ** (1.0 / p["r"])
        if f == "exponential":
            return -np.log(u) / p["rate"]
        if f == "pareto":
            return p["min"] * u ** (-1.0 / p["exponent"])
        if f == "uniform":
            return p["lo"] + (p["hi"] - p["lo"]) * u
        if f == "bernoulli_two_point":
            return np.where(u < p["p_a"], p["a"], p["b"])
        return np.full(u.shape, p["v"])

    def sample(self, rng: np.random.Generator, size) -> np.ndarray:
        u = rng.random(size)
        # rng.random is in [0,1); nudge off zero for the log/power maps
        u = np.where(u == 0.0, 2.0**-54, u)
        return self.ppf_upper(u)

    # distribution functions
    def cdf(self, x) -> np.ndarray:
        """P(tau <= x)."""
        x = np.asarray(x, dtype=np.float64)
        p, f = self.p, self.family
        if f == "weibull_tail":
            return np.where(x <= 0, 0.0, -np.expm1(-(np.maximum(x, 0) / p["scale"]) ** p["r"]))
        if f == "exponential":
            return np.where(x <= 0, 0.0, -np.expm1(-p["rate"] * np.maximum(x, 0)))
        if f == "pareto":
            xm = p["min"]
            return np.where(x < xm, 0.0, 1.0 - (xm / np.maximum(x, xm)) ** p["exponent"])
        if f == "uniform":
            lo, hi = p["lo"], p["hi"]
            if hi == lo:
                return np.where(x >= lo, 1.0, 0.0)
            return np.clip((x - lo) / (hi - lo), 0.0, 1.0)
        if f == "bernoulli_two_point":
            a, b, pa = p["a"], p["b"], p["p_a"]
            return np.where(x >= a, pa, 0.0) + np.where(x >= b, 1 - pa, 0.0)
        return np.where(x >= p["v"], 1.0, 0.0)

    def cdf_left(self, x) -> np.ndarray:
        """P(tau < x)."""
        x = np.asarray(x, dtype=np.float64)
        return self.cdf(x) - self.atom(x)

    def sf(self, x) -> np.ndarray:
        """P(tau > x), computed directly for continuous families."""
        x = np.asarray(x, dtype=np.float64)
        p, f = self.p, self.family
        if f == "weibull_tail":
            return np.where(x <= 0, 1.0, np.exp(-(np.maximum(x, 0) / p["scale"]) ** p["r"]))
        if f == "exponential":
            return np.where(x <= 0, 1.0, np.exp(-p["rate"] * np.maximum(x, 0)))
        if f == "pareto":
            return np.where(x < p["min"], 1.0, (p["min"] / np.maximum(x, p["min"])) ** p["exponent"])
        return 1.0 - self.cdf(x)

    def atom(self, x) -> np.ndarray:
        """P(tau = x)."""
        x = np.asarray(x, dtype=np.float64)
        p, f = self.p, self.family
        if f == "bernoulli_two_point":
            a, b, pa = p["a"], p["b"], p["p_a"]
            return np.where(x == a, pa, 0.0) + np.where(x == b, 1 - pa, 0.0)
        if f == "constant":
            return np.where(x == p["v"], 1.0, 0.0)
        if f == "uniform" and p["lo"] == p["hi"]:
            return np.where(x == p["lo"], 1.0, 0.0)
        return np.zeros_like(x)

    @property
    def F_minus(self) -> float:
        """Infimum of the support."""
        p, f = self.p, self.family
        if f in ("weibull_tail", "exponential"):
            return 0.0
        if f == "pareto":
            return p["min"]
        if f == "uniform":
            return p["lo"]
        if f == "bernoulli_two_point":
            if p["p_a"] == 0:
                return p["b"]
            if p["p_a"] == 1:
                return p["a"]
            return min(p["a"], p["b"])
        return p["v"]

    @property
    def integer_valued(self) -> bool:
        p, f = self.p, self.family
        if f == "bernoulli_two_point":
            return float(p["a"]).is_integer() and float(p["b"]).is_integer()
        if f == "constant":
            return float(p["v"]).is_integer()
        if f == "uniform" and p["lo"] == p["hi"]:
            return float(p["lo"]).is_integer()
        return False

    @property
    def continuous(self) -> bool:
        return self.family in ("weibull_tail", "exponential", "pareto") or (
            self.family == "uniform" and self.p["hi"] > self.p["lo"]
        )

    def moment(self, m: float) -> float:
        """E[tau^m] (may be inf)."""
        p, f = self.p, self.family
        if f == "weibull_tail":
            return p["scale"] ** m * math.gamma(1 + m / p["r"])
        if f == "exponential":
            return math.gamma(1 + m) / p["rate"] ** m
        if f == "pareto":
            a = p["exponent"]
            return math.inf if m >= a else a * p["min"] ** m / (a - m)
        if f == "uniform":
            lo, hi = p["lo"], p["hi"]
            if hi == lo:
                return lo**m
            return (hi ** (m + 1) - lo ** (m + 1)) / ((m + 1) * (hi - lo))
        if f == "bernoulli_two_point":
            return p["p_a"] * p["a"] ** m + (1 - p["p_a"]) * p["b"] ** m
        return p["v"] ** m

    @property
    def mean(self) -> float:
        return self.moment(1)

    @property
    def var(self) -> float:
        m1 = self.moment(1)
        return self.moment(2) - m1 * m1

    def hypothesis_labels(self) -> list:
        """Which moment hypotheses this law satisfies (advisory only)."""
        labels = []
        if self.moment(2) < math.inf:
            labels.append("second_moment")
        if self.family != "pareto":
            labels.append("all_moments")
        if self.family in ("weibull_tail", "exponential", "uniform", "bernoulli_two_point", "constant"):
            labels.append("stretched_exp_tail")
        return labels

    def check_moments(self, need: str = "second_moment") -> bool:
        ok = need in self.hypothesis_labels()
        if not ok:
            warnings.warn(f"{self.family} does not satisfy the {need} hypothesis", stacklevel=2)
        return ok


def condition_probability_lower_bound(dist: DistributionSpec, t: float, gamma: float) -> float:
    """Exact P(t < tau < gamma*t) from the distribution functions."""
    if not t > 0:
        raise ValueError("t must be positive")
    if not gamma > 1:
        raise ValueError("gamma must exceed 1")
    return float(dist.cdf_left(gamma * t) - dist.cdf(t))


# ------------------------------------------------------------ usefulness

DEFAULT_CRITICAL = {
    "p_c": {2: 0.5, 3: 0.2488},
    "p_c_oriented": {2: 0.6447},
}


@dataclass(frozen=True)
class UsefulnessVerdict:
    verdict: str
    F_minus: float
    atom_at_F_minus: float
    threshold_used: float | None


def usefulness(dist: DistributionSpec, d: int, constants: Mapping | None = None) -> UsefulnessVerdict:
    if d < 2:
        raise ValueError("usefulness is defined for d >= 2")
    table = DEFAULT_CRITICAL if constants is None else constants
    fm = dist.F_minus
    atom = float(dist.atom(fm))
    key = "p_c" if fm == 0 else "p_c_oriented"
    entry = {int(k): v for k, v in (table.get(key) or {}).items()}
    if d not in entry:
        return UsefulnessVerdict("unknown", fm, atom, None)
    thr = float(entry[d])
    return UsefulnessVerdict("useful" if atom < thr else "not_useful", fm, atom, thr)


# ------------------------------------------------------------ edge sets


class EdgeSet:
    """Finite set of edges with vectorized membership.

    Edges are encoded as ``linear index of base inside the bounding box * d
    + axis``; queries outside the box are rejected without lookup.
    """

    def __init__(self, edges: Iterable, d: int | None = None, values=None):
        edges = list(edges)
        if values is not None:
            values = list(values)
        if edges and not isinstance(edges[0], EdgeId):
            edges = [canonical_edge(a, b) for a, b in edges]
        self.d = d if d is not None else (edges[0].d if edges else 0)
        self.n = len(edges)
        if not edges:
            self._keys = np.zeros(0, dtype=np.int64)
            self._vals = np.zeros(0)
            self._lo = None
            self._edges = frozenset()
            return
        bases = np.array([e.base for e in edges], dtype=np.int64)
        axes = np.array([e.axis for e in edges], dtype=np.int64)
        self._lo = bases.min(axis=0)
        self._shape = bases.max(axis=0) - self._lo + 1
        keys = self._encode(bases, axes)
        order = np.argsort(keys, kind="stable")
        keys = keys[order]
        vals = np.asarray(values, dtype=np.float64)[order] if values is not None else np.zeros(len(keys))
        # keep the last value for duplicate edges
        last = np.ones(len(keys), dtype=bool)
        last[:-1] = keys[1:] != keys[:-1]
        self._keys = keys[last]
        self._vals = vals[last]
        self.n = len(self._keys)
        self._edges = frozenset(edges)

    def _encode(self, bases, axes):
        rel = bases - self._lo
        key = np.zeros(len(bases), dtype=np.int64)
        for i in range(self.d):
            key = key * self._shape[i] + rel[:, i]
        return key * self.d + axes

    def lookup(self, bases, axes):
        """Return (mask, values) for a batch of canonical edges."""
        bases = np.asarray(bases, dtype=np.int64)
        axes = np.asarray(axes, dtype=np.int64)
        m = len(bases)
        if self._lo is None or m == 0:
            return np.zeros(m, dtype=bool), np.zeros(m)
        rel = bases - self._lo
        inside = np.all((rel >= 0) & (rel < self._shape), axis=1)
        mask = np.zeros(m, dtype=bool)
        vals = np.zeros(m)
        if inside.any():
            keys = self._encode(bases[inside], axes[inside])
            pos = np.searchsorted(self._keys, keys)
            pos = np.minimum(pos, len(self._keys) - 1)
            hit = self._keys[pos] == keys
            idx = np.flatnonzero(inside)
            mask[idx[hit]] = True
            vals[idx[hit]] = self._vals[pos[hit]]
        return mask, vals

    def __contains__(self, e) -> bool:
        return e in self._edges

    def __len__(self):
        return self.n

    def __iter__(self):
        return iter(sorted(self._edges))


# ------------------------------------------------------------ configs


@dataclass(frozen=True)
class _Resample:
    edges: EdgeSet
    sub_seed: int
    key: int


@dataclass(frozen=True)
class _Override:
    edges: EdgeSet
    values: tuple


@dataclass(frozen=True)
class _Tilde:
    threshold: float


def _layer_rank(layer) -> int:
    return 0 if isinstance(layer, _Resample) else (1 if isinstance(layer, _Override) else 2)


@dataclass(frozen=True, eq=False)
class WeightConfig:
    """Reproducible i.i.d. environment plus an ordered stack of modifications.

    Layers apply on top of the base draw: resample layers redraw the weights
    of their edges from independent streams, then override layers set fixed
    values (so overrides always win), then tilde layers add one to every
    weight at or above their threshold.  Within a kind, later layers win.
    """

    dist: DistributionSpec
    master_seed: int = 0
    layers: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "master_seed", int(self.master_seed) & _MASK)

    @property
    def overrides(self) -> dict:
        out = {}
        for layer in self.layers:
            if isinstance(layer, _Override):
                out.update(layer.values)
        return out

    @property
    def resample_regions(self) -> list:
        return [(layer.edges, layer.sub_seed) for layer in self.layers if isinstance(layer, _Resample)]

    @property
    def integer_valued(self) -> bool:
        if not self.dist.integer_valued:
            return False
        for layer in self.layers:
            if isinstance(layer, _Override) and not np.all(np.mod(layer.edges._vals, 1) == 0):
                return False
        return True

    def with_overrides(self, mapping) -> "WeightConfig":
        items = list(mapping.items()) if isinstance(mapping, Mapping) else list(mapping)
        edges = [e if isinstance(e, EdgeId) else canonical_edge(*e) for e, _ in items]
        vals = [float(v) for _, v in items]
        if any(v < 0 or not math.isfinite(v) for v in vals):
            raise ValueError("override weights must be finite and nonnegative")
        d = edges[0].d if edges else None
        return WeightConfig(self.dist, self.master_seed, self.layers + (_Override(EdgeSet(edges, d, vals), tuple(zip(edges, vals))),))

    def edge_weights(self, bases: np.ndarray, axes: np.ndarray) -> np.ndarray:
        """Vectorized weights of canonical edges ``(base, axis)``."""
        bases = np.asarray(bases, dtype=np.int64)
        axes = np.asarray(axes, dtype=np.int64)
        w = self.dist.ppf_upper(uniforms(self.master_seed, bases, axes))
        for layer in sorted(self.layers, key=_layer_rank):
            if isinstance(layer, _Resample):
                mask, _ = layer.edges.lookup(bases, axes)
                if mask.any():
                    w[mask] = self.dist.ppf_upper(uniforms(layer.key, bases[mask], axes[mask]))
            elif isinstance(layer, _Override):
                mask, vals = layer.edges.lookup(bases, axes)
                w[mask] = vals[mask]
            else:
                w = w + (w >= layer.threshold)
        return w


def weight(cfg: WeightConfig, e: EdgeId) -> float:
    return float(cfg.edge_weights(np.array([e.base]), np.array([e.axis]))[0])


def perturb_tilde(cfg: WeightConfig, threshold: float) -> WeightConfig:
    """Add one to every weight at or above ``threshold``."""
    if threshold < 0:
        raise ValueError("threshold must be nonnegative")
    return WeightConfig(cfg.dist, cfg.master_seed, cfg.layers + (_Tilde(float(threshold)),))


def resample_region(cfg: WeightConfig, edges, sub_seed: int) -> WeightConfig:
    """Fresh independent weights on ``edges``, keyed by ``sub_seed``; other edges unchanged."""
    es = edges if isinstance(edges, EdgeSet) else EdgeSet(edges)
    key = cfg.master_seed ^ mix64(0x5EED, sub_seed)
    return WeightConfig(cfg.dist, cfg.master_seed, cfg.layers + (_Resample(es, int(sub_seed), key),))
