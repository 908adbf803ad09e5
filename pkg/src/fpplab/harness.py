"""Monte Carlo experiments: scaling of the heaviest geodesic edge, i.i.d. and
box-restricted tails, event frequencies, variance growth.

Every replica derives its own seed from (master seed, N, replica index), so
results do not depend on the number of workers or on scheduling.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .boxes import (
    AParams,
    BlackParams,
    build_box_frame,
    build_skeleton,
    check_A_condition,
    is_black,
    resample_edges,
)
from .goodness import GoodnessParams, is_good_edge
from .lattice import Box, EdgeId
from .order import f as order_f
from .passage import box_geodesic_dag, geodesic_dag, max_weight_stats, passage_time
from .stats import cochran_armitage, linfit, median_ci, variance_se, wilson, wls_slope
from .weights import DistributionSpec, WeightConfig, mix64, resample_region

KINDS = ("scaling", "ldp-iid", "ldp-restricted", "event-prob", "concentration", "xi-verify", "simulate")

SCALING_HEADER = [
    "N",
    "f",
    "samples",
    "maxM_min",
    "maxM_med",
    "maxM_max",
    "minM_min",
    "minM_med",
    "minM_max",
    "ratio_maxM_med",
    "ratio_minM_med",
    "envelope_limited",
]


class ConfigError(ValueError):
    pass


class ResourceCapError(RuntimeError):
    pass


def default_r(dist: DistributionSpec) -> float:
    """Tail exponent used to pick the growth order for a family."""
    if dist.family == "weibull_tail":
        return dist.p["r"]
    if dist.family == "pareto":
        return 0.0
    return 1.0


@dataclass
class ExperimentConfig:
    kind: str
    d: int = 2
    dist: DistributionSpec = field(default_factory=DistributionSpec.exponential)
    N: list = field(default_factory=lambda: [64, 128])
    samples: int = 10
    seed: int = 0
    K: float = 2.0
    envelope_exponent: float = 2.0 / 3.0
    workers: int = 1
    out: str | None = None
    r: float | None = None
    mode: str = "point"
    bound: str = "upper"
    eta: float = 0.1
    max_vertices: int = 5_000_000
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError(f"unknown experiment kind {self.kind!r}")
        if isinstance(self.dist, dict):
            try:
                self.dist = DistributionSpec.from_json(self.dist)
            except (KeyError, ValueError, TypeError) as exc:
                raise ConfigError(f"bad distribution: {exc}")
        if self.samples < 1:
            raise ConfigError("samples must be at least 1")
        if self.d < 1:
            raise ConfigError("d must be at least 1")
        self.N = sorted(int(n) for n in self.N)
        if self.kind in ("scaling", "concentration", "simulate", "event-prob") and any(n < 16 for n in self.N):
            raise ConfigError("N values must be at least 16")
        if self.mode not in ("point", "box"):
            raise ConfigError("mode must be 'point' or 'box'")
        if self.workers < 1:
            raise ConfigError("workers must be at least 1")

    @property
    def tail_r(self) -> float:
        return self.r if self.r is not None else default_r(self.dist)

    def echo(self) -> dict:
        """Config for provenance; execution-only fields are left out so that
        outputs do not depend on them."""
        out = asdict(self)
        out["dist"] = self.dist.to_json()
        out.pop("workers")
        out.pop("out")
        return out

    @classmethod
    def from_dict(cls, obj: dict) -> "ExperimentConfig":
        known = set(cls.__dataclass_fields__)
        extra = {k: v for k, v in obj.items() if k not in known}
        base = {k: v for k, v in obj.items() if k in known}
        params = dict(base.pop("params", {}) or {})
        params.update(extra)
        try:
            return cls(params=params, **base)
        except TypeError as exc:
            raise ConfigError(str(exc))


def replica_seed(master: int, N: int, i: int) -> int:
    return mix64(master, N, i)


def _pmap(fn, items, workers: int) -> list:
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    chunk = max(1, len(items) // (4 * workers))
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items, chunksize=chunk))


# ------------------------------------------------------------ scaling


def point_envelope(d: int, N: int, K: float, exponent: float) -> Box:
    """Bounding box of 0 and N e_1 widened by ceil(K N^exponent)."""
    m = int(math.ceil(K * N**exponent))
    return Box((-m,) + (-m,) * (d - 1), (N + m,) + (m,) * (d - 1))


def box_radius(N: int, bound: str, eta: float) -> int:
    lg = math.log(N)
    return int(math.floor(lg if bound == "upper" else lg ** (1 + eta)))


def _scaling_task(args):
    dist_json, d, N, seed, K, expo, mode, bound, eta = args
    cfg = WeightConfig(DistributionSpec.from_json(dist_json), seed)
    env = point_envelope(d, N, K, expo)
    if mode == "point":
        dag = geodesic_dag(cfg, (0,) * d, (N,) + (0,) * (d - 1), env)
        bb = env
        pts = dag.points
        limited = bool(np.any((pts == np.array(bb.lo)) | (pts == np.array(bb.hi))))
    else:
        L = box_radius(N, bound, eta)
        D0 = Box.cube((0,) * d, L)
        D1 = Box.cube((N,) + (0,) * (d - 1), L)
        env = Box(tuple(a - L for a in env.lo), tuple(b + L for b in env.hi))
        dag = box_geodesic_dag(cfg, D0, D1, env)
        limited = dag.envelope_limited
    st = max_weight_stats(dag)
    return st.max_over_geodesics, st.min_over_geodesics, limited, dag.time


def _check_size(cfg: ExperimentConfig, box: Box):
    if box.size > cfg.max_vertices:
        raise ResourceCapError(f"envelope has {box.size} vertices, cap is {cfg.max_vertices}")


def run_scaling(cfg: ExperimentConfig) -> dict:
    r = cfg.tail_r
    rows, raw = [], {}
    if cfg.mode == "box" and cfg.N[0] < 3:
        raise ConfigError("N too small")
    for N in cfg.N:
        _check_size(cfg, point_envelope(cfg.d, N, cfg.K, cfg.envelope_exponent))
    for N in cfg.N:
        tasks = [
            (cfg.dist.to_json(), cfg.d, N, replica_seed(cfg.seed, N, i), cfg.K, cfg.envelope_exponent, cfg.mode, cfg.bound, cfg.eta)
            for i in range(cfg.samples)
        ]
        res = _pmap(_scaling_task, tasks, cfg.workers)
        mx = np.array([x[0] for x in res])
        mn = np.array([x[1] for x in res])
        lim = np.array([x[2] for x in res])
        use_mx, use_mn = mx[~lim], mn[~lim]
        fv = order_f(cfg.d, r, N)
        row = {"N": N, "f": fv, "samples": int((~lim).sum()), "envelope_limited": int(lim.sum())}
        for name, arr in (("maxM", use_mx), ("minM", use_mn)):
            if len(arr):
                row[f"{name}_min"] = float(arr.min())
                row[f"{name}_med"] = float(np.median(arr))
                row[f"{name}_max"] = float(arr.max())
            else:
                row[f"{name}_min"] = row[f"{name}_med"] = row[f"{name}_max"] = math.nan
        row["ratio_maxM_med"] = row["maxM_med"] / fv
        row["ratio_minM_med"] = row["minM_med"] / fv
        rows.append(row)
        raw[N] = {
            "maxM_med_ci": median_ci(use_mx),
            "minM_med_ci": median_ci(use_mn),
        }
    loglog = [math.log(math.log(r_["N"])) for r_ in rows]
    fit = {}
    for name in ("maxM", "minM"):
        med = [r_[f"{name}_med"] for r_ in rows]
        if all(m > 0 and math.isfinite(m) for m in med):
            fit[name] = linfit(loglog, [math.log(m) for m in med])
        else:
            fit[name] = None
    extra = [{"N": N, **{k: list(v) for k, v in raw[N].items()}} for N in cfg.N]
    return {
        "kind": "scaling",
        "header": SCALING_HEADER,
        "rows": rows,
        "fit": fit,
        "fit_note": "least-squares slope of log(median) against log(log N)",
        "median_ci": extra,
        "order": {"d": cfg.d, "r": r},
    }


# ------------------------------------------------------------ i.i.d. tails

IID_HEADER = ["L", "t", "samples", "method", "exceedances", "prob", "ci_lo", "ci_hi", "rate_ref"]


def _weibull_loglr(x, r, scale, sigma):
    """log of (target density / scaled-proposal density) per sample."""
    z = x / scale
    return r * math.log(sigma) - z**r + (z / sigma) ** r


def iid_tail_cell(dist: DistributionSpec, L: int, t: float, samples: int, seed: int, method: str = "auto") -> dict:
    """Estimate P(X_1 + ... + X_L >= L t).

    Plain Monte Carlo (Wilson interval) when enough exceedances are seen.
    Otherwise, for weibull_tail and exponential laws, importance sampling
    from the same family rescaled so its mean equals t, with exact
    likelihood ratios and a normal-approximation interval.
    """
    rng = np.random.default_rng(mix64(seed, L, int(round(t * 1e6)), 0xA11))
    result = None
    if method in ("auto", "mc"):
        x = dist.sample(rng, (samples, L)).sum(axis=1)
        k = int(np.count_nonzero(x >= L * t))
        lo, hi = wilson(k, samples)
        result = {"method": "mc", "exceedances": k, "prob": k / samples, "ci_lo": lo, "ci_hi": hi}
        if method == "mc" or k >= 30:
            return result
    fam = dist.family
    if fam not in ("weibull_tail", "exponential"):
        return result
    r = dist.p["r"] if fam == "weibull_tail" else 1.0
    scale = dist.p["scale"] if fam == "weibull_tail" else 1.0 / dist.p["rate"]
    sigma = max(1.0, t / dist.mean)
    rng = np.random.default_rng(mix64(seed, L, int(round(t * 1e6)), 0x15))
    u = rng.random((samples, L))
    u = np.where(u == 0.0, 2.0**-54, u)
    x = sigma * scale * (-np.log(u)) ** (1.0 / r)
    llr = _weibull_loglr(x, r, scale, sigma).sum(axis=1)
    hit = x.sum(axis=1) >= L * t
    w = np.where(hit, np.exp(llr), 0.0)
    p = float(w.mean())
    se = float(w.std(ddof=1) / math.sqrt(samples))
    k = int(hit.sum())
    return {
        "method": "importance",
        "exceedances": k,
        "prob": p,
        "ci_lo": max(0.0, p - 1.959963984540054 * se),
        "ci_hi": p + 1.959963984540054 * se,
        "rel_se": se / p if p > 0 else math.inf,
    }


def run_iid_tail(dist: DistributionSpec, L_list, t_list, samples: int, seed: int = 0, method: str = "auto") -> dict:
    if dist.family == "weibull_tail":
        r = dist.p["r"]
    elif dist.family == "exponential":
        r = 1.0
    else:
        r = default_r(dist)
    rows = []
    for L in L_list:
        for t in t_list:
            cell = iid_tail_cell(dist, int(L), float(t), samples, seed, method)
            rows.append({"L": int(L), "t": float(t), "samples": samples, "rate_ref": float(t) ** r * L, **cell})
    xs, ys = [], []
    for row in rows:
        if row["prob"] > 0 and row["t"] > dist.mean:
            xs.append(row["rate_ref"])
            ys.append(-math.log(row["prob"]))
    fit = linfit(xs, ys) if len(xs) >= 2 else None
    zero = [row for row in rows if row["exceedances"] == 0]
    return {
        "kind": "ldp-iid",
        "header": IID_HEADER,
        "rows": rows,
        "fit": fit,
        "fit_note": "least-squares line of -log(prob) against t^r L",
        "zero_exceedance_cells": len(zero),
    }


# ------------------------------------------------------------ restricted LDP

RESTRICTED_HEADER = ["L", "k1", "M2", "samples", "exceedances", "prob", "ci_lo", "ci_hi", "g"]


def _restricted_task(args):
    dist_json, d, k1, seed = args
    cfg = WeightConfig(DistributionSpec.from_json(dist_json), seed)
    if k1 == 0:
        return 0.0
    box = Box((0,) * d, (k1,) * d)
    return passage_time(cfg, (0,) * d, (k1,) * d, box).time


def run_restricted_ldp(
    d: int, dist: DistributionSpec, L_list, k1_list, M2_list, samples: int, seed: int = 0,
    workers: int = 1, max_vertices: int = 5_000_000, r: float | None = None,
) -> dict:
    """P(t_{[0,k1]^d}(0, k1 (1,...,1)) > M2 L), sharing replicas across M2."""
    from .order import OrderError, g as order_g

    r = r if r is not None else default_r(dist)
    rows = []
    for L in L_list:
        for k1 in k1_list if not callable(k1_list) else k1_list(L):
            k1 = int(k1)
            if not 0 <= k1 <= 2 * L + 1:
                raise ConfigError("need 0 <= k1 <= 2L + 1")
            if (k1 + 1) ** d > max_vertices:
                raise ResourceCapError(f"box [0,{k1}]^{d} exceeds the vertex cap")
            tasks = [(dist.to_json(), d, k1, mix64(seed, L, k1, i)) for i in range(samples)]
            times = np.array(_pmap(_restricted_task, tasks, workers))
            try:
                gv = order_g(r, d, L, max(k1, 1))
            except OrderError:
                gv = math.nan
            for M2 in M2_list:
                k = int(np.count_nonzero(times > M2 * L))
                lo, hi = wilson(k, samples)
                rows.append({"L": int(L), "k1": k1, "M2": float(M2), "samples": samples, "exceedances": k,
                             "prob": k / samples, "ci_lo": lo, "ci_hi": hi, "g": gv,
                             "mean_time_over_L": float(times.mean() / L)})
    return {"kind": "ldp-restricted", "header": RESTRICTED_HEADER, "rows": rows}


# ------------------------------------------------------------ event frequencies

EVENT_HEADER = ["N", "n", "n1", "trials", "hits", "freq", "ci_lo", "ci_hi"]


def _event_task(args):
    event, dist_json, d, N, seed, p = args
    dist = DistributionSpec.from_json(dist_json)
    cfg = WeightConfig(dist, seed)
    if event == "good_edge":
        gp = GoodnessParams(M=p["M"], N=N, r=p.get("r", 1.0), variant=p.get("variant", "subexp"))
        e = EdgeId((0,) * d, 0)
        return bool(is_good_edge(cfg, e, gp)[0])
    n, n1 = p["n"], p["n1"]
    frame = build_box_frame((0,) * d, n, 1)
    if event in ("black_box_v1", "black_box_v2"):
        variant = "v1" if event == "black_box_v1" else "v2"
        skel = build_skeleton(frame, n1, variant, N)
        bp = BlackParams(M=p["M"], N=N, delta7=p.get("delta7"), variant=variant, r=p.get("r", 1.0))
        return bool(is_black(cfg, frame, bp, skel=skel))
    variant = p.get("variant", "A1")
    skel = build_skeleton(frame, n1, "v1" if variant == "A1" else "v2", N)
    star = resample_region(cfg, resample_edges(skel), mix64(seed, 0x57A2))
    ap = AParams(c=p["c"], gamma=p["gamma"], M=p.get("M", 1.0), N=N, r=p.get("r", 1.0), variant=variant,
                 delta7=p.get("delta7"))
    return bool(check_A_condition(star, skel, ap))


def event_scales(event: str, N: int, p: dict, d: int, r: float) -> tuple:
    """(n, n1) for box events: either fixed by 'n' or derived from f_{d,r}(N)."""
    if event == "good_edge":
        return (None, None)
    s = p.get("s", 0.25)
    if "n" in p and not isinstance(p["n"], (list, dict)):
        n = int(p["n"])
    elif "n_by_N" in p:
        n = int(p["n_by_N"][str(N)] if str(N) in p["n_by_N"] else p["n_by_N"][N])
    else:
        n = max(2, int(math.floor(p.get("n_scale", 1.0) * order_f(d, r, N))))
    if event in ("black_box_v2",) or (event == "A_condition" and p.get("variant", "A1") != "A1"):
        n1 = max(2, 2 * int(math.floor(s * n / 2)))
    else:
        n1 = max(1, int(math.floor(s * n)))
    return n, n1


def run_event_probability(event: str, params: dict, N_list, samples: int, dist: DistributionSpec,
                          d: int = 2, seed: int = 0, workers: int = 1, direction: str | None = None) -> dict:
    """Frequency of an event per N with Wilson intervals and a one-sided trend test.

    For box events the scale n may be given per point via params['n_list']
    (one entry per N value, used as the trend variable).
    """
    events = ("good_edge", "black_box_v1", "black_box_v2", "A_condition")
    if event not in events:
        raise ConfigError(f"event must be one of {events}")
    r = params.get("r", default_r(dist))
    rows = []
    n_list = params.get("n_list")
    for pos, N in enumerate(N_list):
        p = dict(params)
        if n_list is not None:
            p["n"] = int(n_list[pos])
        n, n1 = event_scales(event, N, p, d, r)
        p.update({"n": n, "n1": n1, "r": r})
        p.pop("n_list", None)
        tasks = [(event, dist.to_json(), d, int(N), mix64(seed, N, n or 0, i), p) for i in range(samples)]
        hits = int(sum(_pmap(_event_task, tasks, workers)))
        lo, hi = wilson(hits, samples)
        rows.append({"N": int(N), "n": n, "n1": n1, "trials": samples, "hits": hits, "freq": hits / samples,
                     "ci_lo": lo, "ci_hi": hi})
    if direction is None:
        direction = "increasing"
    trend = cochran_armitage([r_["hits"] for r_ in rows], [r_["trials"] for r_ in rows],
                             alternative=direction) if len(rows) >= 2 else None
    return {"kind": "event-prob", "event": event, "header": EVENT_HEADER, "rows": rows, "trend": trend,
            "trend_note": f"one-sided Cochran-Armitage test for an {direction} frequency of the event"}


# ------------------------------------------------------------ concentration

CONC_HEADER = ["N", "samples", "mean", "variance", "variance_se", "var_over_N", "var_over_N_se", "envelope_limited"]


def _conc_task(args):
    dist_json, d, N, seed, K, expo = args
    cfg = WeightConfig(DistributionSpec.from_json(dist_json), seed)
    env = point_envelope(d, N, K, expo)
    return passage_time(cfg, (0,) * d, (N,) + (0,) * (d - 1), env).time


def run_concentration(cfg: ExperimentConfig) -> dict:
    rows = []
    for N in cfg.N:
        _check_size(cfg, point_envelope(cfg.d, N, cfg.K, cfg.envelope_exponent))
    for N in cfg.N:
        tasks = [(cfg.dist.to_json(), cfg.d, N, replica_seed(cfg.seed, N, i), cfg.K, cfg.envelope_exponent)
                 for i in range(cfg.samples)]
        t = np.array(_pmap(_conc_task, tasks, cfg.workers))
        if len(t) >= 2:
            var = float(t.var(ddof=1))
            se = variance_se(t)
        else:
            var = se = None
        rows.append({
            "N": N,
            "samples": len(t),
            "mean": float(t.mean()),
            "variance": var,
            "variance_se": se,
            "var_over_N": var / N if var is not None else None,
            "var_over_N_se": se / N if se is not None and math.isfinite(se) else None,
            "envelope_limited": 0,
        })
    fit = None
    usable = [r_ for r_ in rows if r_["var_over_N"] is not None and r_["var_over_N_se"]]
    if len(usable) >= 2:
        fit = wls_slope([math.log(r_["N"]) for r_ in usable], [r_["var_over_N"] for r_ in usable],
                        [r_["var_over_N_se"] for r_ in usable])
        fit["ci"] = list(fit["ci"])
    return {"kind": "concentration", "header": CONC_HEADER, "rows": rows, "fit": fit,
            "fit_note": "weighted least-squares slope of variance/N against log N (95% interval)"}


# ------------------------------------------------------------ single runs and Xi

SIMULATE_HEADER = ["N", "replica", "time", "maxM", "minM", "dag_edges", "envelope_limited"]


def _simulate_task(args):
    dist_json, d, N, seed, K, expo, replica = args
    cfg = WeightConfig(DistributionSpec.from_json(dist_json), seed)
    env = point_envelope(d, N, K, expo)
    dag = geodesic_dag(cfg, (0,) * d, (N,) + (0,) * (d - 1), env)
    st = max_weight_stats(dag)
    limited = bool(np.any((dag.points == np.array(env.lo)) | (dag.points == np.array(env.hi))))
    return {"N": N, "replica": replica, "time": dag.time, "maxM": st.max_over_geodesics,
            "minM": st.min_over_geodesics, "dag_edges": int(len(dag.tail)), "envelope_limited": limited}


def run_simulate(cfg: ExperimentConfig) -> dict:
    """Per-replica passage time and geodesic weight extremes, no aggregation."""
    for N in cfg.N:
        _check_size(cfg, point_envelope(cfg.d, N, cfg.K, cfg.envelope_exponent))
    tasks = [(cfg.dist.to_json(), cfg.d, N, replica_seed(cfg.seed, N, i), cfg.K, cfg.envelope_exponent, i)
             for N in cfg.N for i in range(cfg.samples)]
    rows = _pmap(_simulate_task, tasks, cfg.workers)
    return {"kind": "simulate", "header": SIMULATE_HEADER, "rows": rows}


XI_HEADER = ["d", "m", "n", "degenerate", "xi1", "xi2", "xi3", "xi4"]


def _xi_task(args):
    from .xi import build_xi, verify_conditions

    d, m = args
    return verify_conditions(build_xi(d, m))


def run_xi_verify(d_list, m_list, workers: int = 1) -> dict:
    pairs = [(int(d), int(m)) for d in d_list for m in m_list]
    reports = _pmap(_xi_task, pairs, workers)
    rows = [{**{k: rep[k] for k in ("d", "m", "n", "degenerate")}, **rep["conditions"]} for rep in reports]
    return {"kind": "xi-verify", "header": XI_HEADER, "rows": rows, "reports": reports}


def _need(p: dict, *keys):
    missing = [k for k in keys if k not in p]
    if missing:
        raise ConfigError(f"missing parameter(s): {', '.join(missing)}")


def run_experiment(cfg: ExperimentConfig) -> dict:
    """Dispatch on cfg.kind; extra per-kind settings live in cfg.params."""
    p = cfg.params
    if cfg.kind == "scaling":
        return run_scaling(cfg)
    if cfg.kind == "concentration":
        return run_concentration(cfg)
    if cfg.kind == "simulate":
        return run_simulate(cfg)
    if cfg.kind == "ldp-iid":
        _need(p, "L", "t")
        return run_iid_tail(cfg.dist, p["L"], p["t"], cfg.samples, cfg.seed, p.get("method", "auto"))
    if cfg.kind == "ldp-restricted":
        _need(p, "L", "M2")
        k1 = p.get("k1")
        L = p["L"]
        if k1 is None:
            k1 = lambda L_: [L_]
        return run_restricted_ldp(cfg.d, cfg.dist, L, k1, p["M2"], cfg.samples, cfg.seed, cfg.workers,
                                  cfg.max_vertices, cfg.r)
    if cfg.kind == "event-prob":
        _need(p, "event")
        ep = {k: v for k, v in p.items() if k not in ("event", "direction")}
        return run_event_probability(p["event"], ep, cfg.N, cfg.samples, cfg.dist, cfg.d, cfg.seed,
                                     cfg.workers, p.get("direction"))
    if cfg.kind == "xi-verify":
        d_list = p.get("d_list", [cfg.d])
        if "m_list" not in p and "m" not in p:
            raise ConfigError("missing parameter(s): m_list")
        m_list = p.get("m_list", [p.get("m")])
        return run_xi_verify(d_list, m_list, cfg.workers)
    raise ConfigError(f"unknown experiment kind {cfg.kind!r}")


# ------------------------------------------------------------ output


def _fmt(x):
    if x is None:
        return ""
    if isinstance(x, bool):
        return str(int(x))
    if isinstance(x, float):
        return repr(x)
    return str(x)


def to_csv(report: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    header = report["header"]
    w.writerow(header)
    for row in report["rows"]:
        w.writerow([_fmt(row.get(h)) for h in header])
    return buf.getvalue()


def _clean(obj):
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else str(obj)
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.generic):
        return _clean(obj.item())
    return obj


def to_json(report: dict, config: dict | None = None) -> str:
    payload = dict(report)
    if config is not None:
        payload["config"] = config
    return json.dumps(_clean(payload), sort_keys=True, indent=2) + "\n"


def write_outputs(report: dict, out: str, config: dict | None = None) -> tuple:
    csv_path, json_path = f"{out}.csv", f"{out}.json"
    with open(csv_path, "w", newline="") as fh:
        fh.write(to_csv(report))
    with open(json_path, "w") as fh:
        fh.write(to_json(report, config))
    return csv_path, json_path
