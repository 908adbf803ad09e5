"""Small statistics helpers: intervals, trend tests, fits."""

from __future__ import annotations

import math

import numpy as np
from scipy import stats as sps

Z95 = 1.959963984540054


def wilson(k: int, n: int, z: float = Z95) -> tuple:
    """Wilson score interval for a binomial proportion."""
    if n <= 0:
        return (0.0, 1.0)
    p = k / n
    den = 1 + z * z / n
    centre = (p + z * z / (2 * n)) / den
    half = z * math.sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / den
    lo = 0.0 if k == 0 else max(0.0, centre - half)
    hi = 1.0 if k == n else min(1.0, centre + half)
    return (lo, hi)


def median_ci(x, conf: float = 0.95) -> tuple:
    """Distribution-free interval for the median from order statistics."""
    x = np.sort(np.asarray(x, dtype=float))
    n = len(x)
    if n == 0:
        return (math.nan, math.nan)
    lo_rank = int(sps.binom.ppf((1 - conf) / 2, n, 0.5))
    hi_rank = int(sps.binom.isf((1 - conf) / 2, n, 0.5))
    lo_rank = min(max(lo_rank - 1, 0), n - 1)
    hi_rank = min(max(hi_rank, 0), n - 1)
    return (float(x[lo_rank]), float(x[hi_rank]))


def cochran_armitage(successes, totals, scores=None, alternative: str = "increasing") -> dict:
    """Cochran-Armitage test for a monotone trend in binomial proportions.

    ``alternative`` is 'increasing' or 'decreasing' (one-sided).
    """
    k = np.asarray(successes, dtype=float)
    n = np.asarray(totals, dtype=float)
    s = np.arange(len(k), dtype=float) if scores is None else np.asarray(scores, dtype=float)
    N = n.sum()
    pbar = k.sum() / N
    T = np.sum(s * (k - n * pbar))
    var = pbar * (1 - pbar) * (np.sum(n * s * s) - np.sum(n * s) ** 2 / N)
    if var <= 0:
        return {"statistic": 0.0, "p_value": 1.0, "alternative": alternative}
    z = T / math.sqrt(var)
    p = sps.norm.sf(z) if alternative == "increasing" else sps.norm.cdf(z)
    return {"statistic": float(z), "p_value": float(p), "alternative": alternative}


def linfit(x, y) -> dict:
    """Ordinary least squares with slope/intercept standard errors and R^2."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if len(x) < 3:
        res = sps.linregress(x, y) if len(x) == 2 else None
        return {
            "slope": float(res.slope) if res else math.nan,
            "intercept": float(res.intercept) if res else math.nan,
            "slope_se": math.nan,
            "intercept_se": math.nan,
            "r2": math.nan,
            "n": int(len(x)),
        }
    res = sps.linregress(x, y)
    return {
        "slope": float(res.slope),
        "intercept": float(res.intercept),
        "slope_se": float(res.stderr),
        "intercept_se": float(res.intercept_stderr),
        "r2": float(res.rvalue**2),
        "n": int(len(x)),
    }


def wls_slope(x, y, se) -> dict:
    """Weighted least-squares line with known per-point standard errors."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    w = 1.0 / np.asarray(se, dtype=float) ** 2
    xm = np.sum(w * x) / np.sum(w)
    ym = np.sum(w * y) / np.sum(w)
    sxx = np.sum(w * (x - xm) ** 2)
    slope = np.sum(w * (x - xm) * (y - ym)) / sxx
    slope_se = math.sqrt(1.0 / sxx)
    return {
        "slope": float(slope),
        "intercept": float(ym - slope * xm),
        "slope_se": slope_se,
        "ci": (float(slope - Z95 * slope_se), float(slope + Z95 * slope_se)),
    }


def variance_se(x) -> float:
    """Standard error of the unbiased sample variance (moment formula)."""
    x = np.asarray(x, dtype=float)
    n = len(x)
    if n < 4:
        return math.nan
    c = x - x.mean()
    m2 = np.mean(c**2)
    m4 = np.mean(c**4)
    s2 = m2 * n / (n - 1)
    v = (m4 - s2 * s2 * (n - 3) / (n - 1)) / n
    return math.sqrt(max(v, 0.0))
