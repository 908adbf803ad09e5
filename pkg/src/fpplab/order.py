"""Growth order f_{d,r}(N) of the maximal geodesic edge weight, and the
restricted-passage LDP exponent g(r, d, L, k1).  Natural logarithms throughout."""

from __future__ import annotations

import math
from dataclasses import dataclass

REGIMES = ("r=0", "0<r<d-1", "r=d-1", "d-1<r<d", "r=d", "r>d")
LDP_CASES = ("1<r<d", "r=d", "d<r<d+1", "r=d+1")

N_MIN = 16


class OrderError(ValueError):
    pass


def regime(d: int, r: float) -> str:
    if d < 2:
        raise OrderError("d must be at least 2")
    if r < 0:
        raise OrderError("r must be nonnegative")
    if r == 0:
        return "r=0"
    if r < d - 1:
        return "0<r<d-1"
    if r == d - 1:
        return "r=d-1"
    if r < d:
        return "d-1<r<d"
    if r == d:
        return "r=d"
    return "r>d"


@dataclass(frozen=True)
class OrderSpec:
    d: int
    r: float
    regime: str

    @classmethod
    def of(cls, d: int, r: float) -> "OrderSpec":
        return cls(d, r, regime(d, r))

    def __call__(self, N) -> float:
        return f(self.d, self.r, N)


def f(d: int, r: float, N) -> float:
    """Predicted order of max over geodesics of the heaviest edge on 0 -> N e_1."""
    tag = regime(d, r)
    if N < 3:
        raise OrderError("N must be at least 3")
    if N < N_MIN:
        raise OrderError(f"N must be at least {N_MIN} so that log log N > 0")
    lg = math.log(N)
    llg = math.log(lg)
    if tag == "r=0":
        return lg / llg
    if tag == "0<r<d-1":
        return lg ** (1.0 / (1.0 + r))
    if tag == "r=d-1":
        return lg ** (1.0 / d) * llg ** ((d - 2.0) / d)
    if tag == "d-1<r<d":
        return lg ** (1.0 / d)
    if tag == "r=d":
        return lg ** (1.0 / d) * llg ** (-1.0 / d)
    return lg ** (1.0 / r)


def ldp_case(r: float, d: int) -> str:
    if d < 1:
        raise OrderError("d must be at least 1")
    if r <= 1:
        raise OrderError("out of proposition range: need r > 1")
    if r < d:
        return "1<r<d"
    if r == d:
        return "r=d"
    if r < d + 1:
        return "d<r<d+1"
    if r == d + 1:
        return "r=d+1"
    raise OrderError("out of proposition range: r > d + 1")


@dataclass(frozen=True)
class LdpExponentSpec:
    r: float
    d: int
    case: str

    @classmethod
    def of(cls, r: float, d: int) -> "LdpExponentSpec":
        return cls(r, d, ldp_case(r, d))


def g(r: float, d: int, L: float, k1: float = 1.0) -> float:
    """Exponent in the tail bound for box-restricted passage times."""
    case = ldp_case(r, d)
    if case == "1<r<d":
        return L**r
    if case == "r=d":
        if L < 2:
            raise OrderError("the r=d branch needs L >= 2")
        return L**d / math.log(L) ** (d - 1)
    if case == "d<r<d+1":
        return float(L) ** d
    if k1 < 1:
        raise OrderError("k1 must be at least 1")
    return L ** (d + 1) / k1
