import math

import numpy as np
import pytest

from fpplab.order import REGIMES, LdpExponentSpec, OrderError, OrderSpec, f, g, ldp_case, regime


def test_regime_examples():
    assert regime(2, 1) == "r=d-1"
    assert regime(3, 1) == "0<r<d-1"
    assert regime(2, 0) == "r=0"
    assert regime(2, 1.5) == "d-1<r<d"
    assert regime(2, 2) == "r=d"
    assert regime(2, 3) == "r>d"


def test_regime_partition_grid():
    for d in range(2, 6):
        for r in np.round(np.arange(0, 6.01, 0.1), 10):
            tag = regime(d, float(r))
            hits = [
                r == 0,
                0 < r < d - 1,
                r == d - 1,
                d - 1 < r < d,
                r == d,
                r > d,
            ]
            assert sum(hits) == 1
            assert REGIMES[hits.index(True)] == tag


def test_f_examples():
    N = round(math.e**8)
    assert abs(f(2, 3, N) - math.log(N) ** (1 / 3)) < 1e-12
    assert abs(f(2, 3, N) - 2.0) < 1e-3
    assert abs(f(2, 0, 10**6) - 5.2615) < 1e-3
    assert abs(f(3, 1, 10**6) - 3.7170) < 1e-3
    assert abs(f(2, 1, 1000) - math.sqrt(math.log(1000))) < 1e-12


def test_f_all_branches_direct():
    N = 5000
    lg, llg = math.log(N), math.log(math.log(N))
    assert f(4, 0, N) == lg / llg
    assert math.isclose(f(4, 1.5, N), lg ** (1 / 2.5))
    assert math.isclose(f(4, 3, N), lg ** 0.25 * llg ** 0.5)
    assert math.isclose(f(4, 3.5, N), lg ** 0.25)
    assert math.isclose(f(4, 4, N), lg ** 0.25 * llg ** -0.25)
    assert math.isclose(f(4, 5, N), lg ** 0.2)


def test_f_gates():
    with pytest.raises(OrderError):
        f(2, 1, 2)
    with pytest.raises(OrderError):
        f(2, 0, 15)
    with pytest.raises(OrderError):
        f(2, 1, 15)
    with pytest.raises(OrderError):
        f(1, 1, 100)
    with pytest.raises(OrderError):
        f(2, -1, 100)


def test_f_nondecreasing_in_N():
    Ns = np.unique(np.round(np.logspace(np.log10(16), 9, 300)).astype(int))
    for d in range(2, 6):
        for r in [0, 0.5, d - 1, d - 0.5, d, d + 1.5]:
            vals = [f(d, r, int(N)) for N in Ns]
            assert all(b >= a for a, b in zip(vals, vals[1:])), (d, r)


def test_order_spec():
    spec = OrderSpec.of(2, 1)
    assert spec.regime == "r=d-1"
    assert spec(100) == f(2, 1, 100)


def test_g_examples():
    assert math.isclose(g(1.5, 2, 10), 10**1.5)
    assert math.isclose(g(2, 2, math.e**2), math.e**4 / 2)
    assert math.isclose(g(3, 2, 10, 5), 200)
    assert math.isclose(g(2.5, 2, 10), 100)


def test_g_cases_and_errors():
    assert ldp_case(1.5, 2) == "1<r<d"
    assert ldp_case(2, 2) == "r=d"
    assert ldp_case(2.5, 2) == "d<r<d+1"
    assert ldp_case(3, 2) == "r=d+1"
    assert LdpExponentSpec.of(2, 2).case == "r=d"
    with pytest.raises(OrderError, match="out of proposition range"):
        g(4, 2, 10)
    with pytest.raises(OrderError, match="out of proposition range"):
        g(1, 2, 10)
    with pytest.raises(OrderError):
        g(2, 2, 1.5)
    with pytest.raises(OrderError):
        g(3, 2, 10, 0.5)


def test_g_grows_along_f():
    # along L = f_{d,r}(N) with the face dimension d - 1, g increases without bound
    for d, r in [(3, 1.5), (3, 2), (3, 2.5), (3, 3)]:
        vals = []
        for N in [10**3, 10**6, 10**12, 10**24, 10**48, 10**96, 10**192]:
            L = max(2.0, f(d, r, N))
            vals.append(g(r, d - 1, L, 1.0))
        assert all(b >= a for a, b in zip(vals, vals[1:]))
        assert vals[-1] > 2 * vals[0]
