import random
from fractions import Fraction as F
from math import comb, factorial

import pytest
from hypothesis import given
from hypothesis import strategies as st

from flagberg.bergman import (
    BoundaryError,
    DegreeMismatchError,
    PiInverse,
    a_coefficient,
    binomial_coeffs,
    boundary_coefficient,
    check_binomial_identities,
    dim_poly,
    hartogs_point,
    kempf_constant,
    kempf_numeric_projective,
    kernel_closed_form,
    kernel_series,
    point_with_x,
    rho,
    weyl_dim,
)
from flagberg.catalog import CATALOG, catalog_flag
from flagberg.flagstruct import WeightCoeffs, ke_coeffs, make_flag
from flagberg.polycore import GaussRat
from flagberg.potential import build_chart, build_potential


def _quadric(n):
    # hypersurface of degree 2 in CP^{n+1} with L = O(n): h0 = C(k+n+1, n+1) - C(k+n-1, n+1), k = n m
    return lambda m: comb(n * m + n + 1, n + 1) - comb(n * m + n - 1, n + 1)


# independent section counts for the KE line bundle
ORACLES = {
    "CP1": lambda m: 2 * m + 1,
    "CP2": lambda m: comb(3 * m + 2, 2),
    "SU3/T": lambda m: (2 * m + 1) ** 3,
    "Gr(2,4)": lambda m: comb(4 * m + 5, 5) - comb(4 * m + 3, 5),
    "Sp(2)/U(2)": lambda m: comb(4 * m + 3, 3),
    "SO(5)/SO(2)xSO(3)": _quadric(3),
    "SO(7)/SO(2)xSO(5)": _quadric(5),
}

V_RR = {
    "CP1": 2,
    "CP2": F(9, 2),
    "SU3/T": 8,
    "Gr(2,4)": F(64, 3),
    "Sp(2)/U(2)": F(32, 3),
    "SO(5)/SO(2)xSO(3)": 9,
    "SO(7)/SO(2)xSO(5)": F(625, 12),
}


@pytest.fixture(scope="module")
def setups():
    out = {}
    for name in CATALOG:
        flag = catalog_flag(name)
        ke = ke_coeffs(flag)
        out[name] = (flag, build_potential(build_chart(flag), ke), dim_poly(flag, ke))
    return out


@pytest.mark.parametrize("name", list(CATALOG))
def test_weyl_dim_matches_oracle(name):
    flag = catalog_flag(name)
    ke = ke_coeffs(flag)
    for m in range(6):
        assert weyl_dim(flag, ke, m) == ORACLES[name](m)


def test_weyl_dim_small():
    cp2 = make_flag("A", 3, (1,))
    assert weyl_dim(cp2, WeightCoeffs((3,)), 1) == 10
    assert weyl_dim(make_flag("B", 4, (2, 4)), WeightCoeffs((1, 3)), 0) == 1
    with pytest.raises(ValueError):
        weyl_dim(cp2, WeightCoeffs((F(1, 2),)), 1)


@pytest.mark.parametrize("name", list(CATALOG))
def test_dim_poly(name, setups):
    flag, _, dp = setups[name]
    assert dp.n == flag.n
    assert dp.v_rr == V_RR[name]
    assert dp.d[-1] == dp.v_rr * factorial(dp.n) > 0
    for m in range(12):
        assert dp(m) == dp.binomial_value(m) == ORACLES[name](m)


def test_binomial_coeffs_examples():
    assert binomial_coeffs([2 * m + 1 for m in range(4)]).d == (-1, 2)
    cp2 = binomial_coeffs([comb(3 * m + 2, 2) for m in range(5)])
    assert cp2.d == (1, -9, 9) and cp2.v_rr == F(9, 2)
    assert binomial_coeffs([1, 1, 1]).d == (1,)
    with pytest.raises(DegreeMismatchError):
        binomial_coeffs([1, 2, 4, 8, 16])


@given(st.lists(st.integers(-20, 20), min_size=1, max_size=4), st.integers(1, 5))
def test_binomial_coeffs_recover(d, n_extra):
    if d[-1] == 0:
        d[-1] = 1
    n = len(d) - 1
    values = [sum(dk * comb(m + k, k) for k, dk in enumerate(d)) for m in range(n + 3)]
    assert binomial_coeffs(values).d == tuple(d)


def test_kempf_constant(setups):
    _, _, dp = setups["CP1"]
    for m in range(1, 6):
        assert kempf_constant(dp, m) == F(2 * m + 1, 2)
    assert kempf_constant(setups["CP2"][2], 1) == F(20, 9)
    for name, (_, _, dp) in setups.items():
        for m in (10**3, 10**6):
            assert abs(kempf_constant(dp, m) / m**dp.n - 1) < F(dp.n + 2, m)


def test_rho_examples(setups):
    _, pd, _ = setups["CP1"]
    assert rho(pd, [0], 0) == 1
    assert rho(pd, [0], 1) == 0 and hartogs_point(pd, [0], 1).boundary
    assert rho(pd, [1], F(1, 8)) == F(1, 2)


def test_kernel_cp1_values(setups):
    _, pd, dp = setups["CP1"]
    assert dp.d == (-1, 2)
    # rho = 1 collapses a to W h0(0) / (pi V) = 1/pi
    assert kernel_closed_form(pd, dp, hartogs_point(pd, [0], 0)) == PiInverse(F(1))
    assert boundary_coefficient(pd, dp, [0]) == PiInverse(F(4))
    # K = 2 (1+x)... directly: sum (m+1)(2m+1) x^m = (1+3x)/(1-x)^3
    x = F(1, 2)
    pt = point_with_x(pd, [0], x)
    assert kernel_closed_form(pd, dp, pt) == PiInverse((1 + 3 * x) / (1 - x) ** 3)


def test_kernel_boundary_errors(setups):
    _, pd, dp = setups["CP1"]
    with pytest.raises(BoundaryError):
        kernel_closed_form(pd, dp, hartogs_point(pd, [0], 1))
    with pytest.raises(BoundaryError):
        kernel_series(pd, dp, hartogs_point(pd, [0], 2))


def test_series_at_lambda_zero(setups):
    for name, (flag, pd, dp) in setups.items():
        pt = hartogs_point(pd, [0] * flag.n, 0)
        value, tail = kernel_series(pd, dp, pt)
        assert value == kernel_closed_form(pd, dp, pt) and tail.coef == 0


@pytest.mark.parametrize("name", list(CATALOG))
def test_series_vs_closed_form(name, setups):
    flag, pd, dp = setups[name]
    rng = random.Random(1)
    q = lambda: F(rng.randint(-3, 3), rng.randint(1, 3))
    for x in (F(1, 2), F(9, 10)):
        z = [GaussRat(q(), q()) for _ in range(flag.n)]
        pt = point_with_x(pd, z, x)
        closed = kernel_closed_form(pd, dp, pt)
        value, tail = kernel_series(pd, dp, pt, M=200 if x <= F(1, 2) else 500)
        gap = closed - value
        assert gap.coef >= 0 and gap.coef <= tail.coef
        if x <= F(1, 2):
            assert float(gap) <= 1e-8 * float(closed)


def test_series_cp1_tight(setups):
    _, pd, dp = setups["CP1"]
    pt = point_with_x(pd, [0], F(1, 2))
    value, _ = kernel_series(pd, dp, pt, M=100)
    assert float(abs(kernel_closed_form(pd, dp, pt) - value)) <= 1e-10


@pytest.mark.parametrize("name", list(CATALOG))
def test_a_positive_on_closed_disc(name, setups):
    flag, pd, dp = setups[name]
    rng = random.Random(2)
    for _ in range(5):
        z = [GaussRat(F(rng.randint(-3, 3), 2), F(rng.randint(-3, 3), 2)) for _ in range(flag.n)]
        assert boundary_coefficient(pd, dp, z).coef > 0
        for r in (0, F(1, 10**6), F(1, 3), 1):
            assert a_coefficient(pd, dp, z, r).coef > 0
        assert a_coefficient(pd, dp, z, 0) == boundary_coefficient(pd, dp, z)
        near = a_coefficient(pd, dp, z, F(1, 10**6)) - boundary_coefficient(pd, dp, z)
        assert abs(near.coef) < 10**-6 * 10 * boundary_coefficient(pd, dp, z).coef * (dp.n + 2)


def test_binomial_identities():
    assert 5 * comb(7, 2) == 105 == 3 * comb(7, 3)
    assert check_binomial_identities(2, 200, [F(1, 2), F(1, 3)])
    assert sum(F(m + 1, 2**m) for m in range(200)) < 4


def test_pi_inverse():
    a = PiInverse(F(4))
    assert str(a) == "4/pi"
    assert abs(PiInverse(F(-1))) == PiInverse(F(1))
    assert float(a) == pytest.approx(4 / 3.141592653589793)


@pytest.mark.parametrize("m", [1, 2, 3])
def test_kempf_numeric_cp1(m):
    pts = [[complex(0.3 * k - 2, 0.25 * k - 1.5)] for k in range(20)]
    res = kempf_numeric_projective(1, m, pts)
    assert res.constancy < 1e-6
    assert res.deviation < 1e-6
    assert res.gram_oracle_deviation < 1e-8


def test_kempf_numeric_cp2():
    rng = random.Random(0)
    pts = [[complex(rng.uniform(-2, 2), rng.uniform(-2, 2)) for _ in range(2)] for _ in range(10)]
    res = kempf_numeric_projective(2, 1, pts)
    assert res.constancy < 1e-5 and res.deviation < 1e-5 and res.gram_oracle_deviation < 1e-8


def test_kempf_numeric_domain():
    with pytest.raises(ValueError):
        kempf_numeric_projective(3, 1, [[0, 0, 0]])
