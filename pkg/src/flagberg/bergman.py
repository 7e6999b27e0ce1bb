"""Dimensions of section spaces, Kempf constants and the Bergman kernel of
the unit disc bundle over a Kahler-Einstein flag manifold.

With ``h^0(L^m) = sum_k d_k C(m+k, k)`` and constant Kempf function
``T_m = h^0(L^m) / V`` the Fourier modes of the kernel are
``K_m = x^m (m+1) W T_m / pi`` with ``x = |lam|^2 / h(z)``.  Summing the
geometric series gives ``K = a rho^{-n-2}`` with ``rho = 1 - x`` and

    a = W/(pi V) * sum_k d_k [(k+1) rho^{n-k} - k rho^{n-k+1}],

a polynomial in ``rho`` (no logarithmic term) whose value at ``rho = 0`` is
``W d_n (n+1) / (pi V)``.

Values that carry a single factor ``1/pi`` are returned as :class:`PiInverse`
so that closed form and series compare as exact rationals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Sequence

import numpy as np

from .exact import solve
from .flagstruct import FlagManifold, WeightCoeffs, weight_from_coeffs
from .kahlergeom import weight_W
from .polycore import GaussRat
from .potential import PotentialData
from .rootsystems import weight_inner


class DegreeMismatchError(ValueError):
    pass


class BoundaryError(ValueError):
    pass


class QuadratureError(RuntimeError):
    pass


@dataclass(frozen=True, order=True)
class PiInverse:
    """The real number ``coef / pi``."""

    coef: Fraction

    def __float__(self) -> float:
        return float(self.coef) / math.pi

    def __add__(self, other: "PiInverse") -> "PiInverse":
        return PiInverse(self.coef + other.coef)

    def __sub__(self, other: "PiInverse") -> "PiInverse":
        return PiInverse(self.coef - other.coef)

    def __abs__(self) -> "PiInverse":
        return PiInverse(abs(self.coef))

    def __str__(self) -> str:
        return f"{self.coef}/pi"


# -- dimensions --------------------------------------------------------------


def weyl_dim(flag: FlagManifold, xi: WeightCoeffs, m: int) -> int:
    """``dim V_{m xi} = prod_{a > 0} <m xi + rho, a> / <rho, a>``."""
    if not xi.is_integral or any(c <= 0 for c in xi.c):
        raise ValueError(f"weyl_dim needs positive integral coefficients, got {list(xi.c)}")
    if m < 0:
        raise ValueError("m must be >= 0")
    d = flag.alg.d
    weight = weight_from_coeffs(flag, xi)
    rho = [Fraction(0)] * d
    for a in flag.datum.positive:
        for k, x in enumerate(a):
            rho[k] += Fraction(x, 2)
    lam = [m * w + r for w, r in zip(weight, rho)]
    out = Fraction(1)
    for a in flag.datum.positive:
        out *= weight_inner(lam, a) / weight_inner(rho, a)
    if out.denominator != 1 or out <= 0:  # pragma: no cover - Weyl formula is integral
        raise RuntimeError(f"non-integral Weyl dimension {out}")
    return int(out)


@dataclass(frozen=True)
class DimPoly:
    values: tuple[int, ...]
    poly: tuple[Fraction, ...]
    d: tuple[Fraction, ...]

    @property
    def n(self) -> int:
        return len(self.d) - 1

    @property
    def v_rr(self) -> Fraction:
        return self.poly[-1]

    def __call__(self, m: int) -> Fraction:
        return sum((c * m**k for k, c in enumerate(self.poly)), Fraction(0))

    def binomial_value(self, m: int) -> Fraction:
        return sum((dk * comb(m + k, k) for k, dk in enumerate(self.d)), Fraction(0))

    @property
    def d_n_vs_factorial(self) -> tuple[Fraction, int]:
        return self.d[-1], math.factorial(self.n)


def binomial_coeffs(values: Sequence[int]) -> DimPoly:
    """Fit ``values[m] = sum_k d_k C(m+k, k)`` with ``n = len(values) - 3``;
    the last two values are held out and must be reproduced exactly."""
    values = tuple(int(v) for v in values)
    n = len(values) - 3
    if n < 0:
        raise ValueError("need at least 3 values")
    rows = [[Fraction(comb(m + k, k)) for k in range(n + 1)] for m in range(n + 1)]
    d = tuple(solve(rows, [Fraction(v) for v in values[: n + 1]]))
    vand = [[Fraction(m**k) for k in range(n + 1)] for m in range(n + 1)]
    poly = tuple(solve(vand, [Fraction(v) for v in values[: n + 1]]))
    dp = DimPoly(values, poly, d)
    for m in (n + 1, n + 2):
        if dp.binomial_value(m) != values[m] or dp(m) != values[m]:
            raise DegreeMismatchError(f"values are not a degree-{n} polynomial (residual at m={m})")
    return dp


def dim_poly(flag: FlagManifold, xi: WeightCoeffs) -> DimPoly:
    return binomial_coeffs([weyl_dim(flag, xi, m) for m in range(flag.n + 3)])


def kempf_constant(dp: DimPoly, m: int) -> Fraction:
    """``T_m = h^0(L^m) / v_rr``, normalized so that ``T_m / m^n -> 1``."""
    if m < 1:
        raise ValueError("m must be >= 1")
    return dp(m) / dp.v_rr


def kempf_tolerance_constant(dp: DimPoly) -> Fraction:
    """``C`` with ``|T_m / m^n - 1| <= C / m`` for all ``m >= 1``."""
    return sum((abs(c) for c in dp.poly[:-1]), Fraction(0)) / dp.v_rr


# -- disc bundle -------------------------------------------------------------


@dataclass(frozen=True)
class HartogsPoint:
    z: tuple[GaussRat, ...]
    lam2: Fraction
    rho: Fraction

    @property
    def x(self) -> Fraction:
        return 1 - self.rho

    @property
    def interior(self) -> bool:
        return self.rho > 0

    @property
    def boundary(self) -> bool:
        return self.rho == 0


def rho(pd: PotentialData, z: Sequence, lam2) -> Fraction:
    """Defining function ``1 - |lam|^2 / h(z)`` of the disc bundle."""
    lam2 = Fraction(lam2)
    if lam2 < 0:
        raise ValueError("|lam|^2 must be >= 0")
    return 1 - lam2 / pd.h([GaussRat.coerce(c) for c in z])


def hartogs_point(pd: PotentialData, z: Sequence, lam2) -> HartogsPoint:
    z = tuple(GaussRat.coerce(c) for c in z)
    return HartogsPoint(z, Fraction(lam2), rho(pd, z, lam2))


def point_with_x(pd: PotentialData, z: Sequence, x) -> HartogsPoint:
    """The point over ``z`` with ``|lam|^2 / h(z) = x``."""
    z = tuple(GaussRat.coerce(c) for c in z)
    return hartogs_point(pd, z, Fraction(x) * pd.h(z))


def _prefactor(pd: PotentialData, dp: DimPoly, z) -> Fraction:
    return weight_W(pd, z) / dp.v_rr


def a_coefficient(pd: PotentialData, dp: DimPoly, z: Sequence, r: Fraction) -> PiInverse:
    """``a(z, rho)``; defined for every ``rho`` including the boundary."""
    n = dp.n
    r = Fraction(r)
    s = sum(
        (dk * ((k + 1) * r ** (n - k) - k * r ** (n - k + 1)) for k, dk in enumerate(dp.d)),
        Fraction(0),
    )
    return PiInverse(_prefactor(pd, dp, z) * s)


def kernel_closed_form(pd: PotentialData, dp: DimPoly, point: HartogsPoint) -> PiInverse:
    """``K = a rho^{-n-2}`` at an interior point."""
    if not point.interior:
        raise BoundaryError(f"kernel needs rho > 0, got {point.rho}")
    a = a_coefficient(pd, dp, point.z, point.rho)
    return PiInverse(a.coef / point.rho ** (dp.n + 2))


def series_tail_bound(pd: PotentialData, dp: DimPoly, point: HartogsPoint, M: int) -> PiInverse:
    """Rigorous majorant of ``sum_{m > M} |K_m|``.

    ``|h^0(L^m)| <= D C(m+n, n)`` with ``D = sum |d_k|``, and the ratio of
    consecutive majorant terms ``t_m = (m+1) C(m+n, n) x^m`` is at most
    ``r = x (M+3)/(M+2) (M+2+n)/(M+2)`` for ``m >= M+1``."""
    x, n = point.x, dp.n
    if x >= 1:
        raise BoundaryError(f"series diverges for x = {x}")
    if x == 0:
        return PiInverse(Fraction(0))
    r = x * Fraction(M + 3, M + 2) * Fraction(M + 2 + n, M + 2)
    if r >= 1:
        raise ValueError(f"truncation M={M} too small for a geometric tail at x={x}")
    big_d = sum((abs(dk) for dk in dp.d), Fraction(0))
    t = (M + 2) * comb(M + 1 + n, n) * x ** (M + 1)
    return PiInverse(_prefactor(pd, dp, point.z) * big_d * t / (1 - r))


def kernel_series(
    pd: PotentialData, dp: DimPoly, point: HartogsPoint, M: int = 200
) -> tuple[PiInverse, PiInverse]:
    """Partial sum ``sum_{m=0}^{M} x^m (m+1) W T_m / pi`` and its tail bound;
    ``T_0 = 1 / v_rr``."""
    x = point.x
    if x >= 1:
        raise BoundaryError(f"series diverges for x = {x}")
    total = Fraction(0)
    xm = Fraction(1)
    for m in range(M + 1):
        total += xm * (m + 1) * dp.binomial_value(m)
        xm *= x
        if not xm:
            break
    value = PiInverse(_prefactor(pd, dp, point.z) * total)
    return value, series_tail_bound(pd, dp, point, M)


def boundary_coefficient(pd: PotentialData, dp: DimPoly, z: Sequence) -> PiInverse:
    """``lim_{rho -> 0} a = W d_n (n+1) / (pi V)``."""
    return PiInverse(_prefactor(pd, dp, z) * dp.d[-1] * (dp.n + 1))


# -- binomial identities -----------------------------------------------------


def check_binomial_identities(k_max: int, m_max: int, x_samples: Sequence) -> bool:
    """``m C(m+k, k) = (k+1) C(m+k, k+1)`` exactly in range, and the partial
    sums of ``sum_m C(m+k, k) x^m`` approach ``(1-x)^{-k-1}`` within an exact
    geometric tail bound."""
    for k in range(k_max + 1):
        for m in range(m_max + 1):
            if m * comb(m + k, k) != (k + 1) * comb(m - 1 + k + 1, k + 1):
                return False
    for x in x_samples:
        x = Fraction(x)
        if not 0 < x < 1:
            raise ValueError("x must lie in (0, 1)")
        for k in range(k_max + 1):
            target = (1 - x) ** (-k - 1)
            partial, xm = Fraction(0), Fraction(1)
            for m in range(m_max + 1):
                partial += comb(m + k, k) * xm
                xm *= x
            M = m_max
            r = x * Fraction(M + 2 + k, M + 2)
            if r >= 1:
                raise ValueError(f"m_max={m_max} too small for a geometric tail at x={x}")
            tail = comb(M + 1 + k, k) * x ** (M + 1) / (1 - r)
            gap = target - partial
            if not 0 <= gap <= tail:
                return False
    return True


# -- numeric Kempf function on projective space ------------------------------


@dataclass(frozen=True)
class KempfNumeric:
    d: int
    m: int
    values: tuple[float, ...]
    constancy: float
    expected: float
    deviation: float
    gram_oracle_deviation: float
    pi_factor: float


def _exponents(d: int, degree: int) -> list[tuple[int, ...]]:
    if d == 1:
        return [(j,) for j in range(degree + 1)]
    return [(a, b) for a in range(degree + 1) for b in range(degree + 1 - a)]


def _nodes(d: int, order: int, n_angles: int) -> tuple[np.ndarray, np.ndarray]:
    """Quadrature nodes ``z`` (shape ``(K, d)``) and weights for Lebesgue
    measure on ``C^d`` times ``(1 + |z|^2)^{-d-1}``, after the substitution
    ``|z_i|^2 = s_i / (1 - sum s)`` onto the simplex."""
    u, wu = np.polynomial.legendre.leggauss(order)
    u, wu = (u + 1) / 2, wu / 2
    theta = 2 * np.pi * np.arange(n_angles) / n_angles
    wt = np.full(n_angles, 2 * np.pi / n_angles)
    if d == 1:
        s = u[:, None]
        ws = wu
    else:
        s1 = np.repeat(u, order)
        s2 = (1 - s1) * np.tile(u, order)
        s = np.stack([s1, s2], axis=1)
        ws = np.repeat(wu, order) * np.tile(wu, order) * (1 - s1)
    rest = 1 - s.sum(axis=1)
    # |z_i|^2 = s_i / rest; dx dy = (1/2) d|z|^2 dtheta; Jacobian rest^{-d-1};
    # (1 + |z|^2)^{-d-1} = rest^{d+1} cancels it
    radial = np.sqrt(s / rest[:, None])
    w_radial = ws * 0.5**d
    if d == 1:
        z = radial[:, 0:1, None] * np.exp(1j * theta)[None, None, :]
        z = z.transpose(0, 2, 1).reshape(-1, 1)
        w = np.outer(w_radial, wt).reshape(-1)
        return z, w
    ang = np.exp(1j * theta)
    z1 = radial[:, 0][:, None, None] * ang[None, :, None] * np.ones(n_angles)[None, None, :]
    z2 = radial[:, 1][:, None, None] * np.ones(n_angles)[None, :, None] * ang[None, None, :]
    z = np.stack([z1.reshape(-1), z2.reshape(-1)], axis=1)
    w = (w_radial[:, None, None] * wt[None, :, None] * wt[None, None, :]).reshape(-1)
    return z, w


def _gram(d: int, big_n: int, exps, order: int) -> np.ndarray:
    """``<z^J, z^K> = int z^J conj(z^K) h^m omega^d/d!`` with
    ``h^m = (1+|z|^2)^{-N}`` and ``omega^d/d! = (d+1)^d (1+|z|^2)^{-d-1} dV``."""
    z, w = _nodes(d, order, 2 * big_n + 4)
    r2 = (np.abs(z) ** 2).sum(axis=1)
    weight = w * (d + 1) ** d * (1 + r2) ** (-big_n)
    vals = np.stack([np.prod(z ** np.array(e), axis=1) for e in exps], axis=1)
    return (vals * weight[:, None]).T @ vals.conj()


def kempf_numeric_projective(
    d: int, m: int, sample_points: Sequence[Sequence[complex]], quad_order: int = 12
) -> KempfNumeric:
    """Kempf function of ``O(m(d+1))`` on ``CP^d`` by orthonormalizing the
    monomial basis with quadrature.  Raises :class:`QuadratureError` if the
    Gram matrix is not converged between ``quad_order`` and ``quad_order + 4``."""
    if d not in (1, 2) or not 1 <= m <= 3:
        raise ValueError("supported: d in {1, 2}, 1 <= m <= 3")
    big_n = m * (d + 1)
    exps = _exponents(d, big_n)
    gram = _gram(d, big_n, exps, quad_order)
    check = _gram(d, big_n, exps, quad_order + 4)
    if np.max(np.abs(gram - check)) > 1e-10 * np.max(np.abs(check)):
        raise QuadratureError(f"quadrature order {quad_order} not converged")
    chol = np.linalg.cholesky(gram)

    values = []
    for pt in sample_points:
        z = np.asarray(pt, dtype=complex)
        v = np.array([np.prod(z ** np.array(e)) for e in exps])
        y = np.linalg.solve(chol, v)
        values.append(float(np.vdot(y, y).real * (1 + np.vdot(z, z).real) ** (-big_n)))
    mean = float(np.mean(values))
    constancy = max(abs(v - mean) for v in values) / mean

    # T_m = h^0 / v_rr for O(m(d+1)); the quadrature lacks the pi^d of the
    # angular/radial normalization relative to v_rr
    h0 = comb(big_n + d, d)
    v_rr = Fraction((d + 1) ** d, math.factorial(d))
    pi_factor = math.pi**d
    expected = float(h0 / v_rr) / pi_factor
    deviation = max(abs(v - expected) for v in values) / expected

    diag = np.real(np.diag(gram))
    oracle = np.array([1 / math.comb(big_n, sum(e)) / _multi(e, sum(e)) for e in exps])
    ratios = diag / oracle
    gram_dev = float(np.max(np.abs(ratios / ratios[0] - 1)))
    off = gram - np.diag(np.diag(gram))
    gram_dev = max(gram_dev, float(np.max(np.abs(off))) / float(np.max(diag)))
    return KempfNumeric(d, m, tuple(values), constancy, expected, deviation, gram_dev, pi_factor)


def _multi(e: Sequence[int], total: int) -> int:
    out = 1
    for k in e:
        out *= math.comb(total, k)
        total -= k
    return out
