"""Pointwise-exact Kahler geometry of ``Phi = sum_j b_j log P_j``.

Everything is evaluated at Gaussian-rational points ``z`` (with ``w = conj z``),
so the Kahler-Einstein identity ``ddbar(log det g + Phi) = 0`` is an exact
equality test.  Higher derivatives come from the exact Taylor jet of each
minor at the point, truncated to bidegree ``(2, 2)`` in the displacements.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import exact
from .flagstruct import omega_coefficients
from .polycore import GaussRat, Poly, RatFunc, taylor_shift
from .potential import PotentialData
from .rootsystems import root_vector_matrix, weight_inner

Matrix = list[list[GaussRat]]


@dataclass(frozen=True)
class MetricEval:
    point: tuple[GaussRat, ...]
    g: Matrix
    detg: GaussRat
    logdet_hessian: Matrix

    @property
    def n(self) -> int:
        return len(self.g)

    def is_hermitian(self) -> bool:
        n = self.n
        return all(self.g[i][j] == self.g[j][i].conj() for i in range(n) for j in range(n))


def _point(pd: PotentialData, point: Sequence) -> tuple[GaussRat, ...]:
    pt = tuple(GaussRat.coerce(x) for x in point)
    if len(pt) != pd.n:
        raise ValueError(f"point has dimension {len(pt)}, chart has {pd.n}")
    return pt


def log_hessian_ratfuncs(pd: PotentialData) -> list[list[list[RatFunc]]]:
    """``d_{z_i} d_{w_l} log P_j`` as rational functions, one matrix per minor."""
    cached = pd._cache.get("log_hessians")
    if cached is not None:
        return cached
    n = pd.n
    out = []
    for p in pd.minors:
        dlog_w = [RatFunc(p.diff_w(l), p) for l in range(n)]
        out.append([[dlog_w[l].diff_index(i) for l in range(n)] for i in range(n)])
    pd._cache["log_hessians"] = out
    return out


def _derivatives(pd: PotentialData) -> list[tuple[Poly, list[Poly], list[Poly], list[list[Poly]]]]:
    """Per minor: ``P``, ``d_z P``, ``d_w P`` and ``d_z d_w P`` (exact polynomials)."""
    cached = pd._cache.get("derivatives")
    if cached is not None:
        return cached
    n = pd.n
    out = []
    for p in pd.minors:
        pz = [p.diff_z(i) for i in range(n)]
        pw = [p.diff_w(l) for l in range(n)]
        pzw = [[pz[i].diff_w(l) for l in range(n)] for i in range(n)]
        out.append((p, pz, pw, pzw))
    pd._cache["derivatives"] = out
    return out


def metric_matrix(pd: PotentialData, point: Sequence) -> Matrix:
    """``g_{i lbar} = sum_j b_j (P P_{i lbar} - P_i P_lbar) / P^2`` at ``point``,
    the quotient rule applied to exact derivative polynomials."""
    pt = _point(pd, point)
    n = pd.n
    g = [[GaussRat(0)] * n for _ in range(n)]
    for b, (p, pz, pw, pzw) in zip(pd.exponents, _derivatives(pd)):
        v = p.evaluate(pt)
        if not v:
            raise ZeroDivisionError(f"minor vanishes at {list(pt)}")
        vz = [q.evaluate(pt) for q in pz]
        vw = [q.evaluate(pt) for q in pw]
        scale = b / (v * v)
        for i in range(n):
            for l in range(n):
                g[i][l] = g[i][l] + (v * pzw[i][l].evaluate(pt) - vz[i] * vw[l]) * scale
    return g


def origin_diagonal_ratios(pd: PotentialData) -> tuple[bool, set[Fraction]]:
    """Whether ``g(0)`` is diagonal, and the set of
    ``g_{aa}(0) / (x_a <a, a> tr(E_a E_{-a}) / 2)`` over the coordinate roots.

    The extra factor converts the realization's root vectors to the
    normalization ``tr(E_a E_{-a}) = 2 / <a, a>`` in which ``g_{aa}(0) / x_a``
    is constant; a single ratio is expected."""
    n = pd.n
    g0 = metric_matrix(pd, [0] * n)
    diagonal = all(not g0[i][j] for i in range(n) for j in range(n) if i != j)
    omega = omega_coefficients(pd.flag, pd.coeffs)
    alg = pd.flag.alg
    ratios = set()
    for k, neg in enumerate(pd.chart.var_order):
        a = tuple(-c for c in neg)
        e = root_vector_matrix(alg, a)
        nu = weight_inner(a, a) * int(np.trace(e @ e.T)) / 2
        x = omega.x[a]
        gk = GaussRat.coerce(g0[k][k])
        ratios.add(gk.re / (x * nu) if x and gk.is_real() else None)
    return diagonal, ratios


def _log_series(s: Poly) -> Poly:
    """``log(s) - log(s(0))`` for a jet truncated to bidegree (2, 2)."""
    c0 = s.constant_term()
    if not c0:
        raise ZeroDivisionError("jet has zero constant term")
    q = s.scale(1 / c0) - 1
    out = q
    power = q
    for k in range(2, 5):
        power = power.mul_trunc(q, 2, 2)
        if power.is_zero():
            break
        out = out + power.scale(Fraction((-1) ** (k + 1), k))
    return out


def phi_jet(pd: PotentialData, point: Sequence) -> Poly:
    """Taylor jet of ``Phi`` at ``point`` (constant dropped), bidegree <= (2, 2)."""
    pt = _point(pd, point)
    out = Poly(pd.n)
    for p, b in zip(pd.minors, pd.exponents):
        out = out + _log_series(taylor_shift(p, pt, 2, 2)).scale(b)
    return out


def _mixed(p: Poly, i: int, j: int) -> GaussRat:
    e = [0] * (2 * p.n)
    e[i] += 1
    e[p.n + j] += 1
    return p.terms.get(tuple(e), GaussRat(0))


def _metric_jet(pd: PotentialData, point: Sequence) -> tuple[Matrix, list[list[Poly]]]:
    """``g(0)`` and the jet of ``g`` (bidegree <= (1, 1)) from the Phi jet."""
    jet = phi_jet(pd, point)
    n = pd.n
    gj = [[jet.diff_z(i).diff_w(l) for l in range(n)] for i in range(n)]
    g0 = [[gj[i][l].constant_term() for l in range(n)] for i in range(n)]
    return g0, gj


def _logdet_hessian(g0: Matrix, gj: list[list[Poly]]) -> Matrix:
    """``d d-bar log det g`` at the point from ``tr X - tr X^2 / 2`` with
    ``X = g0^{-1} (g - g0)``; higher powers of ``X`` do not reach bidegree (1, 1)."""
    n = len(g0)
    inv = exact.inverse(g0)
    nv = gj[0][0].n
    delta = [[gj[i][l] - g0[i][l] for l in range(n)] for i in range(n)]
    x = [[Poly(nv) for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for k in range(n):
            acc = Poly(nv)
            for l in range(n):
                if inv[i][l] and not delta[l][k].is_zero():
                    acc = acc + delta[l][k].scale(inv[i][l])
            x[i][k] = acc
    tr = Poly(nv)
    for i in range(n):
        tr = tr + x[i][i]
    tr2 = Poly(nv)
    for i in range(n):
        for k in range(n):
            tr2 = tr2 + x[i][k].mul_trunc(x[k][i], 1, 1)
    series = tr - tr2.scale(Fraction(1, 2))
    return [[_mixed(series, i, l) for l in range(n)] for i in range(n)]


def metric_at(pd: PotentialData, point: Sequence) -> MetricEval:
    """Metric ``g_{i lbar} = d_{z_i} d_{w_l} Phi`` (exact, via rational
    function differentiation) with its determinant and the Hessian of
    ``log det g`` at ``point``."""
    pt = _point(pd, point)
    g = metric_matrix(pd, pt)
    g0, gj = _metric_jet(pd, pt)
    if g0 != g:  # pragma: no cover - two exact routes must agree
        raise RuntimeError("jet metric disagrees with rational-function metric")
    return MetricEval(pt, g, exact.det(g), _logdet_hessian(g0, gj))


def check_positive_definite(pd: PotentialData, points: Iterable[Sequence]) -> bool:
    """All leading principal minors of ``g`` real and positive at every point."""
    for pt in points:
        for m in exact.leading_minors(metric_matrix(pd, pt)):
            m = GaussRat.coerce(m)
            if not m.is_real() or m.re <= 0:
                return False
    return True


def einstein_defect(pd: PotentialData, point: Sequence) -> Matrix:
    """``d_{z_i} d_{w_j} (log det g + Phi)`` at ``point``; identically zero
    exactly when ``Ric(g) = dd-bar Phi``, i.e. Einstein constant 2 in the
    ``omega = (i/2) dd-bar Phi`` normalization."""
    pt = _point(pd, point)
    g0, gj = _metric_jet(pd, pt)
    hess = _logdet_hessian(g0, gj)
    n = pd.n
    return [[hess[i][j] + g0[i][j] for j in range(n)] for i in range(n)]


def is_zero_matrix(m: Matrix) -> bool:
    return all(not x for row in m for x in row)


def minor_values(pd: PotentialData, point: Sequence) -> list[GaussRat]:
    pt = _point(pd, point)
    return [p.evaluate(pt) for p in pd.minors]


def weight_W(pd: PotentialData, point: Sequence) -> Fraction:
    """``W = det g * prod_j P_j^{b_j}`` (``= e^{phi + conj phi}`` for the
    Einstein weight).  Needs integral minor exponents."""
    if not pd.integral_exponents:
        raise ValueError("weight_W needs integral minor exponents (integral weight)")
    pt = _point(pd, point)
    w = exact.det(metric_matrix(pd, pt))
    w = GaussRat.coerce(w)
    for v, b in zip(minor_values(pd, pt), pd.exponents):
        w = w * v ** int(b)
    if not w.is_real() or w.re <= 0:
        raise ValueError(f"W is not real positive at {list(pt)}: {w}")
    return w.re


def _jet_det(m: list[list[Poly]], zmax: int, wmax: int) -> Poly:
    n = len(m)
    if n == 1:
        return m[0][0]
    total = Poly(m[0][0].n)
    for j, a in enumerate(m[0]):
        if a.is_zero():
            continue
        minor = [r[:j] + r[j + 1 :] for r in m[1:]]
        term = a.mul_trunc(_jet_det(minor, zmax, wmax), zmax, wmax)
        total = total + term if j % 2 == 0 else total - term
    return total


def _jet_inverse(s: Poly, zmax: int, wmax: int) -> Poly:
    c0 = s.constant_term()
    q = s.scale(1 / c0) - 1
    out = Poly.const(s.n, 1)
    power = Poly.const(s.n, 1)
    for k in range(1, zmax + wmax + 1):
        power = power.mul_trunc(q, zmax, wmax).scale(-1)
        out = out + power
    return out.scale(1 / c0)


def weight_jet(pd: PotentialData, point: Sequence) -> Poly:
    """Jet of ``W = det g * prod P_j^{b_j}`` of bidegree <= (1, 1), built from
    a direct determinant expansion and integer powers of the minor jets."""
    if not pd.integral_exponents:
        raise ValueError("weight jet needs integral minor exponents")
    pt = _point(pd, point)
    # g to bidegree (1, 1) needs the minors to bidegree (2, 2)
    out = None
    n = pd.n
    jets = [taylor_shift(p, pt, 2, 2) for p in pd.minors]
    g_num = [[Poly(n) for _ in range(n)] for _ in range(n)]
    for s, b in zip(jets, pd.exponents):
        inv = _jet_inverse(s, 2, 2)
        inv2 = inv.mul_trunc(inv, 2, 2)
        for i in range(n):
            for l in range(n):
                si, sl, sil = s.diff_z(i), s.diff_w(l), s.diff_z(i).diff_w(l)
                term = sil.mul_trunc(inv, 1, 1) - si.mul_trunc(sl, 1, 1).mul_trunc(inv2, 1, 1)
                g_num[i][l] = g_num[i][l] + term.scale(b)
    out = _jet_det(g_num, 1, 1)
    for s, b in zip(jets, pd.exponents):
        base = s if b >= 0 else _jet_inverse(s, 1, 1)
        for _ in range(abs(int(b))):
            out = out.mul_trunc(base, 1, 1)
    return out


def log_weight_hessian(pd: PotentialData, point: Sequence) -> Matrix:
    """``d_{z_i} d_{w_j} log W`` at ``point`` from the jet of ``W``."""
    wj = weight_jet(pd, point)
    n = pd.n
    w0 = wj.constant_term()
    e0 = [0] * (2 * n)

    def first(k):
        e = list(e0)
        e[k] = 1
        return wj.terms.get(tuple(e), GaussRat(0))

    return [
        [(_mixed(wj, i, j) * w0 - first(i) * first(n + j)) / (w0 * w0) for j in range(n)]
        for i in range(n)
    ]
