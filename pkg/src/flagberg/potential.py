"""Affine chart on F_reg and the principal-minor Kahler potential.

On ``F_reg = exp(sum_{a in -Q} z_a E_a)`` the potential is
``Phi = sum_j b_j log P_j`` with ``P_j`` the ``k_j``-th leading principal
minor of ``A = conj(exp Z)^T exp Z``.  ``b_j`` are the minor exponents of the
chosen weight (equal to its fundamental-weight coordinates away from spin
nodes).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from .flagstruct import (
    FlagManifold,
    WeightCoeffs,
    admissible_minor_indices,
    minor_exponents,
)
from .polycore import GaussRat, Poly, PolyMatrix, nilpotent_exp, principal_minor
from .rootsystems import RootVec, root_vector_matrix


class RootMatrixError(RuntimeError):
    pass


@dataclass(frozen=True)
class CoordChart:
    flag: FlagManifold
    var_order: tuple[RootVec, ...]

    @property
    def n(self) -> int:
        return len(self.var_order)

    def variable_names(self) -> list[str]:
        return [f"z{k + 1}={r}" for k, r in enumerate(self.var_order)]


def build_chart(flag: FlagManifold) -> CoordChart:
    """Coordinates ``z_k`` indexed by ``-Q`` sorted by root coordinates."""
    neg_q = sorted(tuple(-c for c in a) for a in flag.q)
    return CoordChart(flag, tuple(neg_q))


def build_Z(chart: CoordChart) -> PolyMatrix:
    """``Z(z) = sum_{a in -Q} z_a E_a``; verified nilpotent."""
    alg = chart.flag.alg
    dim, n = alg.matrix_dim, chart.n
    rows = [[Poly(n) for _ in range(dim)] for _ in range(dim)]
    for k, root in enumerate(chart.var_order):
        e = root_vector_matrix(alg, root)
        zk = Poly.z(n, k)
        for i in range(dim):
            for j in range(dim):
                if e[i, j]:
                    rows[i][j] = rows[i][j] + zk.scale(int(e[i, j]))
    z = PolyMatrix(rows)
    power = z
    for _ in range(dim - 1):
        power = power @ z
    if not power.is_zero():
        raise RootMatrixError(f"Z(z) is not nilpotent for {chart.flag.label()}")
    return z


def exp_Z(chart: CoordChart) -> PolyMatrix:
    return nilpotent_exp(build_Z(chart))


def gram_block(expz: PolyMatrix, k: int) -> PolyMatrix:
    """Top-left ``k x k`` block of ``conj(exp Z)^T exp Z``."""
    dim = expz.dim
    rows = []
    for i in range(k):
        row = []
        for j in range(k):
            acc = Poly(expz.n)
            for s in range(dim):
                a, b = expz.rows[s][i], expz.rows[s][j]
                if a.terms and b.terms:
                    acc = acc + a.conj_swap() * b
            row.append(acc)
        rows.append(row)
    return PolyMatrix(rows)


@dataclass(frozen=True)
class PotentialData:
    chart: CoordChart
    minors: tuple[Poly, ...]
    minor_sizes: tuple[int, ...]
    coeffs: WeightCoeffs
    exponents: tuple[Fraction, ...]
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def n(self) -> int:
        return self.chart.n

    @property
    def flag(self) -> FlagManifold:
        return self.chart.flag

    @property
    def integral_exponents(self) -> bool:
        return all(b.denominator == 1 for b in self.exponents)

    def h(self, point: Sequence) -> Fraction:
        """Hermitian metric ``h = prod_j P_j^{-b_j}`` of the trivializing
        section at ``point`` (integral exponents only)."""
        if not self.integral_exponents:
            raise ValueError("h(z) needs integral minor exponents")
        out = Fraction(1)
        for p, b in zip(self.minors, self.exponents):
            v = p.evaluate(point)
            if not v.is_real() or v.re <= 0:
                raise ValueError(f"minor not positive at {list(point)}: {v}")
            out *= v.re ** (-int(b))
        return out

    def describe(self) -> str:
        terms = " + ".join(f"{b}*log P{j + 1}" for j, b in enumerate(self.exponents))
        return f"Phi = {terms}; sizes {list(self.minor_sizes)}"


def build_potential(chart: CoordChart, c: WeightCoeffs) -> PotentialData:
    """Minors ``P_j`` at the admissible sizes and the formal potential
    ``sum_j b_j log P_j`` for the weight with coordinates ``c``."""
    flag = chart.flag
    if len(c) != flag.m:
        raise ValueError(f"expected {flag.m} weight coefficients, got {len(c)}")
    sizes = admissible_minor_indices(flag)
    a = gram_block(exp_Z(chart), max(sizes))
    minors = tuple(principal_minor(a, k) for k in sizes)
    return PotentialData(chart, minors, tuple(sizes), c, minor_exponents(flag, c))


def check_exp_structure(chart: CoordChart) -> bool:
    """On the upper-left ``d x d`` block: off-diagonal support of ``exp Z``
    is contained in that of ``Z`` and the diagonal is identically 1."""
    z = build_Z(chart)
    e = nilpotent_exp(z)
    d = chart.flag.alg.d
    one = Poly.const(chart.n, 1)
    for i in range(d):
        if e[i, i] != one:
            return False
        for j in range(d):
            if i != j and not e[i, j].is_zero() and z[i, j].is_zero():
                return False
    return True


@dataclass
class DiastasisReport:
    offending: list[tuple[int, str]]
    bad_constant: list[int]

    @property
    def ok(self) -> bool:
        return not self.offending and not self.bad_constant

    def witness(self) -> str | None:
        if self.bad_constant:
            return f"P{self.bad_constant[0] + 1}: constant term != 1"
        if self.offending:
            j, mono = self.offending[0]
            return f"P{j + 1}: {mono}"
        return None


def pure_type_monomials(p: Poly) -> list[str]:
    """Monomials of ``p`` that are pure in ``z`` or pure in ``w`` (degree > 0)."""
    n = p.n
    out = []
    for e in sorted(p.terms):
        zd, wd = sum(e[:n]), sum(e[n:])
        if (zd and not wd) or (wd and not zd):
            out.append(p.monomial_str(e))
    return out


def check_diastasis(pd: PotentialData | Iterable[Poly]) -> DiastasisReport:
    """Exact test that every minor has constant term 1 and no pure ``z^J``
    or ``w^J`` monomials."""
    minors = pd.minors if isinstance(pd, PotentialData) else tuple(pd)
    offending, bad_const = [], []
    for j, p in enumerate(minors):
        if p.constant_term() != 1:
            bad_const.append(j)
        offending.extend((j, m) for m in pure_type_monomials(p))
    return DiastasisReport(offending, bad_const)


def blowup_degrees(pd: PotentialData, direction: Sequence) -> list[int]:
    a = [GaussRat.coerce(x) for x in direction]
    if not any(a):
        raise ValueError("direction must be nonzero")
    if len(a) != pd.n:
        raise ValueError("direction has wrong dimension")
    return [p.substitute_line(a).degree() for p in pd.minors]


def check_blowup(pd: PotentialData, direction: Sequence) -> bool:
    """True iff some minor restricted to the complex line ``z = a t`` has
    positive degree in ``(t, conj t)``, i.e. the potential is unbounded."""
    return any(deg > 0 for deg in blowup_degrees(pd, direction))


def is_real_poly(p: Poly) -> bool:
    return p.conj_swap() == p
