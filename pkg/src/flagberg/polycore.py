"""Exact polynomials in ``z_1..z_n`` and formal conjugates ``w_1..w_n``.

Coefficients are Gaussian rationals.  The bar operation is the formal swap
``z <-> w`` combined with complex conjugation of coefficients, so a
real-valued expression is one with ``conj_swap(p) == p``.  Evaluation at a
point ``z`` always substitutes ``w_i = conj(z_i)``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import comb, factorial
from typing import Iterable, Sequence

__all__ = [
    "GaussRat",
    "Poly",
    "RatFunc",
    "PolyMatrix",
    "PoleError",
    "NotNilpotentError",
    "NotDivisibleError",
    "nilpotent_exp",
    "conj_swap",
    "principal_minor",
    "det_cofactor",
    "det_bareiss",
    "diff",
    "evaluate",
    "taylor_shift",
]


class PoleError(ZeroDivisionError):
    pass


class NotNilpotentError(ValueError):
    pass


class NotDivisibleError(ArithmeticError):
    pass


def _q(x) -> Fraction:
    return x if type(x) is Fraction else Fraction(x)


class GaussRat:
    """Exact element of Q(i)."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _q(re)
        self.im = _q(im)

    @classmethod
    def coerce(cls, x) -> "GaussRat":
        if type(x) is cls:
            return x
        if isinstance(x, complex):
            return cls(Fraction(x.real), Fraction(x.imag))
        return cls(x)

    def conj(self) -> "GaussRat":
        return GaussRat(self.re, -self.im)

    def is_real(self) -> bool:
        return self.im == 0

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __add__(self, o):
        if type(o) is not GaussRat:
            if isinstance(o, (int, Fraction)):
                return GaussRat(self.re + o, self.im)
            return NotImplemented
        return GaussRat(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussRat(-self.re, -self.im)

    def __sub__(self, o):
        if type(o) is not GaussRat:
            if isinstance(o, (int, Fraction)):
                return GaussRat(self.re - o, self.im)
            return NotImplemented
        return GaussRat(self.re - o.re, self.im - o.im)

    def __rsub__(self, o):
        return (-self) + o

    def __mul__(self, o):
        if type(o) is not GaussRat:
            if isinstance(o, (int, Fraction)):
                return GaussRat(self.re * o, self.im * o)
            return NotImplemented
        if not self.im and not o.im:
            return GaussRat(self.re * o.re, 0)
        return GaussRat(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = GaussRat.coerce(o)
        n = o.abs2()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(i)")
        return self * GaussRat(o.re / n, -o.im / n)

    def __rtruediv__(self, o):
        return GaussRat.coerce(o) / self

    def __pow__(self, k: int):
        if k < 0:
            return (1 / self) ** (-k)
        out, base = GaussRat(1), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, o):
        if type(o) is GaussRat:
            return self.re == o.re and self.im == o.im
        if isinstance(o, (int, Fraction)):
            return self.im == 0 and self.re == o
        if isinstance(o, complex):
            return self == GaussRat.coerce(o)
        return NotImplemented

    def __hash__(self):
        return hash(self.re) if not self.im else hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"({self.re}{sign}{abs(self.im)}i)"


_ONE = GaussRat(1)


class Poly:
    """Sparse polynomial in ``z_1..z_n, w_1..w_n``.

    ``terms`` maps exponent tuples of length ``2n`` (z-part first) to nonzero
    :class:`GaussRat` coefficients.
    """

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: dict | None = None):
        self.n = n
        self.terms = {}
        if terms:
            for e, c in terms.items():
                c = GaussRat.coerce(c)
                if c:
                    e = tuple(e)
                    if len(e) != 2 * n:
                        raise ValueError("exponent length mismatch")
                    self.terms[e] = c

    @classmethod
    def _raw(cls, n: int, terms: dict) -> "Poly":
        p = cls.__new__(cls)
        p.n = n
        p.terms = terms
        return p

    @classmethod
    def const(cls, n: int, c=1) -> "Poly":
        return cls(n, {(0,) * (2 * n): c})

    @classmethod
    def z(cls, n: int, i: int) -> "Poly":
        """``z_{i+1}`` (0-based index)."""
        e = [0] * (2 * n)
        e[i] = 1
        return cls._raw(n, {tuple(e): _ONE})

    @classmethod
    def w(cls, n: int, i: int) -> "Poly":
        e = [0] * (2 * n)
        e[n + i] = 1
        return cls._raw(n, {tuple(e): _ONE})

    @classmethod
    def parse(cls, n: int, text: str) -> "Poly":
        """Parse a sum of terms like ``"1 + 2*z1*w2^2 - 1/2*w1"`` (test helper)."""
        out = cls(n)
        for sign, body in re.findall(r"([+-]?)\s*([^+-]+)", text.replace(" ", "")):
            coef = GaussRat(-1 if sign == "-" else 1)
            e = [0] * (2 * n)
            for f in body.split("*"):
                m = re.fullmatch(r"([zw])(\d+)(?:\^(\d+))?", f)
                if m:
                    k = int(m.group(2)) - 1 + (n if m.group(1) == "w" else 0)
                    e[k] += int(m.group(3) or 1)
                elif f == "i":
                    coef = coef * GaussRat(0, 1)
                else:
                    coef = coef * Fraction(f)
            out = out + cls(n, {tuple(e): coef})
        return out

    # -- structure -------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def constant_term(self) -> GaussRat:
        return self.terms.get((0,) * (2 * self.n), GaussRat(0))

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def bidegree(self, e: Sequence[int]) -> tuple[int, int]:
        return sum(e[: self.n]), sum(e[self.n :])

    def __len__(self):
        return len(self.terms)

    def __eq__(self, o):
        if isinstance(o, Poly):
            return self.n == o.n and self.terms == o.terms
        if isinstance(o, (int, Fraction, GaussRat)):
            return self == Poly.const(self.n, o)
        return NotImplemented

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def _coerce(self, o) -> "Poly":
        if isinstance(o, Poly):
            if o.n != self.n:
                raise ValueError("variable count mismatch")
            return o
        return Poly.const(self.n, o)

    # -- arithmetic ------------------------------------------------------
    def __add__(self, o):
        o = self._coerce(o)
        out = dict(self.terms)
        for e, c in o.terms.items():
            v = out.get(e)
            if v is None:
                out[e] = c
            else:
                v = v + c
                if v:
                    out[e] = v
                else:
                    del out[e]
        return Poly._raw(self.n, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.n, {e: -c for e, c in self.terms.items()})

    def __sub__(self, o):
        return self + (-self._coerce(o))

    def __rsub__(self, o):
        return self._coerce(o) - self

    def scale(self, c) -> "Poly":
        c = GaussRat.coerce(c)
        if not c:
            return Poly(self.n)
        return Poly._raw(self.n, {e: v * c for e, v in self.terms.items()})

    def __mul__(self, o):
        if isinstance(o, (int, Fraction, GaussRat)):
            return self.scale(o)
        o = self._coerce(o)
        return self.mul_trunc(o)

    __rmul__ = __mul__

    def mul_trunc(self, o: "Poly", zmax: int | None = None, wmax: int | None = None) -> "Poly":
        """Product, dropping monomials whose z-degree exceeds ``zmax`` or whose
        w-degree exceeds ``wmax``."""
        n = self.n
        out: dict = {}
        get = out.get
        b = [(e, c, sum(e[:n]), sum(e[n:])) for e, c in o.terms.items()]
        for e1, c1 in self.terms.items():
            z1, w1 = sum(e1[:n]), sum(e1[n:])
            for e2, c2, z2, w2 in b:
                if zmax is not None and z1 + z2 > zmax:
                    continue
                if wmax is not None and w1 + w2 > wmax:
                    continue
                e = tuple(x + y for x, y in zip(e1, e2))
                v = get(e)
                out[e] = c1 * c2 if v is None else v + c1 * c2
        return Poly._raw(n, {e: c for e, c in out.items() if c})

    def truncate(self, zmax: int, wmax: int) -> "Poly":
        n = self.n
        return Poly._raw(
            n, {e: c for e, c in self.terms.items() if sum(e[:n]) <= zmax and sum(e[n:]) <= wmax}
        )

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out, base = Poly.const(self.n, 1), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def exquo(self, o: "Poly") -> "Poly":
        """Exact quotient ``self / o``; raises :class:`NotDivisibleError` if the
        division leaves a remainder."""
        o = self._coerce(o)
        if o.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        lead_e = max(o.terms)
        lead_c = o.terms[lead_e]
        r = self
        q: dict = {}
        while r.terms:
            e = max(r.terms)
            diff_e = tuple(a - b for a, b in zip(e, lead_e))
            if min(diff_e) < 0:
                raise NotDivisibleError("polynomial division is not exact")
            c = r.terms[e] / lead_c
            q[diff_e] = c
            r = r - Poly._raw(self.n, {tuple(a + b for a, b in zip(diff_e, k)): v * c for k, v in o.terms.items()})
        return Poly._raw(self.n, q)

    def divides(self, o: "Poly") -> bool:
        try:
            o.exquo(self)
        except NotDivisibleError:
            return False
        return True

    # -- calculus and evaluation -----------------------------------------
    def diff_index(self, k: int) -> "Poly":
        out = {}
        for e, c in self.terms.items():
            if e[k]:
                e2 = list(e)
                e2[k] -= 1
                out[tuple(e2)] = c * e[k]
        return Poly._raw(self.n, out)

    def diff_z(self, i: int) -> "Poly":
        return self.diff_index(i)

    def diff_w(self, i: int) -> "Poly":
        return self.diff_index(self.n + i)

    def conj_swap(self) -> "Poly":
        n = self.n
        return Poly._raw(n, {e[n:] + e[:n]: c.conj() for e, c in self.terms.items()})

    def evaluate(self, point: Sequence) -> GaussRat:
        """Value at ``z = point``, ``w = conj(point)``."""
        n = self.n
        pt = [GaussRat.coerce(p) for p in point]
        if len(pt) != n:
            raise ValueError("point has wrong dimension")
        vals = pt + [p.conj() for p in pt]
        cache: dict = {}
        total = GaussRat(0)
        for e, c in self.terms.items():
            v = c
            for k, a in enumerate(e):
                if a:
                    key = (k, a)
                    pw = cache.get(key)
                    if pw is None:
                        pw = cache[key] = vals[k] ** a
                    v = v * pw
            total = total + v
        return total

    def substitute_line(self, a: Sequence) -> "Poly":
        """Restriction to ``z = a*t``, ``w = conj(a)*conj(t)``: a polynomial in
        one variable ``t`` (slot ``z1``) and its conjugate (slot ``w1``)."""
        n = self.n
        av = [GaussRat.coerce(x) for x in a]
        vals = av + [x.conj() for x in av]
        out = Poly(1)
        for e, c in self.terms.items():
            v = c
            for k, p in enumerate(e):
                if p:
                    v = v * vals[k] ** p
            out = out + Poly(1, {(sum(e[:n]), sum(e[n:])): v})
        return out

    # -- display ---------------------------------------------------------
    def monomial_str(self, e: Sequence[int]) -> str:
        n = self.n
        parts = []
        for k, a in enumerate(e):
            if a:
                name = f"z{k + 1}" if k < n else f"w{k - n + 1}"
                parts.append(name if a == 1 else f"{name}^{a}")
        return "*".join(parts) or "1"

    def __repr__(self):
        if not self.terms:
            return "0"
        items = sorted(self.terms.items(), key=lambda t: (sum(t[0]), tuple(-x for x in t[0])))
        return " + ".join(
            f"{c}*{self.monomial_str(e)}" if any(e) else f"{c}" for e, c in items
        )


def conj_swap(p: Poly) -> Poly:
    return p.conj_swap()


def _parse_var(p_n: int, var) -> int:
    if isinstance(var, int):
        return var
    m = re.fullmatch(r"([zw])(\d+)", var)
    if not m:
        raise ValueError(f"bad variable {var!r}")
    i = int(m.group(2)) - 1
    if not 0 <= i < p_n:
        raise ValueError(f"variable {var!r} out of range")
    return i + (p_n if m.group(1) == "w" else 0)


class RatFunc:
    """Quotient of two polynomials; reduced only by exact divisibility."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly | None = None):
        if den is None:
            den = Poly.const(num.n, 1)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        self.num, self.den = num, den

    @property
    def n(self) -> int:
        return self.num.n

    def reduce(self) -> "RatFunc":
        if self.num.is_zero():
            return RatFunc(self.num, Poly.const(self.n, 1))
        try:
            return RatFunc(self.num.exquo(self.den))
        except NotDivisibleError:
            return self

    def _coerce(self, o) -> "RatFunc":
        if isinstance(o, RatFunc):
            return o
        if isinstance(o, Poly):
            return RatFunc(o)
        return RatFunc(Poly.const(self.n, o))

    def __add__(self, o):
        o = self._coerce(o)
        if self.den == o.den:
            return RatFunc(self.num + o.num, self.den)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __sub__(self, o):
        return self + (-self._coerce(o))

    def __mul__(self, o):
        o = self._coerce(o)
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = self._coerce(o)
        return RatFunc(self.num * o.den, self.den * o.num)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def diff_index(self, k: int) -> "RatFunc":
        dn, dd = self.num.diff_index(k), self.den.diff_index(k)
        if dd.is_zero():
            return RatFunc(dn, self.den)
        return RatFunc(dn * self.den - self.num * dd, self.den * self.den)

    def conj_swap(self) -> "RatFunc":
        return RatFunc(self.num.conj_swap(), self.den.conj_swap())

    def evaluate(self, point: Sequence) -> GaussRat:
        d = self.den.evaluate(point)
        if not d:
            raise PoleError(f"denominator vanishes at {list(point)}")
        return self.num.evaluate(point) / d

    def equals(self, o) -> bool:
        o = self._coerce(o)
        return (self.num * o.den - o.num * self.den).is_zero()

    def __repr__(self):
        return f"({self.num}) / ({self.den})"


def diff(p, var):
    """Formal partial derivative of a :class:`Poly` or :class:`RatFunc`.

    ``var`` is ``"z3"`` / ``"w1"`` (1-based) or a raw slot index."""
    return p.diff_index(_parse_var(p.n, var))


def evaluate(p, point: Sequence) -> GaussRat:
    return p.evaluate(point)


class PolyMatrix:
    """Square matrix of :class:`Poly` entries."""

    __slots__ = ("rows", "n")

    def __init__(self, rows: list[list[Poly]]):
        self.rows = rows
        self.n = rows[0][0].n if rows else 0

    @property
    def dim(self) -> int:
        return len(self.rows)

    @classmethod
    def zeros(cls, dim: int, n: int) -> "PolyMatrix":
        return cls([[Poly(n) for _ in range(dim)] for _ in range(dim)])

    @classmethod
    def identity(cls, dim: int, n: int) -> "PolyMatrix":
        return cls([[Poly.const(n, 1) if i == j else Poly(n) for j in range(dim)] for i in range(dim)])

    @classmethod
    def from_entries(cls, entries, n: int) -> "PolyMatrix":
        """Build from a nested sequence of ints, Fractions, GaussRats or Polys."""
        return cls([[e if isinstance(e, Poly) else Poly.const(n, e) for e in row] for row in entries])

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __add__(self, o: "PolyMatrix") -> "PolyMatrix":
        return PolyMatrix([[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, o.rows)])

    def scale(self, c) -> "PolyMatrix":
        return PolyMatrix([[a.scale(c) for a in r] for r in self.rows])

    def __matmul__(self, o: "PolyMatrix") -> "PolyMatrix":
        dim = self.dim
        out = []
        for i in range(dim):
            row = []
            for j in range(dim):
                acc = Poly(self.n)
                for k in range(dim):
                    a, b = self.rows[i][k], o.rows[k][j]
                    if a.terms and b.terms:
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return PolyMatrix(out)

    def conj_transpose(self) -> "PolyMatrix":
        dim = self.dim
        return PolyMatrix([[self.rows[j][i].conj_swap() for j in range(dim)] for i in range(dim)])

    def block(self, k: int) -> "PolyMatrix":
        return PolyMatrix([r[:k] for r in self.rows[:k]])

    def is_zero(self) -> bool:
        return all(e.is_zero() for r in self.rows for e in r)

    def __eq__(self, o):
        return isinstance(o, PolyMatrix) and self.rows == o.rows

    def evaluate(self, point) -> list[list[GaussRat]]:
        return [[e.evaluate(point) for e in r] for r in self.rows]


def nilpotent_exp(m: PolyMatrix) -> PolyMatrix:
    """``sum_k M^k / k!`` for a nilpotent polynomial matrix (``M^N = 0`` is
    verified by exact powering)."""
    dim = m.dim
    out = PolyMatrix.identity(dim, m.n)
    power = m
    for k in range(1, dim + 1):
        if power.is_zero():
            return out
        if k == dim:
            break
        out = out + power.scale(Fraction(1, factorial(k)))
        power = power @ m
    raise NotNilpotentError(f"M^{dim} != 0")


def det_cofactor(rows: list[list[Poly]]) -> Poly:
    n = len(rows)
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    total = Poly(rows[0][0].n)
    for j, a in enumerate(rows[0]):
        if a.is_zero():
            continue
        minor = [r[:j] + r[j + 1 :] for r in rows[1:]]
        term = a * det_cofactor(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def det_bareiss(rows: list[list[Poly]]) -> Poly:
    """Fraction-free elimination; every division is exact."""
    m = [list(r) for r in rows]
    n = len(m)
    nv = m[0][0].n
    sign = 1
    prev = Poly.const(nv, 1)
    for k in range(n - 1):
        if m[k][k].is_zero():
            swap = next((i for i in range(k + 1, n) if not m[i][k].is_zero()), None)
            if swap is None:
                return Poly(nv)
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[k][k] * m[i][j] - m[i][k] * m[k][j]).exquo(prev)
        prev = m[k][k]
    return m[n - 1][n - 1] if sign == 1 else -m[n - 1][n - 1]


def principal_minor(m: PolyMatrix, k: int) -> Poly:
    """Determinant of the top-left ``k x k`` block (cofactor expansion up to
    ``k = 4``, Bareiss above)."""
    if not 1 <= k <= m.dim:
        raise ValueError(f"minor size {k} out of range 1..{m.dim}")
    block = [r[:k] for r in m.rows[:k]]
    return det_cofactor(block) if k <= 4 else det_bareiss(block)


def _partial_shifts(exps: Sequence[int], vals: Sequence[GaussRat], maxdeg: int, cache: dict):
    """Expand ``prod_k (vals_k + u_k)^{exps_k}`` keeping ``u``-degree <= maxdeg.

    Yields ``(r, coeff)`` with ``r`` the u-exponent tuple."""
    support = [k for k, a in enumerate(exps) if a]
    results = [((), _ONE, 0)]
    for k in support:
        a = exps[k]
        new = []
        for r, c, deg in results:
            for j in range(0, min(a, maxdeg - deg) + 1):
                key = (k, a - j)
                pw = cache.get(key)
                if pw is None:
                    pw = cache[key] = vals[k] ** (a - j)
                coeff = pw * comb(a, j)
                if coeff:
                    new.append((r + ((k, j),) if j else r, c * coeff, deg + j))
        results = new
    n = len(exps)
    for r, c, _ in results:
        e = [0] * n
        for k, j in r:
            e[k] = j
        yield tuple(e), c


def taylor_shift(p: Poly, point: Sequence, zmax: int, wmax: int) -> Poly:
    """Taylor expansion of ``p`` at ``(z, w) = (point, conj(point))`` in the
    displacements ``(u, v)`` (stored in the z- and w-slots), truncated to
    u-degree <= ``zmax`` and v-degree <= ``wmax``.  Exact."""
    n = p.n
    pt = [GaussRat.coerce(x) for x in point]
    zc: dict = {}
    wc: dict = {}
    cz = pt
    cw = [x.conj() for x in pt]
    out: dict = {}
    for e, c in p.terms.items():
        zs = list(_partial_shifts(e[:n], cz, zmax, zc))
        ws = list(_partial_shifts(e[n:], cw, wmax, wc))
        for rz, a in zs:
            ca = c * a
            for rw, b in ws:
                key = rz + rw
                v = ca * b
                prev = out.get(key)
                out[key] = v if prev is None else prev + v
    return Poly._raw(n, {e: c for e, c in out.items() if c})


def poly_from_iterable(n: int, items: Iterable[tuple[Sequence[int], object]]) -> Poly:
    return Poly(n, {tuple(e): c for e, c in items})
