"""Classical root systems with explicit matrix root vectors.

Roots live in the e-basis as integer tuples of length ``d``.  The four
families are realized as

* ``A``: ``sl(d)``, ``d x d`` matrices,
* ``C``: ``sp(d)``, ``2d x 2d`` block matrices,
* ``D``: ``so(2d)`` preserving ``z_1 z_{d+1} + ... + z_d z_{2d}``,
* ``B``: ``so(2d+1)`` preserving ``2(z_1 z_{d+1} + ... ) + z_{2d+1}^2``,

with the standard canonical simple roots (chain ``e_i - e_{i+1}`` closed by
``2e_d``, ``e_{d-1} + e_d`` or ``e_d``).  Negative root vectors are the
transposes of the positive ones, so ``tr(E_a E_{-a}) > 0`` for every root.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Sequence

import numpy as np

from .exact import solve

RootVec = tuple[int, ...]

FAMILIES = ("A", "B", "C", "D")
_MIN_D = {"A": 2, "B": 1, "C": 1, "D": 2}


class InvalidRootError(ValueError):
    pass


@dataclass(frozen=True)
class ClassicalAlgebra:
    """The complex Lie algebra of SU(d), SO(2d+1), Sp(d) or SO(2d)."""

    family: str
    d: int

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.d < _MIN_D[self.family]:
            raise ValueError(
                f"family {self.family} needs d >= {_MIN_D[self.family]}, got {self.d}"
            )

    @property
    def matrix_dim(self) -> int:
        return {"A": self.d, "B": 2 * self.d + 1}.get(self.family, 2 * self.d)

    @property
    def rank(self) -> int:
        return self.d - 1 if self.family == "A" else self.d

    @property
    def killing_scale(self) -> int:
        d = self.d
        return {"A": 2 * d, "B": 2 * d - 1, "C": 2 * (d + 1), "D": 2 * (d - 1)}[self.family]

    @property
    def name(self) -> str:
        d = self.d
        return {"A": f"su({d})", "B": f"so({2 * d + 1})", "C": f"sp({d})", "D": f"so({2 * d})"}[
            self.family
        ]

    @property
    def cartan_label(self) -> str:
        return f"{self.family}{self.rank}"


def classify_root(family: str, coords: Sequence[int]) -> tuple[str, int, int]:
    """Return ``(kind, i, j)`` for a root; ``kind`` is one of
    ``"diff"`` (e_i - e_j), ``"sum"`` (e_i + e_j, i<j), ``"negsum"``,
    ``"long"`` (2e_i), ``"neglong"``, ``"short"`` (e_i), ``"negshort"``.
    Raises :class:`InvalidRootError` for anything else."""
    nz = [(k, c) for k, c in enumerate(coords) if c != 0]
    if len(nz) == 2:
        (i, a), (j, b) = nz
        if {a, b} == {1, -1}:
            return ("diff", i, j) if a == 1 else ("diff", j, i)
        if a == b == 1 and family != "A":
            return ("sum", i, j)
        if a == b == -1 and family != "A":
            return ("negsum", i, j)
    elif len(nz) == 1:
        i, a = nz[0]
        if family == "C" and a in (2, -2):
            return ("long" if a > 0 else "neglong", i, i)
        if family == "B" and a in (1, -1):
            return ("short" if a > 0 else "negshort", i, i)
    raise InvalidRootError(f"{tuple(coords)} is not a root of type {family}")


def expected_root_count(family: str, d: int) -> int:
    """``|R|`` for the classical families: ``d(d-1)``, ``2d^2``, ``2d^2``, ``2d(d-1)``."""
    return {"A": d * (d - 1), "B": 2 * d * d, "C": 2 * d * d, "D": 2 * d * (d - 1)}[family]


def _unit(d: int, *entries: tuple[int, int]) -> RootVec:
    v = [0] * d
    for k, c in entries:
        v[k] += c
    return tuple(v)


def _all_roots(family: str, d: int) -> list[RootVec]:
    roots = []
    for i in range(d):
        for j in range(d):
            if i != j:
                roots.append(_unit(d, (i, 1), (j, -1)))
    if family in "BCD":
        for i, j in combinations(range(d), 2):
            roots.append(_unit(d, (i, 1), (j, 1)))
            roots.append(_unit(d, (i, -1), (j, -1)))
    if family == "C":
        for i in range(d):
            roots.append(_unit(d, (i, 2)))
            roots.append(_unit(d, (i, -2)))
    if family == "B":
        for i in range(d):
            roots.append(_unit(d, (i, 1)))
            roots.append(_unit(d, (i, -1)))
    return sorted(roots)


def _canonical_basis(family: str, d: int) -> list[RootVec]:
    chain = [_unit(d, (i, 1), (i + 1, -1)) for i in range(d - 1)]
    if family == "A":
        return chain
    if family == "C":
        return chain + [_unit(d, (d - 1, 2))]
    if family == "D":
        return chain + [_unit(d, (d - 2, 1), (d - 1, 1))]
    return chain + [_unit(d, (d - 1, 1))]


@dataclass(frozen=True)
class RootDatum:
    alg: ClassicalAlgebra
    roots: tuple[RootVec, ...]
    basis: tuple[RootVec, ...]
    positive: frozenset[RootVec]
    _simple: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def positive_sorted(self) -> list[RootVec]:
        return sorted(self.positive)

    def is_root(self, v: Sequence[int]) -> bool:
        return tuple(v) in self._simple

    def simple_coords(self, root: Sequence[int]) -> tuple[int, ...]:
        """Integer coordinates of ``root`` over the canonical basis."""
        try:
            return self._simple[tuple(root)]
        except KeyError:
            raise InvalidRootError(f"{tuple(root)} is not in the root system") from None


def _simple_coords(basis: Sequence[RootVec], root: RootVec) -> tuple[int, ...]:
    a = [[Fraction(b[i]) for b in basis] for i in range(len(root))]
    x = solve(a, [Fraction(c) for c in root])
    assert all(v.denominator == 1 for v in x)
    return tuple(int(v) for v in x)


@lru_cache(maxsize=None)
def build_root_system(family: str, d: int) -> RootDatum:
    """Root system of the classical algebra ``(family, d)`` with the canonical
    basis and the induced positive roots."""
    alg = ClassicalAlgebra(family, d)
    roots = _all_roots(family, d)
    basis = _canonical_basis(family, d)
    simple = {r: _simple_coords(basis, r) for r in roots}
    positive = frozenset(r for r, c in simple.items() if all(x >= 0 for x in c))
    return RootDatum(alg, tuple(roots), tuple(basis), positive, simple)


def root_vector_matrix(alg: ClassicalAlgebra, root: Sequence[int]) -> np.ndarray:
    """Integer ``N x N`` root vector ``E_root`` in the block conventions above."""
    family, d = alg.family, alg.d
    if len(root) != d:
        raise InvalidRootError(f"root {tuple(root)} has wrong length for {alg.name}")
    kind, i, j = classify_root(family, root)
    m = np.zeros((alg.matrix_dim, alg.matrix_dim), dtype=np.int64)
    if family == "A":
        m[i, j] = 1
        return m
    if kind == "diff":
        m[i, j] = 1
        m[d + j, d + i] = -1
    elif kind == "sum":
        if family == "C":
            m[i, d + j] = m[j, d + i] = 1
        else:
            m[i, d + j], m[j, d + i] = 1, -1
    elif kind == "negsum":
        if family == "C":
            m[d + i, j] = m[d + j, i] = 1
        else:
            m[d + j, i], m[d + i, j] = 1, -1
    elif kind == "long":
        m[i, d + i] = 1
    elif kind == "neglong":
        m[d + i, i] = 1
    elif kind == "short":
        m[i, 2 * d], m[2 * d, d + i] = 1, -1
    elif kind == "negshort":
        m[2 * d, i], m[d + i, 2 * d] = 1, -1
    return m


def invariant_form(alg: ClassicalAlgebra) -> np.ndarray | None:
    """Gram matrix ``J`` of the form preserved by the group (``None`` for A)."""
    d, n = alg.d, alg.matrix_dim
    if alg.family == "A":
        return None
    j = np.zeros((n, n), dtype=np.int64)
    eye = np.eye(d, dtype=np.int64)
    if alg.family == "C":
        j[:d, d : 2 * d] = eye
        j[d : 2 * d, :d] = -eye
    else:
        j[:d, d : 2 * d] = eye
        j[d : 2 * d, :d] = eye
        if alg.family == "B":
            j[2 * d, 2 * d] = 1
    return j


def in_algebra(alg: ClassicalAlgebra, x: np.ndarray) -> bool:
    j = invariant_form(alg)
    if j is None:
        return int(np.trace(x)) == 0
    return not np.any(x.T @ j + j @ x)


def cartan_basis(alg: ClassicalAlgebra) -> list[np.ndarray]:
    """Diagonal matrices spanning the Cartan subalgebra."""
    d, n = alg.d, alg.matrix_dim
    out = []
    if alg.family == "A":
        for k in range(d - 1):
            h = np.zeros((n, n), dtype=np.int64)
            h[k, k], h[k + 1, k + 1] = 1, -1
            out.append(h)
        return out
    for k in range(d):
        h = np.zeros((n, n), dtype=np.int64)
        h[k, k], h[d + k, d + k] = 1, -1
        out.append(h)
    return out


def root_value(alg: ClassicalAlgebra, root: Sequence[int], h: np.ndarray) -> int:
    """``root(H)`` for a diagonal ``H`` of the Cartan subalgebra."""
    return int(sum(c * h[k, k] for k, c in enumerate(root)))


def bracket(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return x @ y - y @ x


def _scalar_multiple(x: np.ndarray, e: np.ndarray) -> int | None:
    """Integer ``c`` with ``x == c * e`` or ``None``."""
    idx = tuple(np.argwhere(e)[0])
    c, r = divmod(int(x[idx]), int(e[idx]))
    if r or np.any(x != c * e):
        return None
    return c


@dataclass
class RootRelationReport:
    family: str
    d: int
    violations: list[str]

    @property
    def ok(self) -> bool:
        return not self.violations


def check_root_relations(datum: RootDatum) -> RootRelationReport:
    """Verify the Cartan eigen-relations, the bracket structure
    ``[E_a, E_b] in Z E_{a+b}`` and ``tr(E_a E_{-a}) > 0`` in exact integers."""
    alg = datum.alg
    vecs = {r: root_vector_matrix(alg, r) for r in datum.roots}
    bad: list[str] = []
    hs = cartan_basis(alg)
    for r, e in vecs.items():
        if not in_algebra(alg, e):
            bad.append(f"E{r} not in {alg.name}")
        for k, h in enumerate(hs):
            if np.any(bracket(h, e) != root_value(alg, r, h) * e):
                bad.append(f"[H{k}, E{r}] != {r}(H{k}) E{r}")
        neg = tuple(-c for c in r)
        if int(np.trace(e @ vecs[neg])) <= 0:
            bad.append(f"tr(E{r} E{neg}) <= 0")
    for a, b in combinations(datum.roots, 2):
        s = tuple(x + y for x, y in zip(a, b))
        br = bracket(vecs[a], vecs[b])
        if not any(s):
            if np.any(br != np.diag(np.diag(br))) or not np.any(br):
                bad.append(f"[E{a}, E{b}] not a nonzero Cartan element")
        elif s in vecs:
            c = _scalar_multiple(br, vecs[s])
            if c is None or c == 0:
                bad.append(f"[E{a}, E{b}] not a nonzero integer multiple of E{s}")
        elif np.any(br):
            bad.append(f"[E{a}, E{b}] != 0 although {s} is not a root")
    return RootRelationReport(alg.family, alg.d, bad)


def weight_inner(u: Sequence, v: Sequence) -> Fraction:
    """Euclidean pairing of weights in e-coordinates.

    Every consumer uses ratios ``2<x, a>/<a, a>`` which do not see the
    overall Killing normalization."""
    if len(u) != len(v):
        raise ValueError(f"length mismatch: {len(u)} != {len(v)}")
    return sum((Fraction(a) * Fraction(b) for a, b in zip(u, v)), Fraction(0))


def _algebra_basis(datum: RootDatum) -> list[np.ndarray]:
    return cartan_basis(datum.alg) + [root_vector_matrix(datum.alg, r) for r in datum.roots]


def _coordinates(datum: RootDatum, x: np.ndarray) -> list[Fraction]:
    alg = datum.alg
    coeffs = []
    rest = x.astype(object)
    for r in datum.roots:
        e = root_vector_matrix(alg, r)
        idx = tuple(np.argwhere(e)[0])
        c = Fraction(int(rest[idx]), int(e[idx]))
        coeffs.append(c)
        rest = rest - e.astype(object) * c
    diag = [rest[k, k] for k in range(alg.matrix_dim)]
    assert not any(rest[i, j] for i in range(alg.matrix_dim) for j in range(alg.matrix_dim) if i != j)
    hs = cartan_basis(alg)
    a = [[Fraction(int(h[k, k])) for h in hs] for k in range(alg.matrix_dim)]
    hc = solve(a, [Fraction(v) for v in diag])
    return list(hc) + coeffs


def killing_form(datum: RootDatum, x: np.ndarray, y: np.ndarray) -> Fraction:
    """``tr(ad x ad y)`` computed on the Cartan-plus-root-vector basis."""
    basis = _algebra_basis(datum)

    def ad(z):
        cols = [_coordinates(datum, bracket(z, b)) for b in basis]
        return [[cols[j][i] for j in range(len(basis))] for i in range(len(basis))]

    ax, ay = ad(x), ad(y)
    n = len(basis)
    return sum((ax[i][k] * ay[k][i] for i in range(n) for k in range(n)), Fraction(0))
