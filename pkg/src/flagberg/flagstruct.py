"""Painted Dynkin diagrams and the combinatorics of flag manifolds G/K.

Black nodes are given as 1-based indices into the canonical simple roots.
The complex structure is always the canonical one, ``Q = R_M^+``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence

import numpy as np

from .exact import SingularSystemError, solve
from .rootsystems import RootDatum, RootVec, build_root_system, root_vector_matrix, weight_inner

Weight = tuple[Fraction, ...]

ENUMERATE_Q_LIMIT = 30


class UnsupportedFlagError(ValueError):
    pass


def parse_group(label: str) -> tuple[str, int]:
    """``"A2"`` -> ``("A", 3)``: the label is the Cartan type ``X_rank``,
    converted to the matrix parameter ``d`` (SU(rank+1) for type A)."""
    m = re.fullmatch(r"\s*([ABCD])\s*(\d+)\s*", label)
    if not m:
        raise ValueError(f"bad group label {label!r}; expected e.g. 'A2', 'C3'")
    family, rank = m.group(1), int(m.group(2))
    return family, rank + 1 if family == "A" else rank


@dataclass(frozen=True)
class PaintedDiagram:
    datum: RootDatum
    black: tuple[int, ...]

    def __post_init__(self):
        black = tuple(sorted(set(self.black)))
        if not black:
            raise ValueError("at least one black node is required")
        if black[0] < 1 or black[-1] > self.datum.rank:
            raise ValueError(f"black nodes must lie in 1..{self.datum.rank}, got {list(self.black)}")
        object.__setattr__(self, "black", black)

    @property
    def white(self) -> tuple[int, ...]:
        return tuple(k for k in range(1, self.datum.rank + 1) if k not in self.black)

    def notation(self) -> str:
        return f"{self.datum.alg.cartan_label} black={list(self.black)}"


@dataclass(frozen=True)
class FlagManifold:
    diagram: PaintedDiagram
    r_k: tuple[RootVec, ...]
    r_m: tuple[RootVec, ...]
    q: tuple[RootVec, ...]
    n: int
    black_positions: tuple[int, ...]

    @property
    def datum(self) -> RootDatum:
        return self.diagram.datum

    @property
    def alg(self):
        return self.diagram.datum.alg

    @property
    def m(self) -> int:
        return len(self.black_positions)

    def label(self) -> str:
        return self.diagram.notation()


@dataclass(frozen=True)
class WeightCoeffs:
    """Coordinates of a weight over the black fundamental weights."""

    c: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "c", tuple(Fraction(x) for x in self.c))

    @property
    def is_kahler(self) -> bool:
        return all(x > 0 for x in self.c)

    @property
    def is_integral(self) -> bool:
        return all(x.denominator == 1 for x in self.c)

    def __len__(self):
        return len(self.c)


@dataclass(frozen=True)
class OmegaCoeffs:
    x: dict
    kahler: bool
    integral: bool


def split_roots(diagram: PaintedDiagram) -> tuple[tuple[RootVec, ...], tuple[RootVec, ...]]:
    """``(R_K, R_M)``: a root is black iff its expansion touches a black node."""
    datum = diagram.datum
    black = [k - 1 for k in diagram.black]
    r_k, r_m = [], []
    for r in datum.roots:
        coords = datum.simple_coords(r)
        (r_m if any(coords[k] for k in black) else r_k).append(r)
    return tuple(r_k), tuple(r_m)


def validate_Q(r_m: Iterable[RootVec], q: Iterable[RootVec], roots: Iterable[RootVec]) -> bool:
    """Maximal closed nonsymmetric test: ``Q u -Q = R_M``, ``Q n -Q = {}``,
    closure under root addition."""
    r_m, q, roots = set(r_m), set(q), set(roots)
    neg = {tuple(-c for c in a) for a in q}
    if q | neg != r_m or q & neg:
        return False
    for a in q:
        for b in q:
            s = tuple(x + y for x, y in zip(a, b))
            if s in roots and s not in q:
                return False
    return True


def enumerate_Q(r_m: Sequence[RootVec], roots: Iterable[RootVec]) -> list[tuple[RootVec, ...]]:
    """All maximal closed nonsymmetric subsets of ``R_M``, by picking one of
    each ``+-`` pair and testing closure.  Deterministic order."""
    if len(r_m) > ENUMERATE_Q_LIMIT:
        raise ValueError(f"|R_M| = {len(r_m)} exceeds the enumeration guard {ENUMERATE_Q_LIMIT}")
    roots = set(roots)
    pairs = sorted({max(a, tuple(-c for c in a)) for a in r_m})
    out = []
    for signs in product((1, -1), repeat=len(pairs)):
        q = tuple(sorted(p if s > 0 else tuple(-c for c in p) for p, s in zip(pairs, signs)))
        if validate_Q(r_m, q, roots):
            out.append(q)
    return sorted(set(out))


def _raw_fundamental_weights(datum: RootDatum, black: Sequence[int]) -> list[Weight]:
    d = datum.alg.d
    basis = datum.basis
    out = []
    for i in black:
        rows, rhs = [], []
        for k, a in enumerate(basis, start=1):
            rows.append([Fraction(2 * x) / weight_inner(a, a) for x in a])
            rhs.append(Fraction(1 if k == i else 0))
        if datum.alg.family == "A":
            rows.append([Fraction(1)] * d)
            rhs.append(Fraction(0))
        out.append(tuple(solve(rows, rhs)))
    return out


def make_flag(family: str, d: int, black: Sequence[int]) -> FlagManifold:
    """Flag manifold of the painted diagram with canonical ``Q = R_M^+``."""
    datum = build_root_system(family, d)
    diagram = PaintedDiagram(datum, tuple(black))
    r_k, r_m = split_roots(diagram)
    q = tuple(sorted(r for r in r_m if r in datum.positive))
    return FlagManifold(diagram, r_k, r_m, q, len(q), diagram.black)


def flag_from_label(label: str, black: Sequence[int]) -> FlagManifold:
    family, d = parse_group(label)
    return make_flag(family, d, black)


def fundamental_weights(flag: FlagManifold) -> list[Weight]:
    """Weights dual to the black simple roots and orthogonal to the white
    ones; type A in the trace-zero gauge."""
    try:
        return _raw_fundamental_weights(flag.datum, flag.black_positions)
    except SingularSystemError as exc:  # pragma: no cover - cannot happen for valid diagrams
        raise RuntimeError(f"fundamental weight system singular: {exc}") from exc


def weight_from_coeffs(flag: FlagManifold, xi: WeightCoeffs) -> Weight:
    if len(xi) != flag.m:
        raise ValueError(f"expected {flag.m} coefficients, got {len(xi)}")
    d = flag.alg.d
    ws = fundamental_weights(flag)
    return tuple(sum((c * w[k] for c, w in zip(xi.c, ws)), Fraction(0)) for k in range(d))


def coeffs_of_weight(flag: FlagManifold, weight: Sequence) -> WeightCoeffs:
    """Inverse of :func:`weight_from_coeffs`; the weight must lie in the span
    of the black fundamental weights."""
    basis = flag.datum.basis
    c = []
    for k in flag.black_positions:
        a = basis[k - 1]
        c.append(2 * weight_inner(weight, a) / weight_inner(a, a))
    for k in flag.diagram.white:
        if weight_inner(weight, basis[k - 1]) != 0:
            raise RuntimeError("weight is not orthogonal to the white simple roots")
    xi = WeightCoeffs(tuple(c))
    if weight_from_coeffs(flag, xi) != tuple(Fraction(x) for x in weight):
        raise RuntimeError("weight is not in the span of the black fundamental weights")
    return xi


def half_sum(roots: Iterable[RootVec], d: int) -> Weight:
    s = [Fraction(0)] * d
    for r in roots:
        for k, c in enumerate(r):
            s[k] += c
    return tuple(x / 2 for x in s)


def ke_coeffs(flag: FlagManifold) -> WeightCoeffs:
    """Candidate Kahler-Einstein class ``2 delta_m`` (sum of the roots in
    ``Q``) over the fundamental weights.  Verified downstream, not trusted."""
    two_delta = tuple(2 * x for x in half_sum(flag.q, flag.alg.d))
    return coeffs_of_weight(flag, two_delta)


def admissible_minor_indices(flag: FlagManifold) -> list[int]:
    """Sizes ``k`` of the leading principal minors that are admissible:
    every ``K^C`` root vector keeps the span of the first ``k`` coordinates
    invariant under right multiplication (zero block ``[:k, k:]``).

    Equals the black node positions for every supported diagram; type D
    diagrams with node ``d-1`` black but node ``d`` white have no such
    minors in the canonical realization and are rejected."""
    alg = flag.alg
    top = alg.matrix_dim - 1 if alg.family == "A" else alg.d
    mats = [root_vector_matrix(alg, r) for r in flag.r_k]
    ks = [k for k in range(1, top + 1) if not any(np.any(e[:k, k:]) for e in mats)]
    if len(ks) != flag.m:
        raise UnsupportedFlagError(
            f"{flag.label()}: found admissible minors {ks} for {flag.m} black nodes; "
            "the canonical realization does not support this painting"
        )
    return ks


def minor_weight(flag: FlagManifold, k: int) -> Weight:
    """Character ``e_1 + ... + e_k`` of the k-th leading minor (projected to
    trace zero in type A)."""
    d = flag.alg.d
    v = [Fraction(1 if i < k else 0) for i in range(d)]
    if flag.alg.family == "A":
        v = [x - Fraction(k, d) for x in v]
    return tuple(v)


def minor_exponents(flag: FlagManifold, xi: WeightCoeffs) -> tuple[Fraction, ...]:
    """Exponents ``b_j`` with ``xi = sum_j b_j (e_1 + ... + e_{k_j})``.

    ``b = c`` except at spin nodes of types B and D, where the fundamental
    weight is half a minor character."""
    ks = admissible_minor_indices(flag)
    weight = weight_from_coeffs(flag, xi)
    cols = [minor_weight(flag, k) for k in ks]
    rows = [[col[i] for col in cols] for i in range(flag.alg.d)]
    return tuple(solve(rows, list(weight)))


def omega_coefficients(flag: FlagManifold, xi: WeightCoeffs) -> OmegaCoeffs:
    """``x_a = 2<xi, a>/<a, a>`` for every black root, with the Kahler and
    integrality predicates of ``xi``."""
    weight = weight_from_coeffs(flag, xi)
    x = {a: 2 * weight_inner(weight, a) / weight_inner(a, a) for a in flag.r_m}
    return OmegaCoeffs(x, xi.is_kahler, xi.is_integral)


def describe(flag: FlagManifold) -> str:
    ws = fundamental_weights(flag)
    lines = [
        f"flag      : {flag.label()}  ({flag.alg.name}, n = {flag.n})",
        f"R_K ({len(flag.r_k)}) : {list(flag.r_k)}",
        f"R_M ({len(flag.r_m)}) : {list(flag.r_m)}",
        f"Q = R_M^+ : {list(flag.q)}",
    ]
    for k, w in zip(flag.black_positions, ws):
        lines.append(f"weight[{k}] : ({', '.join(str(x) for x in w)})")
    try:
        lines.append(f"minors    : {admissible_minor_indices(flag)}")
        lines.append(f"c_KE      : {[str(c) for c in ke_coeffs(flag).c]}")
    except UnsupportedFlagError as exc:
        lines.append(f"minors    : unsupported ({exc})")
    return "\n".join(lines)
