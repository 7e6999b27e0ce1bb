from fractions import Fraction as F

import pytest

from flagberg.catalog import CATALOG, catalog_flag
from flagberg.flagstruct import (
    PaintedDiagram,
    UnsupportedFlagError,
    WeightCoeffs,
    admissible_minor_indices,
    coeffs_of_weight,
    enumerate_Q,
    fundamental_weights,
    ke_coeffs,
    make_flag,
    minor_exponents,
    omega_coefficients,
    parse_group,
    split_roots,
    validate_Q,
)
from flagberg.rootsystems import build_root_system, weight_inner


def test_parse_group_uses_cartan_rank():
    assert parse_group("A2") == ("A", 3)
    assert parse_group("C3") == ("C", 3)
    with pytest.raises(ValueError):
        parse_group("E6")


def test_diagram_validation():
    datum = build_root_system("A", 3)
    assert PaintedDiagram(datum, (2, 1, 2)).black == (1, 2)
    with pytest.raises(ValueError):
        PaintedDiagram(datum, ())
    with pytest.raises(ValueError):
        PaintedDiagram(datum, (3,))


def test_split_roots():
    r_k, r_m = split_roots(PaintedDiagram(build_root_system("A", 2), (1,)))
    assert r_k == () and set(r_m) == {(1, -1), (-1, 1)}
    r_k, r_m = split_roots(PaintedDiagram(build_root_system("A", 3), (1,)))
    assert set(r_k) == {(0, 1, -1), (0, -1, 1)}
    assert set(r_m) == {(1, -1, 0), (-1, 1, 0), (1, 0, -1), (-1, 0, 1)}
    full = make_flag("A", 3, (1, 2))
    assert full.r_k == () and len(full.r_m) == 6


def test_validate_and_enumerate_Q():
    full = make_flag("A", 3, (1, 2))
    roots = full.datum.roots
    assert validate_Q(full.r_m, full.q, roots)
    assert not validate_Q(full.r_m, [(1, -1, 0), (0, 1, -1), (-1, 0, 1)], roots)
    assert len(enumerate_Q(full.r_m, roots)) == 6
    assert len(enumerate_Q(make_flag("A", 3, (1,)).r_m, roots)) == 2
    assert len(enumerate_Q([(1, -1), (-1, 1)], [(1, -1), (-1, 1)])) == 2


def test_enumerate_guard():
    with pytest.raises(ValueError):
        enumerate_Q([(k,) for k in range(31)], [])


@pytest.mark.parametrize("name", list(CATALOG))
def test_catalog_canonical_Q(name):
    flag = catalog_flag(name)
    assert validate_Q(flag.r_m, flag.q, flag.datum.roots)
    assert flag.n * 2 == len(flag.r_m)
    if len(flag.r_m) <= 12:
        assert flag.q in enumerate_Q(flag.r_m, flag.datum.roots)


def test_fundamental_weights():
    (w,) = fundamental_weights(make_flag("A", 2, (1,)))
    assert w == (F(1, 2), F(-1, 2))
    (w,) = fundamental_weights(make_flag("A", 4, (1,)))
    assert w == (F(3, 4), F(-1, 4), F(-1, 4), F(-1, 4))
    w1, w2 = fundamental_weights(make_flag("A", 3, (1, 2)))
    assert tuple(a + b for a, b in zip(w1, w2)) == (1, 0, -1)


@pytest.mark.parametrize("family,d,black", [("B", 3, (1, 3)), ("C", 3, (2,)), ("D", 4, (1, 3, 4))])
def test_fundamental_weight_duality(family, d, black):
    flag = make_flag(family, d, black)
    basis = flag.datum.basis
    for k, w in zip(black, fundamental_weights(flag)):
        for j, a in enumerate(basis, start=1):
            assert 2 * weight_inner(w, a) / weight_inner(a, a) == (1 if j == k else 0)


@pytest.mark.parametrize(
    "family,d,black,expected",
    [
        ("A", 2, (1,), (2,)),
        ("A", 3, (1,), (3,)),
        ("A", 5, (1,), (5,)),
        ("A", 3, (1, 2), (2, 2)),
        ("A", 4, (2,), (4,)),
        ("C", 2, (1,), (4,)),
        ("B", 2, (1,), (3,)),
        ("B", 3, (1,), (5,)),
    ],
)
def test_ke_coeffs(family, d, black, expected):
    # CP^d: c = d + 1; quadrics Q_k: c = k; Gr(2,4): 4; Sp(2)/U(1)xSp(1) = CP^3: 4
    assert ke_coeffs(make_flag(family, d, black)).c == expected


def test_ke_coeffs_positive_up_to_rank_5():
    for family, lo in (("A", 2), ("B", 1), ("C", 1), ("D", 3)):
        for d in range(lo, 6 if family != "A" else 7):
            rank = d - 1 if family == "A" else d
            for k in range(1, rank + 1):
                assert ke_coeffs(make_flag(family, d, (k,))).is_kahler


def test_weight_roundtrip():
    flag = make_flag("B", 3, (1, 3))
    xi = WeightCoeffs((F(3, 2), 5))
    from flagberg.flagstruct import weight_from_coeffs

    assert coeffs_of_weight(flag, weight_from_coeffs(flag, xi)) == xi


def test_admissible_minors():
    assert admissible_minor_indices(make_flag("A", 4, (2,))) == [2]
    assert admissible_minor_indices(make_flag("A", 3, (1, 2))) == [1, 2]
    assert admissible_minor_indices(make_flag("C", 2, (1,))) == [1]
    assert admissible_minor_indices(make_flag("D", 4, (3, 4))) == [3, 4]
    with pytest.raises(UnsupportedFlagError):
        admissible_minor_indices(make_flag("D", 4, (3,)))


def test_minor_exponents_at_spin_nodes():
    # away from spin nodes b = c; a spin fundamental weight is half a minor character
    assert minor_exponents(make_flag("A", 3, (1, 2)), WeightCoeffs((2, 2))) == (2, 2)
    assert minor_exponents(make_flag("B", 2, (2,)), WeightCoeffs((4,))) == (2,)
    assert minor_exponents(make_flag("D", 4, (3, 4)), WeightCoeffs((4, 4))) == (4, 0)


def test_omega_coefficients():
    om = omega_coefficients(make_flag("A", 2, (1,)), WeightCoeffs((2,)))
    assert om.x[(1, -1)] == 2 and om.kahler and om.integral
    om = omega_coefficients(make_flag("A", 3, (1,)), WeightCoeffs((3,)))
    assert om.x[(1, -1, 0)] == om.x[(1, 0, -1)] == 3
    om = omega_coefficients(make_flag("A", 3, (1, 2)), WeightCoeffs((2, 2)))
    assert om.x[(1, 0, -1)] == 4 and om.x[(1, -1, 0)] == om.x[(0, 1, -1)] == 2
    assert not omega_coefficients(make_flag("A", 3, (1, 2)), WeightCoeffs((F(1, 2), -1))).kahler


def test_black_order_equivariance():
    a = make_flag("A", 4, (1, 3))
    b = make_flag("A", 4, (3, 1))
    assert a == b and ke_coeffs(a) == ke_coeffs(b)
