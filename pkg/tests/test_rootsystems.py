from fractions import Fraction

import numpy as np
import pytest

from flagberg.rootsystems import (
    ClassicalAlgebra,
    InvalidRootError,
    build_root_system,
    check_root_relations,
    classify_root,
    expected_root_count,
    in_algebra,
    killing_form,
    root_vector_matrix,
    weight_inner,
)


def _count_by_enumeration(family, d):
    # independent count: integer vectors of the allowed shapes
    count = d * (d - 1)
    if family in "BCD":
        count += d * (d - 1)  # +-(e_i + e_j), i < j
    if family in "BC":
        count += 2 * d
    return count


@pytest.mark.parametrize("family", "ABCD")
@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_root_counts(family, d):
    datum = build_root_system(family, d)
    assert len(datum.roots) == _count_by_enumeration(family, d) == expected_root_count(family, d)
    assert len(datum.positive) * 2 == len(datum.roots)


def test_canonical_bases():
    assert build_root_system("A", 3).basis == ((1, -1, 0), (0, 1, -1))
    c2 = build_root_system("C", 2)
    assert c2.basis == ((1, -1), (0, 2))
    assert {(2, 0), (0, 2), (-2, 0), (0, -2)} <= set(c2.roots)
    assert build_root_system("D", 3).basis[-1] == (0, 1, 1)
    assert build_root_system("B", 2).basis[-1] == (0, 1)


def test_simple_coords():
    b3 = build_root_system("B", 3)
    assert b3.simple_coords((1, 0, 0)) == (1, 1, 1)
    assert b3.simple_coords((1, 1, 0)) == (1, 2, 2)
    with pytest.raises(InvalidRootError):
        b3.simple_coords((2, 0, 0))


def test_root_vectors_match_block_conventions():
    su3 = ClassicalAlgebra("A", 3)
    e = root_vector_matrix(su3, (1, -1, 0))
    assert e[0, 1] == 1 and np.count_nonzero(e) == 1

    sp2 = ClassicalAlgebra("C", 2)
    e = root_vector_matrix(sp2, (1, 1))
    expected = np.zeros((4, 4), dtype=int)
    expected[0, 3] = expected[1, 2] = 1  # [[0, E12 + E21], [0, 0]]
    assert np.array_equal(e, expected)

    so5 = ClassicalAlgebra("B", 2)
    e = root_vector_matrix(so5, (1, 0))
    expected = np.zeros((5, 5), dtype=int)
    expected[0, 4] = 1
    expected[4, 2] = -1
    assert np.array_equal(e, expected)


@pytest.mark.parametrize("family", "ABCD")
@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_root_relations(family, d):
    rep = check_root_relations(build_root_system(family, d))
    assert rep.ok, rep.violations[:3]


@pytest.mark.parametrize("family,d", [("B", 3), ("C", 3), ("D", 4)])
def test_membership_and_transpose(family, d):
    datum = build_root_system(family, d)
    for r in datum.roots:
        e = root_vector_matrix(datum.alg, r)
        assert in_algebra(datum.alg, e)
        neg = root_vector_matrix(datum.alg, tuple(-c for c in r))
        assert np.array_equal(neg, e.T)


@pytest.mark.parametrize("family,d", [("A", 3), ("B", 2), ("C", 2), ("D", 3)])
def test_killing_scale(family, d):
    datum = build_root_system(family, d)
    alg = datum.alg
    r = datum.positive_sorted[0]
    x = root_vector_matrix(alg, r)
    y = root_vector_matrix(alg, tuple(-c for c in r))
    h = np.zeros((alg.matrix_dim,) * 2, dtype=np.int64)
    h[0, 0], h[1, 1] = 1, -1
    if family != "A":
        h[d, d], h[d + 1, d + 1] = -1, 1
    for a, b in ((x, y), (h, h)):
        assert killing_form(datum, a, b) == alg.killing_scale * int(np.trace(a @ b))


def test_classify_and_errors():
    assert classify_root("C", (0, -2)) == ("neglong", 1, 1)
    with pytest.raises(InvalidRootError):
        classify_root("D", (1, 0))
    with pytest.raises(ValueError):
        ClassicalAlgebra("D", 1)
    with pytest.raises(ValueError):
        weight_inner((1, 2), (1,))
    assert weight_inner((Fraction(1, 2), 1), (2, 3)) == 4
