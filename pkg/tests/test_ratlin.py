"""Tests for exact rational linear algebra.

The independent oracles here are classical formulas that do not share code
with the implementation: cofactor determinants for rank decisions, the
Grassmann dimension formula for sums/intersections, and hand-reduced
echelon forms for small frozen matrices.
"""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from kostantcheck.ratlin import (
    Subspace,
    frac,
    identity_matrix,
    kernel_basis,
    mat_mul,
    mat_vec,
    rank,
    rref,
    solve,
    zero_vector,
)

F = Fraction


def det_cofactor(mat: list[list[Fraction]]) -> Fraction:
    """Independent determinant oracle by Laplace expansion."""
    n = len(mat)
    if n == 1:
        return mat[0][0]
    total = F(0)
    for j in range(n):
        if mat[0][j]:
            minor = [row[:j] + row[j + 1 :] for row in mat[1:]]
            total += (-1) ** j * mat[0][j] * det_cofactor(minor)
    return total


def random_matrix(rng: random.Random, nrows: int, ncols: int) -> list[list[Fraction]]:
    return [[F(rng.randint(-9, 9)) for _ in range(ncols)] for _ in range(nrows)]


def test_frac_coercion() -> None:
    assert frac(3) == F(3)
    assert frac("2/7") == F(2, 7)
    assert frac(F(5, 4)) == F(5, 4)


def test_rref_frozen_example() -> None:
    reduced, rk = rref([[F(2), F(4), F(-2)], [F(1), F(2), F(0)], [F(3), F(6), F(-2)]])
    assert rk == 2
    assert reduced == [
        [F(1), F(2), F(0)],
        [F(0), F(0), F(1)],
        [F(0), F(0), F(0)],
    ]


def test_rref_identity_fixed_point() -> None:
    eye = identity_matrix(4)
    reduced, rk = rref(eye)
    assert reduced == eye and rk == 4


def test_rref_idempotent() -> None:
    rng = random.Random(7)
    for _ in range(20):
        mat = random_matrix(rng, rng.randint(1, 5), rng.randint(1, 5))
        once, rk1 = rref(mat)
        twice, rk2 = rref(once)
        assert once == twice and rk1 == rk2


def test_rank_against_determinant_oracle() -> None:
    rng = random.Random(11)
    for _ in range(40):
        n = rng.randint(1, 4)
        mat = random_matrix(rng, n, n)
        if det_cofactor(mat) != 0:
            assert rank(mat) == n
        else:
            assert rank(mat) < n


def test_rank_row_column_symmetric() -> None:
    rng = random.Random(13)
    for _ in range(25):
        mat = random_matrix(rng, rng.randint(1, 5), rng.randint(1, 5))
        transpose = [list(col) for col in zip(*mat)]
        assert rank(mat) == rank(transpose)


def test_kernel_frozen_example() -> None:
    basis = kernel_basis([[F(1), F(2), F(3)]])
    assert basis == [[F(-2), F(1), F(0)], [F(-3), F(0), F(1)]]


def test_kernel_vectors_annihilated_and_independent() -> None:
    rng = random.Random(17)
    for _ in range(30):
        nrows, ncols = rng.randint(1, 4), rng.randint(1, 6)
        mat = random_matrix(rng, nrows, ncols)
        basis = kernel_basis(mat)
        assert len(basis) == ncols - rank(mat)
        for vec in basis:
            assert mat_vec(mat, vec) == zero_vector(nrows)
        if basis:
            assert rank(basis) == len(basis)


def test_solve_feasible_and_infeasible() -> None:
    mat = [[F(1), F(2)], [F(2), F(4)]]
    assert solve(mat, [F(3), F(6)]) == [F(3), F(0)]
    assert solve(mat, [F(3), F(7)]) is None
    assert solve([[F(2)]], [F(5)]) == [F(5, 2)]


def test_solve_random_consistency() -> None:
    rng = random.Random(19)
    for _ in range(30):
        nrows, ncols = rng.randint(1, 4), rng.randint(1, 4)
        mat = random_matrix(rng, nrows, ncols)
        x = [F(rng.randint(-5, 5)) for _ in range(ncols)]
        rhs = mat_vec(mat, x)
        found = solve(mat, rhs)
        assert found is not None
        assert mat_vec(mat, found) == rhs


def test_mat_mul_associative_spot() -> None:
    rng = random.Random(23)
    a = random_matrix(rng, 3, 4)
    b = random_matrix(rng, 4, 2)
    c = random_matrix(rng, 2, 5)
    assert mat_mul(mat_mul(a, b), c) == mat_mul(a, mat_mul(b, c))


class TestSubspace:
    def test_membership_and_dim(self) -> None:
        space = Subspace(3, [[F(1), F(0), F(1)], [F(0), F(1), F(1)]])
        assert space.dim == 2
        assert space.contains([F(2), F(3), F(5)])
        assert not space.contains([F(0), F(0), F(1)])

    def test_canonical_under_shuffled_spanning_sets(self) -> None:
        rng = random.Random(29)
        for _ in range(15):
            vectors = [[F(rng.randint(-4, 4)) for _ in range(5)] for _ in range(4)]
            space = Subspace(5, vectors)
            shuffled = list(vectors)
            rng.shuffle(shuffled)
            # also throw in a linear combination; the span is unchanged
            shuffled.append([3 * a - b for a, b in zip(vectors[0], vectors[1])])
            other = Subspace(5, shuffled)
            assert space == other
            assert space.basis() == other.basis()

    def test_grassmann_dimension_formula(self) -> None:
        rng = random.Random(31)
        for _ in range(20):
            ambient = rng.randint(2, 6)
            u = Subspace(ambient, [[F(rng.randint(-3, 3)) for _ in range(ambient)]
                                   for _ in range(rng.randint(1, ambient))])
            v = Subspace(ambient, [[F(rng.randint(-3, 3)) for _ in range(ambient)]
                                   for _ in range(rng.randint(1, ambient))])
            total = u.sum_with(v)
            meet = u.intersect(v)
            assert total.dim + meet.dim == u.dim + v.dim
            assert u.contains_subspace(meet) and v.contains_subspace(meet)
            assert total.contains_subspace(u) and total.contains_subspace(v)

    def test_intersect_frozen(self) -> None:
        u = Subspace(3, [[F(1), F(0), F(0)], [F(0), F(1), F(0)]])
        v = Subspace(3, [[F(0), F(1), F(0)], [F(0), F(0), F(1)]])
        meet = u.intersect(v)
        assert meet.dim == 1
        assert meet.basis() == [[F(0), F(1), F(0)]]

    def test_reduce_is_zero_exactly_on_members(self) -> None:
        space = Subspace(4, [[F(1), F(2), F(0), F(0)], [F(0), F(0), F(1), F(-1)]])
        member = [F(3), F(6), F(2), F(-2)]
        assert space.reduce(member) == zero_vector(4)
        assert any(space.reduce([F(1), F(0), F(0), F(0)]))

    def test_insert_reports_growth(self) -> None:
        space = Subspace(2)
        assert space.insert([F(1), F(1)]) is True
        assert space.insert([F(2), F(2)]) is False
        assert space.insert([F(1), F(0)]) is True
        assert space.dim == 2

    def test_ambient_mismatch_raises(self) -> None:
        space = Subspace(3)
        with pytest.raises(ValueError):
            space.reduce([F(1), F(2)])
