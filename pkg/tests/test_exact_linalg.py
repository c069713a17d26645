from fractions import Fraction
from math import inf, prod

import pytest
from hypothesis import assume, given, strategies as st
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form as reference_smith_form

from covermonoid.errors import LatticeError
from covermonoid.exact_linalg import (
    RationalCone,
    clear_denominators,
    determinant,
    dual_cone_extreme_rays,
    dual_cone_extreme_rays_bruteforce,
    hermite_normal_form,
    is_unimodular,
    kernel_lattice_basis,
    lattice_index,
    mat_mul,
    rank,
    smith_normal_form,
    solve_homogeneous_system,
    solve_integer_system,
    sublattice_equal,
)

small = st.integers(min_value=-6, max_value=6)


def matrices(rows, cols):
    return st.lists(st.lists(small, min_size=cols, max_size=cols), min_size=rows, max_size=rows)


any_matrix = st.integers(1, 3).flatmap(lambda r: st.integers(1, 3).flatmap(lambda c: matrices(r, c)))
square_matrix = st.integers(1, 3).flatmap(lambda n: matrices(n, n))


def test_smith_normal_form_examples():
    assert smith_normal_form([[1, 0], [0, 1]])[1] == [[1, 0], [0, 1]]
    assert smith_normal_form([[2, 0], [0, 4]])[1] == [[2, 0], [0, 4]]
    assert smith_normal_form([[2, 4], [6, 8]])[1] == [[2, 0], [0, 4]]


@given(any_matrix)
def test_smith_normal_form_factorization(A):
    U, D, V = smith_normal_form(A)
    assert mat_mul(mat_mul(U, A), V) == D
    assert abs(determinant(U)) == 1 and abs(determinant(V)) == 1
    assert all(D[i][j] == 0 for i in range(len(D)) for j in range(len(D[0])) if i != j)
    diagonal = [D[i][i] for i in range(min(len(D), len(D[0])))]
    assert all(d >= 0 for d in diagonal)
    for d, e in zip(diagonal, diagonal[1:]):
        assert (e == 0) if d == 0 else (e % d == 0)


@given(square_matrix)
def test_smith_diagonal_multiplies_to_determinant(A):
    _, D, _ = smith_normal_form(A)
    assert prod(D[i][i] for i in range(len(A))) == abs(determinant(A))


@given(any_matrix)
def test_smith_diagonal_matches_sympy(A):
    k = min(len(A), len(A[0]))
    assume(rank(A) == k)
    _, D, _ = smith_normal_form(A)
    reference = reference_smith_form(Matrix(A), domain=ZZ)
    assert sorted(D[i][i] for i in range(k)) == sorted(abs(int(reference[i, i])) for i in range(k))


@given(any_matrix)
def test_hermite_normal_form(A):
    H, U = hermite_normal_form(A)
    assert mat_mul(U, A) == H
    assert abs(determinant(U)) == 1
    assert rank(H) == rank(A)
    nonzero = [row for row in H if any(row)]
    assert sublattice_equal(nonzero, A, len(A[0]))


def test_kernel_and_lattices():
    assert kernel_lattice_basis([[1, 1]]) == [[1, -1]]
    assert sublattice_equal([(2, 0), (0, 2)], [(2, 0), (0, 2), (2, 2)])
    assert not sublattice_equal([(2, 0), (0, 2)], [(1, 0), (0, 2)])
    assert lattice_index([(2, 0), (0, 2)], [(1, 0), (0, 1)]) == 4
    assert lattice_index([(2, 0)], [(1, 0), (0, 1)]) == inf


def test_lattice_index_needs_a_sublattice():
    with pytest.raises(LatticeError):
        lattice_index([(1, 1)], [(2, 0), (0, 2)])


@given(matrices(2, 3))
def test_kernel_is_saturated(A):
    K = kernel_lattice_basis(A)
    assert len(K) == 3 - rank(A)
    for v in K:
        assert all(sum(a * x for a, x in zip(row, v)) == 0 for row in A)
    if K:
        assert is_unimodular(K)


def test_solve_integer_system():
    x = solve_integer_system([[2, 4]], [6], 2)
    assert 2 * x[0] + 4 * x[1] == 6
    assert solve_integer_system([[2, 4]], [3], 2) is None


def test_clear_denominators():
    assert clear_denominators([Fraction(1, 2), Fraction(3, 4)]) == (2, 3)
    assert clear_denominators([Fraction(-2, 3), Fraction(4, 3)]) == (-1, 2)


def test_dual_cone_examples():
    standard = RationalCone(3, ((1, 0, 0), (0, 1, 0), (0, 0, 1)))
    assert dual_cone_extreme_rays(standard) == [(0, 0, 1), (0, 1, 0), (1, 0, 0)]
    assert dual_cone_extreme_rays(RationalCone(2, ((1, 0), (1, 2)))) == [(0, 1), (2, -1)]
    assert dual_cone_extreme_rays(RationalCone(1, ((1,),))) == [(1,)]


def test_dual_cone_needs_full_rank():
    with pytest.raises(LatticeError):
        dual_cone_extreme_rays(RationalCone(2, ((1, 0), (2, 0))))
    with pytest.raises(LatticeError):
        RationalCone(2, ((0, 0),))


pointed_generator = st.tuples(st.integers(1, 4), st.integers(-3, 3), st.integers(-3, 3))


@given(st.lists(pointed_generator, min_size=3, max_size=7, unique=True))
def test_double_description_matches_bruteforce(gens):
    assume(rank(gens, 3) == 3)
    cone = RationalCone(3, tuple(gens))
    rays = dual_cone_extreme_rays(cone)
    assert rays == dual_cone_extreme_rays_bruteforce(cone)
    for ray in rays:
        assert all(sum(a * b for a, b in zip(g, ray)) >= 0 for g in gens)
        tight = [g for g in gens if sum(a * b for a, b in zip(g, ray)) == 0]
        assert rank(tight, 3) == 2


def test_solve_homogeneous_system():
    solution = solve_homogeneous_system([[1, -1]], [], [[1, 0]], 2)
    assert solution is not None and solution[0] == solution[1] > 0
    assert solve_homogeneous_system([], [], [[1, 0], [-1, 0]], 2) is None
    assert solve_homogeneous_system([], [[1, 0]], [[-1, 1], [0, -1]], 2) is None
