from fractions import Fraction

import pytest

from nillab.algebra import (
    AlgebraValidationError,
    NilLieAlgebra,
    RationalIdeal,
    derived_subalgebra,
    full_algebra,
    lower_central_series,
    rational_hull,
    smallest_ideal_containing,
)
from nillab.scalars import SymbolContext

from oracles import H3_UNITS, H4_UNITS, matrix_to_vec, mmul, vec_to_matrix


def h3():
    return NilLieAlgebra(3, 2, {(0, 1): {2: Fraction(1)}})


def h4():
    return NilLieAlgebra(6, 3, {
        (0, 1): {3: Fraction(1)},
        (1, 2): {4: Fraction(1)},
        (0, 4): {5: Fraction(1)},
        (2, 3): {5: Fraction(-1)},
    })


def test_validation_rejects_non_adapted():
    with pytest.raises(AlgebraValidationError):
        NilLieAlgebra(3, 2, {(0, 1): {1: Fraction(1)}})


def test_validation_rejects_bad_jacobi():
    # [x1,x2]=x4 and [x3,x4]=x5 leave [[x1,x2],x3] unmatched in the Jacobi sum
    with pytest.raises(AlgebraValidationError):
        NilLieAlgebra(5, 3, {
            (0, 1): {3: Fraction(1)},
            (2, 3): {4: Fraction(1)},
        })


def test_validation_rejects_wrong_step():
    with pytest.raises(AlgebraValidationError):
        NilLieAlgebra(3, 1, {(0, 1): {2: Fraction(1)}})


def test_from_brackets_infers_step():
    assert NilLieAlgebra.from_brackets(3, {(0, 1): {2: Fraction(1)}}).step == 2
    assert NilLieAlgebra.from_brackets(2, {}).step == 1
    assert NilLieAlgebra.from_brackets(0, {}).step == 0
    assert h4().step == 3


def test_bracket_matches_matrix_oracle_h3():
    alg = h3()
    pairs = [
        ([1, 2, 3], [4, 5, 6]),
        ([0, 1, 0], [1, 0, 0]),
        ([Fraction(1, 2), Fraction(-1, 3), 0], [2, 0, Fraction(5)]),
    ]
    for x, y in pairs:
        x = [Fraction(v) for v in x]
        y = [Fraction(v) for v in y]
        X = vec_to_matrix(H3_UNITS, 3, x)
        Y = vec_to_matrix(H3_UNITS, 3, y)
        comm = [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(mmul(X, Y), mmul(Y, X))]
        assert alg.bracket(x, y) == matrix_to_vec(H3_UNITS, comm)


def test_bracket_matches_matrix_oracle_h4():
    import random

    alg = h4()
    rng = random.Random(7)
    for _ in range(25):
        x = [Fraction(rng.randint(-6, 6), rng.randint(1, 4)) for _ in range(6)]
        y = [Fraction(rng.randint(-6, 6), rng.randint(1, 4)) for _ in range(6)]
        X = vec_to_matrix(H4_UNITS, 4, x)
        Y = vec_to_matrix(H4_UNITS, 4, y)
        comm = [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(mmul(X, Y), mmul(Y, X))]
        assert alg.bracket(x, y) == matrix_to_vec(H4_UNITS, comm)


def test_lower_central_series():
    series = lower_central_series(full_algebra(h4()))
    dims = [s.dim for s in series]
    assert dims == [6, 3, 1, 0]
    series3 = lower_central_series(full_algebra(h3()))
    assert [s.dim for s in series3] == [3, 1, 0]


def test_smallest_ideal_containing():
    alg = h3()
    ideal = smallest_ideal_containing(alg, [alg.basis_vector(0)])
    assert ideal.dim == 2  # xi1 and [xi1, xi2] = xi3
    assert ideal.is_ideal
    assert ideal.contains(alg.basis_vector(2))


def test_rational_ideal_flags():
    alg = h3()
    center = RationalIdeal(alg, [alg.basis_vector(2)])
    assert center.is_rational and center.is_ideal
    not_ideal = RationalIdeal(alg, [alg.basis_vector(0)])
    assert not not_ideal.is_ideal


def test_rational_hull_slices_symbolic_line():
    # span{(1, t)} in the abelian plane closes to the full plane
    ctx = SymbolContext(("t",))
    alg = NilLieAlgebra(2, 1, {})
    t = ctx.symbol("t")
    V = RationalIdeal(alg, [[ctx.constant(1), t]])
    hull = rational_hull(V)
    assert hull.dim == 2
    assert hull.is_rational


def test_rational_hull_idempotent_on_rational_ideal():
    alg = h3()
    V = RationalIdeal(alg, [alg.basis_vector(2)])
    assert rational_hull(V).equals(V)


def test_derived_subalgebra():
    alg = h4()
    d = derived_subalgebra(full_algebra(alg))
    assert d.dim == 3
    for i in (3, 4, 5):
        assert d.contains(alg.basis_vector(i))
