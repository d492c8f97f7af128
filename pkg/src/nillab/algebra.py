"""Nilpotent Lie algebras by rational structure constants, with ideal algorithms.

Algebra elements are plain lists of length ``dim`` whose entries are Fractions,
:class:`~nillab.scalars.ExtScalar` values (exact layer), or floats / numpy
arrays (numeric layer used by the spectral estimators).  All subspace
computations happen in the exact layer.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from . import linalg
from .scalars import ExtScalar, rational_slices


class AlgebraValidationError(ValueError):
    pass


def zero_vector(m: int) -> list:
    return [Fraction(0)] * m


def vec_add(x: list, y: list) -> list:
    return [a + b for a, b in zip(x, y)]


def vec_sub(x: list, y: list) -> list:
    return [a - b for a, b in zip(x, y)]


def vec_scale(c, x: list) -> list:
    return [c * a for a in x]


def vec_is_zero(x: list) -> bool:
    return all(linalg.is_zero_scalar(a) for a in x)


def is_numeric_vector(x: list) -> bool:
    return any(isinstance(a, (float, np.ndarray)) for a in x)


class NilLieAlgebra:
    """Nilpotent Lie algebra in a Mal'cev-adapted basis.

    ``brackets`` maps a pair ``(i, j)`` with ``i < j`` (0-based) to a dict
    ``{k: Fraction}`` giving ``[xi_i, xi_j] = sum_k c * xi_k``.  Unlisted pairs
    bracket to zero.  Adaptedness requires ``k > max(i, j)``.
    """

    def __init__(self, dim: int, step: int | None, brackets: dict[tuple[int, int], dict[int, Fraction]]):
        self.dim = dim
        self.step = step
        self.brackets = {
            ij: {k: Fraction(c) for k, c in cs.items() if c != 0}
            for ij, cs in brackets.items()
        }
        self.brackets = {ij: cs for ij, cs in self.brackets.items() if cs}
        self._float_brackets = {
            ij: {k: float(c) for k, c in cs.items()} for ij, cs in self.brackets.items()
        }
        self.validate()

    @classmethod
    def from_brackets(cls, dim: int, brackets: dict[tuple[int, int], dict[int, Fraction]]) -> "NilLieAlgebra":
        """Construct with the nilpotency step inferred from the structure constants."""
        return cls(dim, None, brackets)

    # -- basic structure ----------------------------------------------

    def basis_vector(self, i: int) -> list:
        v = zero_vector(self.dim)
        v[i] = Fraction(1)
        return v

    def basis(self) -> list[list]:
        return [self.basis_vector(i) for i in range(self.dim)]

    def structure_constant(self, i: int, j: int, k: int) -> Fraction:
        if i == j:
            return Fraction(0)
        if i < j:
            return self.brackets.get((i, j), {}).get(k, Fraction(0))
        return -self.brackets.get((j, i), {}).get(k, Fraction(0))

    def bracket(self, x: list, y: list) -> list:
        numeric = is_numeric_vector(x) or is_numeric_vector(y)
        table = self._float_brackets if numeric else self.brackets
        if numeric:
            res = [0.0] * self.dim
        else:
            res = zero_vector(self.dim)
        for (i, j), cs in table.items():
            t = x[i] * y[j] - x[j] * y[i]
            if not numeric and linalg.is_zero_scalar(t):
                continue
            for k, c in cs.items():
                res[k] = res[k] + c * t
        return res

    # -- validation ---------------------------------------------------

    def validate(self) -> None:
        m = self.dim
        for (i, j), cs in self.brackets.items():
            if not (0 <= i < j < m):
                raise AlgebraValidationError("bracket pair out of order: %r" % ((i, j),))
            for k in cs:
                if k <= max(i, j):
                    raise AlgebraValidationError(
                        "not Mal'cev-adapted: [xi_%d, xi_%d] has component on xi_%d" % (i, j, k)
                    )
        # Jacobi identity, exact
        basis = self.basis()
        for i in range(m):
            for j in range(i + 1, m):
                for k in range(j + 1, m):
                    s = vec_add(
                        vec_add(
                            self.bracket(self.bracket(basis[i], basis[j]), basis[k]),
                            self.bracket(self.bracket(basis[j], basis[k]), basis[i]),
                        ),
                        self.bracket(self.bracket(basis[k], basis[i]), basis[j]),
                    )
                    if not vec_is_zero(s):
                        raise AlgebraValidationError(
                            "Jacobi identity fails on basis triple (%d, %d, %d)" % (i, j, k)
                        )
        series = lower_central_series(self)
        if self.step is None:
            self.step = len(series) - 1
        elif len(series) != self.step + 1:
            raise AlgebraValidationError(
                "declared step %d but lower central series has length %d"
                % (self.step, len(series) - 1)
            )

    def __repr__(self):
        return "NilLieAlgebra(dim=%d, step=%d)" % (self.dim, self.step)


class RationalIdeal:
    """Subspace of a nilpotent Lie algebra with computed ideal/rationality flags.

    The basis is kept in deterministic reduced echelon form.  Despite the
    name, instances may represent plain subspaces; ``is_ideal`` records
    whether the span is closed under bracketing with the whole algebra.
    """

    def __init__(self, parent: NilLieAlgebra, vectors: list[list]):
        self.parent = parent
        self.basis = linalg.echelon([list(v) for v in vectors])
        self.is_rational = all(
            all(not isinstance(x, ExtScalar) or x.is_rational() for x in row)
            for row in self.basis
        )
        self.is_ideal = self._check_ideal()

    def _check_ideal(self) -> bool:
        for row in self.basis:
            for e in self.parent.basis():
                if not linalg.in_span(self.basis, self.parent.bracket(row, e)):
                    return False
        return True

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, v: list) -> bool:
        return linalg.in_span(self.basis, v)

    def contains_ideal(self, other: "RationalIdeal") -> bool:
        return all(self.contains(v) for v in other.basis)

    def equals(self, other: "RationalIdeal") -> bool:
        return self.contains_ideal(other) and other.contains_ideal(self)

    def pivot_columns(self) -> list[int]:
        return linalg.pivot_columns(self.basis)

    def __repr__(self):
        return "RationalIdeal(dim=%d, rational=%s, ideal=%s)" % (
            self.dim,
            self.is_rational,
            self.is_ideal,
        )


def span(parent: NilLieAlgebra, vectors: list[list]) -> RationalIdeal:
    return RationalIdeal(parent, vectors)


def full_algebra(parent: NilLieAlgebra) -> RationalIdeal:
    return RationalIdeal(parent, parent.basis())


def _bracket_span(alg: NilLieAlgebra, rows_a: list[list], rows_b: list[list]) -> list[list]:
    out = []
    for a in rows_a:
        for b in rows_b:
            v = alg.bracket(a, b)
            if not vec_is_zero(v):
                out.append(v)
    return out


def lower_central_series(L) -> list:
    """Series [L_1 = L, L_2, ...] with L_{l+1} = [L_l, L], ending in the zero space.

    Accepts a NilLieAlgebra (meaning its full algebra) or a RationalIdeal;
    returns RationalIdeals when given a RationalIdeal, otherwise raw echelon
    bases (used internally during validation).
    """
    if isinstance(L, RationalIdeal):
        alg = L.parent
        base = L.basis
        wrap = lambda rows: RationalIdeal(alg, rows)
    else:
        alg = L
        base = linalg.echelon(alg.basis())
        wrap = lambda rows: rows
    series = [wrap(base)]
    current = base
    while current:
        nxt = linalg.echelon(_bracket_span(alg, current, base))
        if len(nxt) >= len(current):
            raise AlgebraValidationError("lower central series does not decrease; not nilpotent")
        series.append(wrap(nxt))
        current = nxt
    return series


def smallest_ideal_containing(alg: NilLieAlgebra, vectors: list[list]) -> RationalIdeal:
    """Least subspace containing the vectors and closed under bracket with the algebra."""
    rows = linalg.echelon([list(v) for v in vectors])
    while True:
        new = rows + _bracket_span(alg, rows, alg.basis())
        closed = linalg.echelon(new)
        if len(closed) == len(rows):
            return RationalIdeal(alg, closed)
        rows = closed


def rational_hull(V: RationalIdeal, close_ideal: bool = True) -> RationalIdeal:
    """Smallest rational subspace (or ideal) containing V.

    Iterates monomial slicing and, when requested, bracket closure with the
    full algebra until a joint fixpoint; bounded by the algebra dimension.
    """
    alg = V.parent
    rows = V.basis
    for _ in range(alg.dim + 1):
        sliced = []
        for v in rows:
            sliced.extend([list(s) for s in rational_slices(v)])
        if close_ideal:
            closed = smallest_ideal_containing(alg, sliced).basis if sliced else []
        else:
            closed = linalg.echelon(sliced)
        if len(closed) == len(rows) and linalg.spans_equal(closed, rows):
            return RationalIdeal(alg, closed)
        rows = closed
    raise RuntimeError("rational hull did not stabilize")  # pragma: no cover


def derived_subalgebra(V: RationalIdeal) -> RationalIdeal:
    """Span of brackets of V with itself, closed to a subalgebra."""
    alg = V.parent
    rows = linalg.echelon(_bracket_span(alg, V.basis, V.basis))
    while True:
        closed = linalg.echelon(rows + _bracket_span(alg, rows, rows))
        if len(closed) == len(rows):
            return RationalIdeal(alg, closed)
        rows = closed
