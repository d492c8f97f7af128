"""Group layer: truncated BCH products, Mal'cev coordinates of both kinds,
lattice reduction, Haar sampling, and unipotent automorphisms.

Group elements are coordinate vectors in the second-kind chart
psi(t) = exp(t_1 xi_1) ... exp(t_m xi_m); the lattice is psi(Z^m).  Exact
coordinates are Fractions / ExtScalars; the numeric layer uses floats or numpy
arrays of shape (P,) per coordinate, so every operation vectorizes over point
batches.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.stats import qmc

from . import linalg
from .algebra import NilLieAlgebra, is_numeric_vector, vec_is_zero, zero_vector
from .scalars import ExtScalar

MAX_BCH_STEP = 5


class UnsupportedStepError(ValueError):
    pass


class AutomorphismError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Dynkin series
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def dynkin_terms(step: int) -> tuple[tuple[Fraction, tuple[int, ...]], ...]:
    """Coefficient table of the BCH/Dynkin series truncated at word length ``step``.

    Each entry is (coefficient, word) with word a tuple over {0, 1} (0 = first
    argument, 1 = second); the word stands for its right-nested commutator
    [l_1, [l_2, [..., [l_{k-1}, l_k]]]].  Generated programmatically from
    Dynkin's explicit formula; words longer than ``step`` vanish in a
    ``step``-nilpotent algebra and are omitted.
    """
    if step > MAX_BCH_STEP:
        raise UnsupportedStepError(
            "BCH table is generated up to step %d; got step %d" % (MAX_BCH_STEP, step)
        )
    acc: dict[tuple[int, ...], Fraction] = {}

    def extend(seq: list[tuple[int, int]], used: int):
        n = len(seq)
        if n >= 1:
            total = sum(p + q for p, q in seq)
            coeff = Fraction((-1) ** (n - 1), n) * Fraction(1, total)
            for p, q in seq:
                coeff /= math.factorial(p) * math.factorial(q)
            word = tuple(
                letter for p, q in seq for letter in (0,) * p + (1,) * q
            )
            acc[word] = acc.get(word, Fraction(0)) + coeff
        if used >= step or len(seq) >= step:
            return
        for p in range(0, step - used + 1):
            for q in range(0, step - used - p + 1):
                if p + q == 0:
                    continue
                extend(seq + [(p, q)], used + p + q)

    extend([], 0)
    return tuple((c, w) for w, c in sorted(acc.items()) if c != 0)


def bch(alg: NilLieAlgebra, x: list, y: list) -> list:
    """log(exp(x) exp(y)) by the Dynkin series truncated at the algebra step."""
    numeric = is_numeric_vector(x) or is_numeric_vector(y)
    m = alg.dim
    res = [0.0] * m if numeric else zero_vector(m)
    args = (x, y)
    for coeff, word in dynkin_terms(alg.step):
        v = args[word[-1]]
        for letter in reversed(word[:-1]):
            v = alg.bracket(args[letter], v)
            if not numeric and vec_is_zero(v):
                break
        else:
            c = float(coeff) if numeric else coeff
            for k in range(m):
                res[k] = res[k] + c * v[k]
    return res


def vec_neg(x: list) -> list:
    return [-a for a in x]


# ---------------------------------------------------------------------------
# Coordinate charts
# ---------------------------------------------------------------------------


def _coord_vector(m: int, i: int, t, numeric: bool) -> list:
    v = [0.0] * m if numeric else zero_vector(m)
    v[i] = t
    return v


def second_to_first(alg: NilLieAlgebra, coords: list) -> list:
    """Single-exponential (first-kind) coordinates of psi(coords)."""
    numeric = is_numeric_vector(coords)
    m = alg.dim
    w = [0.0] * m if numeric else zero_vector(m)
    for i in range(m - 1, -1, -1):
        w = bch(alg, _coord_vector(m, i, coords[i], numeric), w)
    return w


def first_to_second(alg: NilLieAlgebra, w: list) -> list:
    """Peel second-kind coordinates off a first-kind (log) vector."""
    numeric = is_numeric_vector(w)
    m = alg.dim
    coords = []
    cur = w
    for i in range(m):
        t = cur[i]
        coords.append(t)
        neg = -t if numeric else -t
        cur = bch(alg, _coord_vector(m, i, neg, numeric), cur)
    return coords


def identity_element(alg: NilLieAlgebra, numeric: bool = False) -> list:
    return [0.0] * alg.dim if numeric else zero_vector(alg.dim)


def multiply(alg: NilLieAlgebra, g: list, h: list) -> list:
    return first_to_second(alg, bch(alg, second_to_first(alg, g), second_to_first(alg, h)))


def inverse(alg: NilLieAlgebra, g: list) -> list:
    return first_to_second(alg, vec_neg(second_to_first(alg, g)))


def commutator(alg: NilLieAlgebra, g: list, h: list) -> list:
    gh = multiply(alg, g, h)
    return multiply(alg, gh, multiply(alg, inverse(alg, g), inverse(alg, h)))


# ---------------------------------------------------------------------------
# Lattice reduction
# ---------------------------------------------------------------------------


def _floor_coord(t):
    if isinstance(t, np.ndarray):
        return np.floor(t)
    if isinstance(t, ExtScalar):
        return Fraction(math.floor(t.as_rational()))
    if isinstance(t, Fraction):
        return Fraction(math.floor(t))
    return float(math.floor(t))


def reduce_mod_lattice(alg: NilLieAlgebra, g: list) -> tuple[list, list]:
    """Fundamental-domain representative and lattice part.

    Returns (rep, lat) with rep = g * gamma, all rep coordinates in [0, 1),
    and gamma = product of psi(-lat_i e_i) in ascending coordinate order.
    """
    numeric = is_numeric_vector(g)
    m = alg.dim
    rep = list(g)
    lat = []
    for i in range(m):
        k = _floor_coord(rep[i])
        lat.append(k)
        if isinstance(k, np.ndarray):
            nz = np.any(k != 0)
        else:
            nz = not linalg.is_zero_scalar(k)
        if nz:
            rep = multiply(alg, rep, _coord_vector(m, i, -k, numeric))
        # guard against float roundoff leaving rep[i] just outside [0, 1)
        if isinstance(rep[i], np.ndarray):
            rep[i] = np.mod(rep[i], 1.0)
        elif isinstance(rep[i], float):
            rep[i] = rep[i] % 1.0
    return rep, lat


# ---------------------------------------------------------------------------
# Haar sampling
# ---------------------------------------------------------------------------


def haar_sample(m: int, count: int, seed: int | None) -> np.ndarray:
    """Deterministic low-discrepancy points in [0, 1)^m.

    Base-2 digital (Sobol) sequence; ``seed`` selects the digital scrambling,
    ``seed=None`` gives the unscrambled sequence.  Haar measure on the
    nilmanifold is Lebesgue measure in the second-kind coordinate cube.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    eng = qmc.Sobol(d=m, scramble=seed is not None, seed=seed)
    n2 = max(1, math.ceil(math.log2(count)))
    pts = eng.random_base2(n2) if count > 1 else eng.random(1)
    return np.ascontiguousarray(pts[:count])


# ---------------------------------------------------------------------------
# Unipotent automorphisms
# ---------------------------------------------------------------------------


class UnipotentAutomorphism:
    """m x m matrix acting on first-kind (Lie algebra) coordinates.

    Validated at construction: (M - I) must be strictly index-raising in the
    adapted basis and M must respect the bracket exactly.
    """

    def __init__(self, alg: NilLieAlgebra, matrix: list[list]):
        self.alg = alg
        m = alg.dim
        if len(matrix) != m or any(len(r) != m for r in matrix):
            raise AutomorphismError("matrix must be %d x %d" % (m, m))
        self.matrix = [[linalg.simplify_scalar(x) for x in row] for row in matrix]
        for k in range(m):
            for i in range(m):
                e = self.matrix[k][i] - (1 if k == i else 0)
                if not linalg.is_zero_scalar(e) and k <= i:
                    raise AutomorphismError(
                        "not unipotent in the adapted ordering: entry (%d, %d)" % (k, i)
                    )
        for i in range(m):
            for j in range(i + 1, m):
                lhs = self.apply_vector(alg.bracket(alg.basis_vector(i), alg.basis_vector(j)))
                rhs = alg.bracket(
                    self.apply_vector(alg.basis_vector(i)),
                    self.apply_vector(alg.basis_vector(j)),
                )
                if not vec_is_zero([a - b for a, b in zip(lhs, rhs)]):
                    raise AutomorphismError(
                        "matrix is not a Lie algebra automorphism on pair (%d, %d)" % (i, j)
                    )
        self._float = np.array(
            [[float(x) if not isinstance(x, ExtScalar) else np.nan for x in row] for row in self.matrix]
        ) if self.is_rational else None

    @property
    def is_rational(self) -> bool:
        return all(
            not isinstance(x, ExtScalar) or x.is_rational() for row in self.matrix for x in row
        )

    def float_matrix(self, assignment=None) -> np.ndarray:
        from .scalars import evaluate_scalar

        if assignment is None and self._float is not None:
            return self._float
        return np.array(
            [[evaluate_scalar(x, assignment or {}) for x in row] for row in self.matrix]
        )

    def apply_vector(self, w: list, assignment=None) -> list:
        """Apply to a first-kind coordinate vector."""
        if is_numeric_vector(w):
            M = self.float_matrix(assignment)
            return [sum(M[k][j] * w[j] for j in range(self.alg.dim)) for k in range(self.alg.dim)]
        m = self.alg.dim
        return [
            sum((self.matrix[k][j] * w[j] for j in range(m)), start=Fraction(0))
            for k in range(m)
        ]

    def compose(self, other: "UnipotentAutomorphism") -> "UnipotentAutomorphism":
        m = self.alg.dim
        prod = [
            [
                sum((self.matrix[i][k] * other.matrix[k][j] for k in range(m)), start=Fraction(0))
                for j in range(m)
            ]
            for i in range(m)
        ]
        return UnipotentAutomorphism(self.alg, prod)

    def preserves_lattice(self) -> bool:
        """Whether the induced group map sends psi(Z^m) into psi(Z^m)."""
        if not self.is_rational:
            return False
        for i in range(self.alg.dim):
            g = apply_automorphism(self.alg, self, _lattice_generator(self.alg, i))
            for t in g:
                t = linalg.simplify_scalar(t)
                if isinstance(t, ExtScalar) or Fraction(t).denominator != 1:
                    return False
        return True


def _lattice_generator(alg: NilLieAlgebra, i: int) -> list:
    v = zero_vector(alg.dim)
    v[i] = Fraction(1)
    return v


def apply_automorphism(alg: NilLieAlgebra, A: UnipotentAutomorphism, g: list, assignment=None) -> list:
    return first_to_second(alg, A.apply_vector(second_to_first(alg, g), assignment))


def adjoint(alg: NilLieAlgebra, g: list) -> UnipotentAutomorphism:
    """Matrix of Ad_g = d/dx (g x g^-1) in the adapted basis, computed exactly."""
    w = second_to_first(alg, g)
    neg_w = vec_neg(w)
    cols = []
    for j in range(alg.dim):
        cols.append(bch(alg, w, bch(alg, alg.basis_vector(j), neg_w)))
    matrix = [[cols[j][k] for j in range(alg.dim)] for k in range(alg.dim)]
    return UnipotentAutomorphism(alg, matrix)


def identity_automorphism(alg: NilLieAlgebra) -> UnipotentAutomorphism:
    return UnipotentAutomorphism(
        alg, [[Fraction(1) if i == j else Fraction(0) for j in range(alg.dim)] for i in range(alg.dim)]
    )
