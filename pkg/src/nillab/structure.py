"""Affine nilsystems and their subgroup algorithms.

The modeled map is T(x Gamma) = g_tau * A(x) Gamma on X = G0/Gamma0, where A
is a lattice-preserving unipotent automorphism.  This realizes translation by
tau on the semidirect extension G = G0 x| Z, so the conjugation derivative is
B = Ad_{g_tau} o A.  The module computes the commutator ideal of tau, its
rational closure (the discrete-spectrum kernel), the Leibman group's identity
component, the factor tower, quotient systems, and an exact ergodicity test.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import algebra as la
from . import group as gp
from . import linalg
from .algebra import NilLieAlgebra, RationalIdeal
from .group import UnipotentAutomorphism
from .scalars import ExtScalar, SymbolContext, evaluate_scalar


class SystemValidationError(ValueError):
    pass


class AffineNilsystem:
    """Nilmanifold G0/Gamma0 with the affine map x -> g_tau * A(x).

    ``second`` optionally holds a commuting second generator (A2, g_tau2) for
    Z^2-systems; commutation is checked exactly at construction.
    """

    def __init__(
        self,
        alg: NilLieAlgebra,
        A: UnipotentAutomorphism,
        g_tau: list,
        context: SymbolContext | None = None,
        second: tuple[UnipotentAutomorphism, list] | None = None,
        name: str = "",
        default_assignment: dict[str, float] | None = None,
    ):
        self.algebra = alg
        self.A = A
        self.g_tau = list(g_tau)
        self.context = context if context is not None else SymbolContext(())
        self.second = second
        self.name = name
        self.default_assignment = dict(default_assignment or {})
        if len(self.g_tau) != alg.dim:
            raise SystemValidationError("translation part has wrong dimension")
        if not A.is_rational or not A.preserves_lattice():
            raise SystemValidationError("automorphism must preserve the lattice Q-structure")
        if second is not None:
            A2, g2 = second
            if not A2.is_rational or not A2.preserves_lattice():
                raise SystemValidationError("second automorphism must preserve the lattice")
            self._check_commuting()

    def _check_commuting(self) -> None:
        A1, g1 = self.A, self.g_tau
        A2, g2 = self.second
        m = self.algebra.dim
        for i in range(m):
            for j in range(m):
                d = A1.compose(A2).matrix[i][j] - A2.compose(A1).matrix[i][j]
                if not linalg.is_zero_scalar(d):
                    raise SystemValidationError("generators' automorphisms do not commute")
        # shift defect of T1 T2 vs T2 T1 must lie in the lattice
        alg = self.algebra
        s12 = gp.multiply(alg, g1, gp.apply_automorphism(alg, A1, g2))
        s21 = gp.multiply(alg, g2, gp.apply_automorphism(alg, A2, g1))
        defect = gp.multiply(alg, gp.inverse(alg, s21), s12)
        for t in defect:
            t = linalg.simplify_scalar(t)
            if isinstance(t, ExtScalar) or Fraction(t).denominator != 1:
                raise SystemValidationError("generators do not commute modulo the lattice")

    # -- the tau-conjugation and exact dynamics -----------------------

    def conjugation(self, g: list) -> list:
        """tau g tau^{-1} as an element of G0: g_tau * A(g) * g_tau^{-1}."""
        alg = self.algebra
        return gp.multiply(
            alg,
            gp.multiply(alg, self.g_tau, gp.apply_automorphism(alg, self.A, g)),
            gp.inverse(alg, self.g_tau),
        )

    def tau_commutator(self, g: list) -> list:
        """[tau, g] = (tau g tau^{-1}) g^{-1}, an element of G0."""
        alg = self.algebra
        return gp.multiply(alg, self.conjugation(g), gp.inverse(alg, g))

    def apply_exact(self, x: list) -> list:
        """One step of T on exact coordinates (no lattice reduction)."""
        alg = self.algebra
        return gp.multiply(alg, self.g_tau, gp.apply_automorphism(alg, self.A, x))

    # -- numeric dynamics ---------------------------------------------

    def numeric(self, assignment: dict[str, float] | None = None) -> "NumericSystem":
        merged = dict(self.default_assignment)
        merged.update(assignment or {})
        return NumericSystem(self, merged)


class NumericSystem:
    """Double-precision dynamics of an affine nilsystem, vectorized over batch points."""

    def __init__(self, sys: AffineNilsystem, assignment: dict[str, float]):
        self.sys = sys
        self.alg = sys.algebra
        self.assignment = dict(assignment)
        self.A_float = sys.A.float_matrix()
        self.g_float = [evaluate_scalar(t, assignment) for t in sys.g_tau]
        self.A_inv_float = np.array(_float_inverse(sys.A.matrix), dtype=float)
        if sys.second is not None:
            A2, g2 = sys.second
            self.A2_float = A2.float_matrix()
            self.g2_float = [evaluate_scalar(t, assignment) for t in g2]
            self.A2_inv_float = np.array(_float_inverse(A2.matrix), dtype=float)

    def _affine(self, pts: list, M: np.ndarray, g: list) -> list:
        alg = self.alg
        w = gp.second_to_first(alg, pts)
        w = [sum(M[k][j] * w[j] for j in range(alg.dim)) for k in range(alg.dim)]
        x = gp.first_to_second(alg, w)
        rep, _ = gp.reduce_mod_lattice(alg, gp.multiply(alg, g, x))
        return rep

    def step(self, pts: list) -> list:
        """pts is a list of m arrays (or floats); returns T(pts), reduced."""
        return self._affine(pts, self.A_float, self.g_float)

    def _affine_inverse(self, pts: list, Minv: np.ndarray, g: list) -> list:
        alg = self.alg
        y = gp.multiply(alg, gp.inverse(alg, g), pts)
        w = gp.second_to_first(alg, y)
        w = [sum(Minv[k][j] * w[j] for j in range(alg.dim)) for k in range(alg.dim)]
        rep, _ = gp.reduce_mod_lattice(alg, gp.first_to_second(alg, w))
        return rep

    def step_inverse(self, pts: list) -> list:
        return self._affine_inverse(pts, self.A_inv_float, self.g_float)

    def step2(self, pts: list) -> list:
        return self._affine(pts, self.A2_float, self.g2_float)

    def step2_inverse(self, pts: list) -> list:
        return self._affine_inverse(pts, self.A2_inv_float, self.g2_float)

    def sample_points(self, count: int, seed: int | None) -> list:
        pts = gp.haar_sample(self.alg.dim, count, seed)
        return [np.ascontiguousarray(pts[:, j]) for j in range(self.alg.dim)]


def _float_inverse(matrix: list[list]) -> list[list]:
    m = len(matrix)
    aug = [[Fraction(matrix[i][j]) for j in range(m)] + [Fraction(1 if j == i else 0) for j in range(m)] for i in range(m)]
    for col in range(m):
        piv = next(i for i in range(col, m) if aug[i][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for i in range(m):
            if i != col and aug[i][col] != 0:
                c = aug[i][col]
                aug[i] = [x - c * y for x, y in zip(aug[i], aug[col])]
    return [[float(aug[i][m + j]) for j in range(m)] for i in range(m)]


# ---------------------------------------------------------------------------
# Subgroup algorithms
# ---------------------------------------------------------------------------


def total_conjugation(sys: AffineNilsystem) -> UnipotentAutomorphism:
    """B = Ad_{g_tau} o A, the derivative of x -> tau x tau^{-1}."""
    ad = gp.adjoint(sys.algebra, sys.g_tau)
    return ad.compose(sys.A)


def tau_commutator_ideal(sys: AffineNilsystem) -> RationalIdeal:
    """Smallest ideal containing the image of B - I: the Lie algebra of [tau, G]."""
    alg = sys.algebra
    B = total_conjugation(sys)
    cols = []
    for i in range(alg.dim):
        v = B.apply_vector(alg.basis_vector(i))
        v[i] = v[i] - 1
        if not la.vec_is_zero(v):
            cols.append(v)
    return la.smallest_ideal_containing(alg, cols)


def rational_closure_J(sys: AffineNilsystem, V: RationalIdeal) -> RationalIdeal:
    """Smallest rational connected normal subgroup containing V, at algebra level."""
    return la.rational_hull(V, close_ideal=True)


def discrete_factor_subgroup(sys: AffineNilsystem) -> RationalIdeal:
    """Kernel of the discrete-spectrum factor: the rational closure of [tau, G]."""
    return rational_closure_J(sys, tau_commutator_ideal(sys))


def _automorphism_invariant(A: UnipotentAutomorphism, V: RationalIdeal) -> bool:
    return all(V.contains(A.apply_vector(v)) for v in V.basis)


def leibman_identity_component(sys: AffineNilsystem) -> RationalIdeal:
    """Lie algebra of the identity component of the Leibman group.

    Stage 1 takes the rational closure of the tau-commutator ideal; in the
    quotient the induced map is a translation, and stage 2 adds the smallest
    rational subspace carrying the irrational part of that translation.
    """
    alg = sys.algebra
    h0 = rational_closure_J(sys, tau_commutator_ideal(sys))
    if h0.dim == alg.dim:
        return h0
    fd = quotient_system(sys, h0)
    qalg = fd.quotient.algebra
    wbar = gp.second_to_first(qalg, fd.quotient.g_tau)
    lifts = []
    for s in _nonconstant_slices(wbar):
        lifts.append(fd.lift_vector(s))
    hH = la.rational_hull(
        RationalIdeal(alg, h0.basis + lifts), close_ideal=True
    )
    if not _automorphism_invariant(sys.A, hH):
        raise SystemValidationError("Leibman component is not automorphism-invariant")
    return hH


def _nonconstant_slices(v: list) -> list[list[Fraction]]:
    """Rational slice vectors of the non-constant monomials of v."""
    from .scalars import scalar_context

    ctx = scalar_context(v)
    out = []
    lifted = [ExtScalar.lift(x, ctx) for x in v]
    monos = sorted({e for x in lifted for e in x.terms if any(e)})
    for e in monos:
        out.append([x.terms.get(e, Fraction(0)) for x in lifted])
    return out


def leibman_lcs(sys: AffineNilsystem, k: int) -> RationalIdeal:
    """Lie algebra of H_{k+1}, the (k+1)-st lower-central term of the Leibman group.

    Iterates l_{j+1} = smallest ideal containing [l_j, h_H] + (B - I) l_j,
    taking the rational hull at each stage since the group-level H_{j+1} is
    rational.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    alg = sys.algebra
    hH = leibman_identity_component(sys)
    B = total_conjugation(sys)
    cur = hH
    for _ in range(k):
        gens = []
        for v in cur.basis:
            Bv = B.apply_vector(v)
            gens.append([a - b for a, b in zip(Bv, v)])
            for h in hH.basis:
                gens.append(alg.bracket(v, h))
        gens = [g for g in gens if not la.vec_is_zero(g)]
        if not gens:
            return RationalIdeal(alg, [])
        cur = la.rational_hull(la.smallest_ideal_containing(alg, gens), close_ideal=True)
    return cur


# ---------------------------------------------------------------------------
# Quotient systems
# ---------------------------------------------------------------------------


@dataclass
class FactorData:
    """Quotient of an affine nilsystem by a rational invariant ideal.

    ``proj_matrix`` acts on first-kind coordinates; ``nonpivot`` lists the
    parent coordinates that survive as quotient coordinates.
    """

    kernel: RationalIdeal
    quotient: AffineNilsystem
    proj_matrix: list[list[Fraction]]
    nonpivot: list[int]

    def project_log(self, w: list) -> list:
        if la.is_numeric_vector(w):
            return [sum(float(c) * x for c, x in zip(row, w)) for row in self.proj_matrix]
        out = []
        for row in self.proj_matrix:
            acc = Fraction(0)
            for c, x in zip(row, w):
                if c:
                    acc = acc + c * x
            out.append(acc)
        return out

    def project_point(self, x: list) -> list:
        """Second-kind coordinates downstairs of a point given upstairs."""
        parent = self.kernel.parent
        qalg = self.quotient.algebra
        w = gp.second_to_first(parent, x)
        return gp.first_to_second(qalg, self.project_log(w))

    def lift_vector(self, v: list) -> list:
        """Section of a quotient first-kind vector: insert zeros at kernel pivots."""
        parent_dim = self.kernel.parent.dim
        out = [Fraction(0)] * parent_dim
        for q, i in enumerate(self.nonpivot):
            out[i] = v[q]
        return out


def quotient_system(sys: AffineNilsystem, N: RationalIdeal) -> FactorData:
    """Validated quotient system on G0/N with the induced automorphism and shift."""
    alg = sys.algebra
    if N.parent is not alg:
        raise SystemValidationError("ideal belongs to a different algebra")
    if N.dim and (not N.is_rational or not N.is_ideal):
        raise SystemValidationError("kernel must be a rational ideal")
    if not _automorphism_invariant(sys.A, N):
        raise SystemValidationError("kernel is not invariant under the automorphism")
    m = alg.dim
    pivots = N.pivot_columns()
    nonpivot = [j for j in range(m) if j not in pivots]
    mq = len(nonpivot)
    # projection: reduce a first-kind vector by N's echelon basis, keep nonpivots
    proj_rows = []
    reduced_basis = []
    for j in range(m):
        reduced_basis.append(linalg.reduce_vector(N.basis, alg.basis_vector(j)))
    for q, i in enumerate(nonpivot):
        proj_rows.append([Fraction(reduced_basis[j][i]) for j in range(m)])
    # quotient structure constants
    brackets: dict[tuple[int, int], dict[int, Fraction]] = {}
    for a in range(mq):
        for b in range(a + 1, mq):
            v = alg.bracket(alg.basis_vector(nonpivot[a]), alg.basis_vector(nonpivot[b]))
            red = linalg.reduce_vector(N.basis, v)
            cs = {}
            for c in range(mq):
                val = linalg.simplify_scalar(red[nonpivot[c]])
                if not linalg.is_zero_scalar(val):
                    cs[c] = Fraction(val)
            if cs:
                brackets[(a, b)] = cs
    qalg = NilLieAlgebra.from_brackets(mq, brackets)
    fd_proto = FactorData(kernel=N, quotient=None, proj_matrix=proj_rows, nonpivot=nonpivot)  # type: ignore[arg-type]
    # induced automorphism
    qmat = []
    for b in range(mq):
        col = fd_proto.project_log(sys.A.apply_vector(alg.basis_vector(nonpivot[b])))
        qmat.append(col)
    qA = UnipotentAutomorphism(qalg, [[qmat[b][k] for b in range(mq)] for k in range(mq)])
    qg = gp.first_to_second(qalg, fd_proto.project_log(gp.second_to_first(alg, sys.g_tau)))
    second = None
    if sys.second is not None:
        A2, g2 = sys.second
        if not _automorphism_invariant(A2, N):
            raise SystemValidationError("kernel is not invariant under the second automorphism")
        qmat2 = []
        for b in range(mq):
            qmat2.append(fd_proto.project_log(A2.apply_vector(alg.basis_vector(nonpivot[b]))))
        qA2 = UnipotentAutomorphism(qalg, [[qmat2[b][k] for b in range(mq)] for k in range(mq)])
        qg2 = gp.first_to_second(qalg, fd_proto.project_log(gp.second_to_first(alg, g2)))
        second = (qA2, qg2)
    qsys = AffineNilsystem(qalg, qA, qg, context=sys.context, second=second,
                           name=sys.name + "/N" if sys.name else "",
                           default_assignment=sys.default_assignment)
    return FactorData(kernel=N, quotient=qsys, proj_matrix=proj_rows, nonpivot=nonpivot)


# ---------------------------------------------------------------------------
# Ergodicity
# ---------------------------------------------------------------------------


@dataclass
class ErgodicityVerdict:
    ergodic: bool
    witness: list[int] | None  # frequency vector of an invariant character

    def __repr__(self):
        if self.ergodic:
            return "ergodic"
        return "nonergodic(witness=%r)" % (self.witness,)


def ergodicity_test(sys: AffineNilsystem) -> ErgodicityVerdict:
    """Exact ergodicity decision via the maximal torus factor.

    The system is reduced modulo the rational closure of the derived algebra
    together with the tau-commutator ideal; on the resulting torus the induced
    map is a rotation, and ergodicity is equivalent to no nonzero integer
    frequency vector pairing rationally with the rotation coordinates.
    """
    alg = sys.algebra
    if alg.dim == 0:
        return ErgodicityVerdict(True, None)
    derived = la.derived_subalgebra(la.full_algebra(alg))
    tau_ideal = tau_commutator_ideal(sys)
    N = la.rational_hull(
        RationalIdeal(alg, derived.basis + tau_ideal.basis), close_ideal=True
    )
    if N.dim == alg.dim:
        # torus factor is a point; the only invariant functions are constants
        return ErgodicityVerdict(True, None)
    fd = quotient_system(sys, N)
    qalg = fd.quotient.algebra
    bbar = gp.second_to_first(qalg, fd.quotient.g_tau)
    slices = _nonconstant_slices(bbar)
    if slices:
        kernel = linalg.nullspace(slices)
    else:
        kernel = [[Fraction(1) if j == i else Fraction(0) for j in range(qalg.dim)] for i in range(qalg.dim)]
    if not kernel:
        return ErgodicityVerdict(True, None)
    kq = linalg.primitive_integer_vector(kernel[0])
    # pull the character frequency back through the projection (transpose)
    m = alg.dim
    kfull = linalg.primitive_integer_vector([
        sum((Fraction(fd.proj_matrix[q][j]) * kq[q] for q in range(qalg.dim)), start=Fraction(0))
        for j in range(m)
    ])
    # scale so that <k, g_tau> is an integer: the character e(<k, x>) is then
    # genuinely T-invariant, not merely of finite order
    pairing = Fraction(0)
    for kv, t in zip(kq, bbar):
        c = linalg.simplify_scalar(t)
        const = c.constant_term() if isinstance(c, ExtScalar) else Fraction(c)
        pairing += kv * const
    scale = pairing.denominator
    return ErgodicityVerdict(False, [scale * v for v in kfull])
