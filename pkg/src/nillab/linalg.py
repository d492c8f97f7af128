"""Exact linear algebra over Q and over Q extended by formal symbols.

Entries are Fractions or :class:`~nillab.scalars.ExtScalar` polynomials.  Since
the symbols are algebraically independent, linear algebra over the fraction
field Q(t_1, ..., t_r) is done division-free: elimination uses
cross-multiplication, so entries stay polynomial.  Pivoting is leftmost-nonzero
with a fixed normalization rule, so echelon bases are deterministic.
"""

from __future__ import annotations

from fractions import Fraction

from .scalars import ExtScalar


def is_zero_scalar(x) -> bool:
    if isinstance(x, ExtScalar):
        return x.is_zero()
    return x == 0


def simplify_scalar(x):
    """Collapse an ExtScalar that happens to be rational into a Fraction."""
    if isinstance(x, ExtScalar) and x.is_rational():
        return x.constant_term()
    return x


def _unit_divisor(x):
    """A rational by which a row may be divided to normalize pivot x."""
    if isinstance(x, ExtScalar):
        if x.is_rational():
            return x.constant_term()
        lead = min(x.terms)  # lexicographically smallest monomial, fixed rule
        return x.terms[lead]
    return Fraction(x)


def echelon(rows: list[list]) -> list[list]:
    """Deterministic reduced echelon basis of the row span.

    Works over the fraction field of the scalars without dividing by
    polynomials: elimination is by cross-multiplication, and rows are finally
    scaled by a rational so the pivot's leading coefficient is 1.
    """
    rows = [[simplify_scalar(x) for x in r] for r in rows if not all(is_zero_scalar(x) for x in r)]
    if not rows:
        return []
    ncols = len(rows[0])
    out: list[list] = []
    work = [list(r) for r in rows]
    for col in range(ncols):
        piv_idx = None
        for i, r in enumerate(work):
            if not is_zero_scalar(r[col]):
                piv_idx = i
                break
        if piv_idx is None:
            continue
        piv = work.pop(piv_idx)
        p = piv[col]
        rest = []
        for r in work:
            if is_zero_scalar(r[col]):
                rest.append(r)
                continue
            c = r[col]
            newr = [simplify_scalar(p * r[j] - c * piv[j]) for j in range(ncols)]
            if not all(is_zero_scalar(x) for x in newr):
                rest.append(newr)
        work = rest
        out.append(piv)
    # back-substitute to clear entries above each pivot, then normalize
    pivots = [next(j for j in range(ncols) if not is_zero_scalar(r[j])) for r in out]
    for i in range(len(out) - 1, -1, -1):
        p_i = pivots[i]
        piv_entry = out[i][p_i]
        for k in range(i):
            c = out[k][p_i]
            if is_zero_scalar(c):
                continue
            out[k] = [simplify_scalar(piv_entry * out[k][j] - c * out[i][j]) for j in range(len(out[k]))]
    normed = []
    for r in out:
        p = next(j for j in range(ncols) if not is_zero_scalar(r[j]))
        d = _unit_divisor(r[p])
        normed.append([simplify_scalar(x / d) for x in r])
    return normed


def pivot_columns(rows: list[list]) -> list[int]:
    return [next(j for j in range(len(r)) if not is_zero_scalar(r[j])) for r in rows]


def reduce_vector(rows: list[list], v: list) -> list:
    """Reduce v against an echelon basis by cross-multiplication.

    The result is zero iff v lies in the span (over the scalar fraction field).
    The result is a nonzero multiple of the true remainder.
    """
    v = [simplify_scalar(x) for x in v]
    for r in rows:
        p = next((j for j in range(len(r)) if not is_zero_scalar(r[j])), None)
        if p is None or is_zero_scalar(v[p]):
            continue
        c = v[p]
        piv = r[p]
        v = [simplify_scalar(piv * v[j] - c * r[j]) for j in range(len(v))]
    return v


def in_span(rows: list[list], v: list) -> bool:
    return all(is_zero_scalar(x) for x in reduce_vector(rows, v))


def span_dim(rows: list[list]) -> int:
    return len(echelon(rows))


def spans_contain(big: list[list], small: list[list]) -> bool:
    e = echelon(big)
    return all(in_span(e, v) for v in small)


def spans_equal(a: list[list], b: list[list]) -> bool:
    return spans_contain(a, b) and spans_contain(b, a)


def nullspace(rows: list[list]) -> list[list]:
    """Echelon basis of the right nullspace {x : M x = 0} over the fraction field."""
    e = echelon(rows)
    if not e:
        ncols = len(rows[0]) if rows else 0
        return [[Fraction(1) if j == i else Fraction(0) for j in range(ncols)] for i in range(ncols)]
    ncols = len(e[0])
    pivs = pivot_columns(e)
    free = [j for j in range(ncols) if j not in pivs]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        # back-solve pivot coordinates; pivot entries may be polynomial, so
        # solve by cross-multiplication and record the result as a fraction
        # only when it is rational.
        for i in range(len(e) - 1, -1, -1):
            p = pivs[i]
            s = 0
            for j in range(p + 1, ncols):
                s = s + e[i][j] * x[j]
            val = simplify_scalar((0 - s) / e[i][p]) if _is_rational_entry(e[i][p]) else None
            if val is None:
                raise ValueError("nullspace over polynomial pivots is not supported")
            x[p] = val
        basis.append([simplify_scalar(t) for t in x])
    return echelon(basis)


def _is_rational_entry(x) -> bool:
    if isinstance(x, ExtScalar):
        return x.is_rational()
    return True


def primitive_integer_vector(v: list[Fraction]) -> list[int]:
    """Scale a rational vector to a primitive integer vector (gcd 1, first nonzero > 0)."""
    from math import gcd

    fracs = [Fraction(x) for x in v]
    if all(f == 0 for f in fracs):
        return [0] * len(fracs)
    lcm = 1
    for f in fracs:
        lcm = lcm * f.denominator // gcd(lcm, f.denominator)
    ints = [int(f * lcm) for f in fracs]
    g = 0
    for i in ints:
        g = gcd(g, abs(i))
    ints = [i // g for i in ints]
    first = next(i for i in ints if i != 0)
    if first < 0:
        ints = [-i for i in ints]
    return ints
