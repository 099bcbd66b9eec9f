"""Frobenius modules over finite-field points and their cohomology.

A sheaf on a zero-dimensional scheme is a stalk with a Frobenius action; its
cohomology is carried by the two-term complex [M --(1-F)--> M].  This module
verifies the product form of the L-function of such a scheme against the
cohomological determinant, builds Selmer-style cones from supplied local
conditions, and checks the leading-term identity that trivializes the
determinant line at t = 1.
"""

from __future__ import annotations

from dataclasses import dataclass

from .complexes import ComplexMap, PerfectComplex, cone
from .matrices import (Matrix, column_space_basis, kernel_basis, rank,
                       reversed_char_poly, solve, det)
from .poly import Polynomial, RationalFunction, vanishing_order_at_one
from .rings import (IntegerRing, PAdicRing, UnsupportedRing)


class NotSemisimple(Exception):
    pass


# Convention constant for the leading-term identity: torsion = SIGN^d * leading.
# A corrupted build flips it; the selftest canary checks that the suite then fails.
LEADING_SIGN = -1


class FrobeniusModule:
    """A free module with a Frobenius automorphism and optional finite inertia."""

    __slots__ = ("ring", "rank", "frobenius", "inertia", "q")

    def __init__(self, ring, frobenius, inertia=(), q=None):
        if not frobenius.is_square():
            raise ValueError("Frobenius matrix must be square")
        for g in inertia:
            if not g.is_square() or g.rows != frobenius.rows:
                raise ValueError("inertia matrices must match the rank")
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "rank", frobenius.rows)
        object.__setattr__(self, "frobenius", frobenius)
        object.__setattr__(self, "inertia", tuple(inertia))
        object.__setattr__(self, "q", q)

    def __setattr__(self, *a):
        raise AttributeError("FrobeniusModule is immutable")

    def one_minus_f(self):
        return Matrix.identity(self.ring, self.rank) - self.frobenius


def unramified_complex(m):
    """[M --(1-F)--> M] in degrees 0 and 1."""
    return PerfectComplex.two_term(m.one_minus_f())


def semisimple_at_one(m):
    """True iff ker(1-F) = ker((1-F)^2), i.e. 1-F acts semi-simply at the
    eigenvalue-1 part."""
    if not m.ring.is_field:
        raise UnsupportedRing("semisimplicity test needs field coefficients")
    a = m.one_minus_f()
    return rank(a) == rank(a * a)


@dataclass(frozen=True)
class LeadingTermReport:
    d: int
    leading: object
    torsion: object
    identity_holds: bool


def zeta_basis_leading_term(m):
    """Leading term of det(1 - tF) at t = 1 versus the determinant of 1-F on
    the F-stable complement of ker(1-F).

    The identity torsion = (-1)^d * leading is the scalar form of the
    statement that the canonical basis of the determinant line maps to 1
    while the semisimplicity splitting recovers the leading L-value.
    """
    R = m.ring
    if not semisimple_at_one(m):
        raise NotSemisimple("1-F does not act semi-simply")
    p = reversed_char_poly(m.frobenius)
    d = vanishing_order_at_one(p)
    shifted = p.taylor_shift_one()
    leading = shifted.coeff(d)
    a = m.one_minus_f()
    w = column_space_basis(a)
    if w.cols == 0:
        torsion = R.one()
    else:
        coords = solve(w, a * w)
        torsion = det(coords)
    sign = R.one() if (LEADING_SIGN ** d) == 1 else R.neg(R.one())
    holds = R.eq(torsion, R.mul(sign, leading))
    return LeadingTermReport(d, leading, torsion, holds)


# ---------------------------------------------------------------------------
# Selmer cones
# ---------------------------------------------------------------------------

CONDITION_TAGS = ("full", "unramified", "nearly-ordinary", "zero")


class LocalConditionDatum:
    """A condition complex with its structural map into the full local complex."""

    __slots__ = ("complex", "map", "tag")

    def __init__(self, complex, map, tag="full"):
        if tag not in CONDITION_TAGS:
            raise ValueError(f"unknown condition tag {tag!r}")
        if map.source != complex:
            raise ValueError("structural map must start at the condition complex")
        object.__setattr__(self, "complex", complex)
        object.__setattr__(self, "map", map)
        object.__setattr__(self, "tag", tag)

    def __setattr__(self, *a):
        raise AttributeError("LocalConditionDatum is immutable")

    @classmethod
    def full(cls, local):
        return cls(local, ComplexMap.identity(local), "full")

    @classmethod
    def zero(cls, local):
        return cls(PerfectComplex.zero(local.ring),
                   ComplexMap.zero(PerfectComplex.zero(local.ring), local), "zero")


class SelmerDatum:
    """A supplied global complex with local conditions at finitely many places."""

    __slots__ = ("global_complex", "places")

    def __init__(self, global_complex, places):
        for (label, full_local, condition, loc) in places:
            if condition.map.target != full_local:
                raise ValueError(f"condition at {label} does not map to its local complex")
            if loc.source != global_complex or loc.target != full_local:
                raise ValueError(f"localization at {label} has wrong endpoints")
        object.__setattr__(self, "global_complex", global_complex)
        object.__setattr__(self, "places", tuple(places))

    def __setattr__(self, *a):
        raise AttributeError("SelmerDatum is immutable")


def selmer_cone(datum):
    """Cone(global (+) (+)_v conditions --(i - sum i_v)--> (+)_v full)[-1]."""
    g = datum.global_complex
    R = g.ring
    if not datum.places:
        return g
    source = g
    for (_, _, condition, _) in datum.places:
        source = source.direct_sum(condition.complex)
    target = PerfectComplex.zero(R)
    for (_, full_local, _, _) in datum.places:
        target = target.direct_sum(full_local)
    lo = min(source.lowest, target.lowest)
    hi = max(source.highest, target.highest)
    comps = {}
    for i in range(lo, hi + 1):
        rows = []
        for pi, (_, full_local, _, _) in enumerate(datum.places):
            for r in range(full_local.rank_at(i)):
                row = []
                # block from the global complex: the localization map
                loc = datum.places[pi][3].component(i)
                row.extend(loc[r, c] for c in range(g.rank_at(i)))
                # blocks from the condition complexes: -i_v on the matching place
                for pj, (_, _, condition, _) in enumerate(datum.places):
                    cm = condition.map.component(i)
                    if pj == pi:
                        row.extend(R.neg(cm[r, c]) for c in range(condition.complex.rank_at(i)))
                    else:
                        row.extend([R.zero()] * condition.complex.rank_at(i))
                rows.append(row)
        m = (Matrix.from_rows(R, rows) if rows
             else Matrix(R, 0, source.rank_at(i), []))
        comps[i] = m
    iota = ComplexMap(source, target, comps)
    return cone(iota).shift(-1)


# ---------------------------------------------------------------------------
# Zero-dimensional schemes and the trace formula
# ---------------------------------------------------------------------------

class EtaleZeroScheme:
    """A finite disjoint union of closed points with stalks and Frobenii."""

    __slots__ = ("ring", "points")

    def __init__(self, ring, points):
        for deg, stalk in points:
            if deg < 1:
                raise ValueError("point degrees must be >= 1")
            if stalk.ring != ring:
                raise ValueError("stalk over the wrong ring")
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "points", tuple(points))

    def __setattr__(self, *a):
        raise AttributeError("EtaleZeroScheme is immutable")


def induced_frobenius(degree, stalk):
    """Frobenius of the pushforward to the base point: a block cyclic
    permutation of ``degree`` copies of the stalk, composed with the stalk
    Frobenius in the wrap-around slot.  det(1 - tF_ind) = det(1 - t^deg F)."""
    R = stalk.ring
    r = stalk.rank
    n = degree * r
    rows = [[R.zero()] * n for _ in range(n)]
    for b in range(degree - 1):
        for k in range(r):
            rows[(b + 1) * r + k][b * r + k] = R.one()
    for i in range(r):
        for k in range(r):
            rows[i][(degree - 1) * r + k] = stalk.frobenius[i, k]
    return Matrix.from_rows(R, rows)


@dataclass(frozen=True)
class TraceFormulaReport:
    lhs_denominator: Polynomial
    rhs_denominator: Polynomial
    equal: bool

    def lhs(self):
        one = Polynomial(self.lhs_denominator.ring, (self.lhs_denominator.ring.one(),))
        return RationalFunction(one, self.lhs_denominator)

    def rhs(self):
        one = Polynomial(self.rhs_denominator.ring, (self.rhs_denominator.ring.one(),))
        return RationalFunction(one, self.rhs_denominator)


def trace_formula_check(scheme):
    """Compare the product L-function of a zero-dimensional scheme with the
    determinant of Frobenius on the induced module over the base.

    lhs = prod_x det(1 - Fr_x t^deg(x))^-1; rhs = det(1 - t F_induced)^-1.
    Both sides are reported by their denominator polynomials (constant
    coefficient 1), compared exactly.
    """
    R = scheme.ring
    if not (R.is_field or isinstance(R, (PAdicRing, IntegerRing))):
        raise UnsupportedRing(f"trace formula unsupported over {R.name()}")
    lhs = Polynomial(R, (R.one(),))
    blocks = []
    for degree, stalk in scheme.points:
        local = reversed_char_poly(stalk.frobenius)
        # substitute t^degree
        coeffs = []
        for c in local.coeffs:
            coeffs.extend([c] + [R.zero()] * (degree - 1))
        lhs = lhs * Polynomial(R, coeffs[: local.degree * degree + 1])
        blocks.append(induced_frobenius(degree, stalk))
    if blocks:
        total = Matrix.block_diagonal(R, blocks)
        rhs = reversed_char_poly(total)
    else:
        rhs = Polynomial(R, (R.one(),))
    return TraceFormulaReport(lhs, rhs, lhs == rhs)
