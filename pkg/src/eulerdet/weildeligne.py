"""Weil-Deligne representations over exact coefficient rings.

A representation is an invertible Frobenius matrix, a nilpotent monodromy
matrix satisfying l * Phi * N = N * Phi, an optional finite inertia part, and
a declared weight.  The module computes inertia invariants and algebraic
local Euler factors, the monodromy filtration of the nilpotent part, purity
of Frobenius eigenvalues on its graded pieces (exact functional-equation test
plus arbitrary-precision root moduli), the eigenvalue-ratio bound on the rank
of the monodromy, and the specialization/interpolation reports that compare a
family's Euler factor with the Euler factors of its specializations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import sympy

from .matrices import (Matrix, char_poly, column_space_basis, det,
                       kernel_basis, rank, reversed_char_poly, solve)
from .poly import Polynomial
from .rings import (DomainMismatch, FractionField, PolynomialRing, QQ,
                    RationalField, RingHom, UnsupportedRing, apply_hom,
                    embed_in_fraction_field, fraction_field_of)


class NotNilpotent(Exception):
    pass


class FiltrationNotPreserved(Exception):
    pass


class EigenvaluesUnavailable(Exception):
    pass


DEFAULT_EIGENVALUE_DEGREE_BOUND = 4
DEFAULT_PURITY_TOLERANCE = Fraction(1, 10**30)


class WeilDeligneRep:
    """Frobenius + monodromy + finite inertia data over a coefficient ring."""

    __slots__ = ("ring", "ell", "dim", "frobenius", "monodromy", "inertia", "weight")

    def __init__(self, ring, ell, frobenius, monodromy, inertia=(), weight=0,
                 check=True):
        n = frobenius.rows
        if not frobenius.is_square() or not monodromy.is_square() or monodromy.rows != n:
            raise ValueError("Frobenius and monodromy must be square of equal size")
        if check:
            if ring.is_domain:
                if ring.is_zero(det(frobenius)):
                    raise ValueError("Frobenius must be invertible")
            elif not ring.is_unit(det(frobenius)):
                raise ValueError("Frobenius must be invertible")
            if not monodromy.power(max(n, 1)).is_zero():
                raise ValueError("monodromy matrix is not nilpotent")
            lhs = (frobenius * monodromy).scale(ring.from_int(ell))
            if not (lhs - monodromy * frobenius).is_zero():
                raise ValueError("l * Phi * N != N * Phi")
            _check_inertia_closure(ring, inertia, n)
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "ell", ell)
        object.__setattr__(self, "dim", n)
        object.__setattr__(self, "frobenius", frobenius)
        object.__setattr__(self, "monodromy", monodromy)
        object.__setattr__(self, "inertia", tuple(inertia))
        object.__setattr__(self, "weight", weight)

    def __setattr__(self, *a):
        raise AttributeError("WeilDeligneRep is immutable")

    def __repr__(self):
        return (f"WeilDeligneRep(l={self.ell}, dim={self.dim}, "
                f"ring={self.ring.name()}, weight={self.weight})")

    def specialize(self, hom):
        """Apply a coefficient hom; the Frobenius-monodromy relation is an
        algebraic identity and is re-asserted on the image."""
        out = WeilDeligneRep(
            hom.target, self.ell,
            apply_hom(self.frobenius, hom),
            apply_hom(self.monodromy, hom),
            tuple(apply_hom(g, hom) for g in self.inertia),
            self.weight,
        )
        return out


def _check_inertia_closure(ring, inertia, n, bound=2):
    """Finite part must be closed under products of up to `bound` factors,
    allowing the implicit identity."""
    if not inertia:
        return
    idm = Matrix.identity(ring, n)
    seen = list(inertia) + [idm]
    words = list(inertia)
    for _ in range(bound - 1):
        new = []
        for g in words:
            for h in inertia:
                gh = g * h
                if all(gh != s for s in seen):
                    new.append(gh)
                    seen.append(gh)
        if not new:
            return
        words = new
    if words and any(all(w != s for s in list(inertia) + [idm]) for w in words):
        raise ValueError("finite inertia part is not closed under products")


# ---------------------------------------------------------------------------
# Subspace helpers (over a field)
# ---------------------------------------------------------------------------

def _span_sum(ring, mats):
    mats = [m for m in mats if m.cols > 0]
    if not mats:
        return None
    acc = mats[0]
    for m in mats[1:]:
        acc = acc.hstack(m)
    return column_space_basis(acc)


def _intersect(a, b):
    """Basis of the intersection of two column spans over a field."""
    ring = a.ring
    if a.cols == 0 or b.cols == 0:
        return Matrix(ring, a.rows, 0, [])
    stacked = a.hstack(-b)
    k = kernel_basis(stacked)
    if k.cols == 0:
        return Matrix(ring, a.rows, 0, [])
    coeffs = Matrix(ring, a.cols, k.cols,
                    [k[i, j] for i in range(a.cols) for j in range(k.cols)])
    return column_space_basis(a * coeffs)


@dataclass(frozen=True)
class Filtration:
    """Increasing filtration by column-span bases, indexed by integers."""

    levels: tuple  # ((j, Matrix), ...) sorted by j

    def indices(self):
        return [j for j, _ in self.levels]

    def subspace(self, j):
        dim = self.levels[0][1].rows if self.levels else 0
        ring = self.levels[0][1].ring if self.levels else None
        prev = Matrix(ring, dim, 0, []) if ring else None
        for jj, m in self.levels:
            if jj > j:
                return prev
            prev = m
        return prev

    def graded_dim(self, j):
        lo = self.subspace(j - 1)
        hi = self.subspace(j)
        return (hi.cols if hi is not None else 0) - (lo.cols if lo is not None else 0)


def monodromy_filtration(n_mat):
    """The unique filtration with N M_j <= M_{j-2} and N^j: gr_j ~ gr_{-j},
    realized as M_k = sum over i - j = k of ker N^{i+1} cap im N^j."""
    ring = n_mat.ring
    dim = n_mat.rows
    if dim == 0:
        return Filtration(())
    if not n_mat.power(dim).is_zero():
        raise NotNilpotent("matrix is not nilpotent")
    powers = [Matrix.identity(ring, dim)]
    for _ in range(dim + 1):
        powers.append(n_mat * powers[-1])
    kers = [kernel_basis(powers[i]) for i in range(dim + 2)]
    ims = [column_space_basis(powers[i]) for i in range(dim + 2)]
    levels = []
    for k in range(-dim, dim + 1):
        pieces = []
        for i in range(0, dim + 1):
            j = i - k
            if j < 0 or j > dim:
                continue
            pieces.append(_intersect(kers[i + 1], ims[j]))
        m = _span_sum(ring, pieces)
        if m is None:
            m = Matrix(ring, dim, 0, [])
        levels.append((k, m))
    # trim constant tails: keep the first zero level and the first full level
    lo = 0
    while lo + 1 < len(levels) and levels[lo + 1][1].cols == 0:
        lo += 1
    hi = len(levels) - 1
    while hi - 1 > 0 and levels[hi - 1][1].cols == dim:
        hi -= 1
    return Filtration(tuple(levels[lo:hi + 1]))


def nilpotent_jordan_chains(n_mat):
    """Jordan chains of a nilpotent matrix: lists [N^(m-1)u, ..., Nu, u]."""
    ring = n_mat.ring
    dim = n_mat.rows
    if dim == 0:
        return []
    if not n_mat.power(dim).is_zero():
        raise NotNilpotent("matrix is not nilpotent")
    k = 1
    p = n_mat
    while not p.is_zero():
        p = p * n_mat
        k += 1
    kers = {j: kernel_basis(n_mat.power(j)) for j in range(0, k + 1)}
    tops = {}
    carried = Matrix(ring, dim, 0, [])
    for j in range(k, 0, -1):
        base = kers[j - 1]
        span = base.hstack(carried) if carried.cols else base
        new_tops = []
        for c in range(kers[j].cols):
            cand = kers[j].columns_sub([c])
            if rank(span.hstack(cand)) > rank(span):
                span = span.hstack(cand)
                new_tops.append(cand)
        tops[j] = new_tops
        nxt = [n_mat * t for t in tops[j]] + \
              ([n_mat * carried] if carried.cols else [])
        carried = Matrix(ring, dim, 0, [])
        for m in nxt:
            if m.cols:
                carried = carried.hstack(m) if carried.cols else m
    chains = []
    for j in range(k, 0, -1):
        for t in tops[j]:
            chain = [t]
            for _ in range(j - 1):
                chain.append(n_mat * chain[-1])
            chains.append(list(reversed(chain)))
    return chains


def filtration_from_jordan(n_mat):
    """Recompute the monodromy filtration from a Jordan basis (independent
    derivation used to cross-check :func:`monodromy_filtration`)."""
    ring = n_mat.ring
    dim = n_mat.rows
    chains = nilpotent_jordan_chains(n_mat)
    weighted = []
    for chain in chains:
        m = len(chain)
        for i, vec in enumerate(chain, start=1):
            weighted.append((2 * i - m - 1, vec))
    if not weighted:
        return Filtration(((0, Matrix.identity(ring, dim)),))
    ws = sorted({w for w, _ in weighted})
    levels = []
    lo = ws[0] - 1
    levels.append((lo, Matrix(ring, dim, 0, [])))
    for w in ws:
        cols = [v for ww, v in weighted if ww <= w]
        acc = cols[0]
        for c in cols[1:]:
            acc = acc.hstack(c)
        levels.append((w, column_space_basis(acc)))
    return Filtration(tuple(levels))


# ---------------------------------------------------------------------------
# Purity
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GradedPurityDetail:
    j: int
    dim: int
    char_poly: Polynomial
    functional_equation_ok: bool
    modulus_ok: bool


@dataclass(frozen=True)
class PurityReport:
    pure: bool
    weight: int
    details: tuple


def _graded_frobenius(wd, filt, j):
    """Matrix of Frobenius on gr_j, or FiltrationNotPreserved."""
    ring = wd.ring
    low = filt.subspace(j - 1)
    high = filt.subspace(j)
    if high.cols == low.cols:
        return None
    # lift: columns of high independent from low
    lift = []
    span = low
    for c in range(high.cols):
        cand = high.columns_sub([c])
        if rank(span.hstack(cand) if span.cols else cand) > (rank(span) if span.cols else 0):
            span = span.hstack(cand) if span.cols else cand
            lift.append(c)
    lifted = high.columns_sub(lift)
    basis = low.hstack(lifted) if low.cols else lifted
    img = wd.frobenius * lifted
    coords = solve(basis, img)
    if coords is None:
        raise FiltrationNotPreserved(f"Frobenius does not preserve M_{j}")
    return Matrix(ring, lifted.cols, lifted.cols,
                  [coords[low.cols + r, c]
                   for r in range(lifted.cols) for c in range(lifted.cols)])


def _functional_equation_ok(p, q):
    """Exact test that the root multiset of monic p is stable under a -> q/a:
    X^m p(q/X) = p(0) p(X)."""
    m = p.degree
    p0 = p.coeff(0)
    ring = p.ring
    if ring.is_zero(p0):
        return False
    for k in range(m + 1):
        lhs = ring.mul(p.coeff(m - k), q ** (m - k))
        rhs = ring.mul(p0, p.coeff(k))
        if not ring.eq(lhs, rhs):
            return False
    return True


def _moduli_ok(p, target_sq, tolerance):
    """All complex roots of p have |root|^2 = target_sq within the relative
    tolerance, via arbitrary-precision root isolation."""
    if p.degree <= 0:
        return True
    digits = max(30, int(-mpmath.log10(float(tolerance))) + 25)
    with mpmath.workdps(digits):
        coeffs = [mpmath.mpf(c.numerator) / mpmath.mpf(c.denominator)
                  for c in reversed(p.coeffs)]
        roots = mpmath.polyroots(coeffs, maxsteps=200, extraprec=120)
        t = mpmath.mpf(target_sq.numerator) / mpmath.mpf(target_sq.denominator)
        tol = mpmath.mpf(float(tolerance))
        for r in roots:
            sq = mpmath.fabs(r) ** 2
            if mpmath.fabs(sq - t) > tol * t:
                return False
    return True


def check_purity(wd, weight=None, tolerance=DEFAULT_PURITY_TOLERANCE):
    """Weight-monodromy test: Frobenius eigenvalues on gr_j of the monodromy
    filtration must be Weil numbers of weight w + j.

    The root-multiset functional equation is checked exactly; the modulus
    condition |root| = l^((w+j)/2) is checked numerically at the configured
    relative tolerance (squared moduli, to stay rational).
    """
    if not isinstance(wd.ring, RationalField):
        raise UnsupportedRing("purity checking is implemented over QQ")
    w = wd.weight if weight is None else weight
    filt = monodromy_filtration(wd.monodromy)
    details = []
    pure = True
    for j in filt.indices():
        a = _graded_frobenius(wd, filt, j)
        if a is None:
            continue
        p = char_poly(a)
        q = Fraction(wd.ell) ** (w + j)
        feq = _functional_equation_ok(p, q)
        mod = _moduli_ok(p, q, tolerance)
        pure = pure and feq and mod
        details.append(GradedPurityDetail(j, a.rows, p, feq, mod))
    return PurityReport(pure, w, tuple(details))


# ---------------------------------------------------------------------------
# Inertia invariants and Euler factors
# ---------------------------------------------------------------------------

def _lift_to_field(wd):
    """Return (field, Frobenius, monodromy, inertia) over the working field."""
    f = fraction_field_of(wd.ring)
    if f == wd.ring:
        return f, wd.frobenius, wd.monodromy, wd.inertia
    def emb(m):
        return m.map_entries(lambda x: embed_in_fraction_field(wd.ring, f, x), f)
    return f, emb(wd.frobenius), emb(wd.monodromy), tuple(emb(g) for g in wd.inertia)


def inertia_invariants(wd):
    """Basis of V^I = ker N intersected with the fixed space of the finite
    inertia part (columns, over the working field)."""
    f, frob, mono, inertia = _lift_to_field(wd)
    idm = Matrix.identity(f, wd.dim)
    rows = mono.row_list()
    for g in inertia:
        rows += (g - idm).row_list()
    if not rows:
        return idm
    return kernel_basis(Matrix.from_rows(f, rows))


def euler_factor(wd):
    """det(1 - X * Frobenius | V^I): constant coefficient 1, degree dim V^I.

    Coefficients are returned over the coefficient ring whenever they lie in
    it (always, for the families considered here), else over its fraction
    field.
    """
    f, frob, _, _ = _lift_to_field(wd)
    basis = inertia_invariants(wd)
    if basis.cols == 0:
        return Polynomial(wd.ring, (wd.ring.one(),))
    img = frob * basis
    coords = solve(basis, img)
    assert coords is not None, "Frobenius does not stabilize the inertia invariants"
    restricted = Matrix(f, basis.cols, basis.cols, coords.entries)
    pol = reversed_char_poly(restricted)
    return _descend_poly(pol, wd.ring)


def _descend_poly(pol, ring):
    """Coerce a polynomial over Frac(ring) back to ring when possible."""
    if pol.ring == ring:
        return pol
    if isinstance(pol.ring, FractionField) and pol.ring.polyring == ring:
        coeffs = []
        for c in pol.coeffs:
            if c.den.degree != 0:
                return pol
            inv = ring.base.inv(c.den.coeff(0))
            coeffs.append(c.num.scale(inv))
        return Polynomial(ring, coeffs)
    return pol


def monodromy_rank_bound(wd, degree_bound=DEFAULT_EIGENVALUE_DEGREE_BOUND):
    """Largest possible rank of the monodromy given the Frobenius eigenvalues:
    the number of disjoint eigenvalue pairs (a, b) with a/b = 1/l, read off
    the powers of l in the quotients of the eigenvalues."""
    frob = wd.frobenius
    if isinstance(wd.ring, PolynomialRing):
        consts = []
        for x in frob.entries:
            if x.degree > 0:
                raise EigenvaluesUnavailable(
                    "rank bound needs a constant Frobenius over the family ring")
            consts.append(x.coeff(0))
        frob = Matrix(wd.ring.base, frob.rows, frob.cols, consts)
    if not isinstance(frob.ring, RationalField):
        raise EigenvaluesUnavailable("rank bound implemented over QQ")
    p = char_poly(frob)
    x = sympy.Symbol("x")
    expr = sum(sympy.Rational(c) * x**i for i, c in enumerate(p.coeffs))
    factors = sympy.Poly(expr, x, domain="QQ").factor_list()[1]
    monics = []
    for fac, mult in factors:
        fac = fac.monic()
        if fac.degree() > degree_bound:
            raise EigenvaluesUnavailable(
                f"eigenvalue of algebraic degree {fac.degree()} exceeds bound {degree_bound}")
        monics.append((fac, int(mult)))
    ell = sympy.Integer(wd.ell)
    total = 0
    for fac, mult in monics:
        d = fac.degree()
        scaled = sympy.Poly(fac.as_expr().subs(x, x / ell) * ell**d, x, domain="QQ").monic()
        for other, mult2 in monics:
            if scaled == other:
                total += d * min(mult, mult2)
                break
    return total


# ---------------------------------------------------------------------------
# Interpolation of Euler factors through specializations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class InterpolationReport:
    spec_descriptor: dict
    family_factor: Polynomial
    specialized_factor: Polynomial
    pointwise_factor: Polynomial
    rank_generic: int
    rank_at_point: int
    rank_bound: int
    declared_pure: bool
    pure: bool
    match: bool
    rank_chain_ok: bool
    interpolation_ok: bool


def _specialize_factor(factor, hom):
    """Push a family Euler factor through a coefficient specialization."""
    if factor.ring == hom.source:
        return factor.map_coeffs(hom, hom.target)
    if isinstance(factor.ring, FractionField) and factor.ring.polyring == hom.source:
        ext = RingHom.on_fractions(hom)
        return factor.map_coeffs(ext, ext.target)
    raise DomainMismatch("factor is not over the specialization source")


def check_interpolation(family, specs):
    """For each specialization, compare the image of the family Euler factor
    with the Euler factor of the specialized representation, record monodromy
    ranks and the purity verdict, and verify the inequality chain
    rank N_psi <= rank N <= r."""
    fam_factor = euler_factor(family)
    _, _, mono_f, _ = _lift_to_field(family)
    rank_generic = rank(mono_f)
    r_bound = monodromy_rank_bound(family)
    reports = []
    for hom, declared_pure in specs:
        wd_s = family.specialize(hom)
        specialized = _specialize_factor(fam_factor, hom)
        pointwise = euler_factor(wd_s)
        rank_pt = rank(wd_s.monodromy)
        purity = check_purity(wd_s)
        match = specialized == pointwise
        chain_ok = rank_pt <= rank_generic <= r_bound
        reports.append(InterpolationReport(
            spec_descriptor=hom.descriptor,
            family_factor=fam_factor,
            specialized_factor=specialized,
            pointwise_factor=pointwise,
            rank_generic=rank_generic,
            rank_at_point=rank_pt,
            rank_bound=r_bound,
            declared_pure=declared_pure,
            pure=purity.pure,
            match=match,
            rank_chain_ok=chain_ok,
            interpolation_ok=(not purity.pure) or match,
        ))
    return reports
