"""p-adic families: local determinant lines, partial determinants,
ramification-set independence, the unit obstruction scanner, the Euler-factor
discrepancy demonstrator, and Iwasawa characteristic/Fitting ideals.

A family bundles per-prime Weil-Deligne data over a coefficient ring with a
supplied global complex standing for compactly supported cohomology.  Rings
that are not domains are modeled as explicit finite products of domains with
component-tagged local data, which is exactly where the generic-versus-
pointwise Euler factor discrepancy lives.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .complexes import (GradedLine, PerfectComplex, StructureMismatch,
                        det_complex, torsion_of_acyclic)
from .matrices import Matrix, det
from .poly import Polynomial
from .rings import (DomainMismatch, FractionField, IwasawaRing, PAdicRing,
                    PolynomialRing, QQ, RationalField, RingHom,
                    UnsupportedRing, apply_hom, embed_in_fraction_field,
                    fraction_field_of, weierstrass_prepare)
from .weildeligne import WeilDeligneRep, euler_factor


class ZeroDivisorEulerValue(Exception):
    """Eul(1) is a zero divisor: 1 is an eigenvalue of Frobenius."""


class NotTorsion(Exception):
    """The presentation determinant vanishes at working precision."""


class AlgebraicFamily:
    """Per-prime Weil-Deligne data over one coefficient ring plus a supplied
    global complex and a list of classical specializations."""

    __slots__ = ("ring", "p", "sigma", "local_data", "global_complex",
                 "specializations")

    def __init__(self, ring, p, sigma, local_data, global_complex=None,
                 specializations=()):
        sigma = tuple(sorted(set(sigma)))
        if p not in sigma:
            raise ValueError("p must belong to the ramification set")
        for ell in sigma:
            if ell != p and ell not in local_data:
                raise ValueError(f"missing local datum at {ell}")
        for ell, wd in local_data.items():
            if wd.ring != ring:
                raise ValueError(f"local datum at {ell} is over the wrong ring")
            if wd.ell != ell:
                raise ValueError(f"local datum at {ell} is labeled {wd.ell}")
        if global_complex is not None and global_complex.ring != ring:
            raise ValueError("global complex over the wrong ring")
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "sigma", sigma)
        object.__setattr__(self, "local_data", dict(local_data))
        object.__setattr__(self, "global_complex", global_complex)
        object.__setattr__(self, "specializations", tuple(specializations))

    def __setattr__(self, *a):
        raise AttributeError("AlgebraicFamily is immutable")

    def ramified_primes(self):
        return [ell for ell in self.sigma if ell != self.p]


class ProductFamily:
    """A family over a finite product of domains: one component family per
    factor, sharing p and the ramification set."""

    __slots__ = ("p", "sigma", "components")

    def __init__(self, components):
        if not components:
            raise ValueError("a product family needs at least one component")
        names = [name for name, _ in components]
        if len(set(names)) != len(names):
            raise ValueError("duplicate component names")
        p = components[0][1].p
        sigma = components[0][1].sigma
        for _, fam in components:
            if fam.p != p or fam.sigma != sigma:
                raise ValueError("components must share p and the ramification set")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "sigma", sigma)
        object.__setattr__(self, "components", tuple(components))

    def __setattr__(self, *a):
        raise AttributeError("ProductFamily is immutable")

    def component(self, name):
        for n, fam in self.components:
            if n == name:
                return fam
        raise KeyError(name)


@dataclass(frozen=True)
class DeterminantLine:
    line: GradedLine
    provenance: tuple  # ("local", ell) | ("partial", S, Sigma) | ("global",)


def _euler_value_at_one(fam, ell):
    """Eul_ell(F, 1) as an element of the fraction field of the family ring."""
    wd = fam.local_data[ell]
    factor = euler_factor(wd)
    field = fraction_field_of(fam.ring)
    if factor.ring == fam.ring:
        val = factor.evaluate(fam.ring.one())
        return embed_in_fraction_field(fam.ring, field, val)
    return factor.evaluate(field.one())


def local_determinant_line(fam, ell):
    """The determinant line of [R --Eul(1)--> R], trivialized over the
    fraction field: its basis goes to the generator value Eul_ell(F, 1)."""
    if ell not in fam.ramified_primes():
        raise ValueError(f"{ell} is not in Sigma \\ {{p}}")
    field = fraction_field_of(fam.ring)
    value = _euler_value_at_one(fam, ell)
    if field.is_zero(value):
        raise ZeroDivisorEulerValue(
            f"Eul_{ell}(F, 1) vanishes: 1 is an eigenvalue of Frobenius")
    return DeterminantLine(GradedLine(field, 0, value), ("local", ell)), value


def partial_determinant(fam, s):
    """Det^{-1}(global) tensored with the inverses of the local lines at the
    primes of Sigma outside S; degree -chi(global), scalar the product of the
    inverted local generators."""
    s = tuple(sorted(set(s)))
    if fam.p not in s or any(q not in fam.sigma for q in s):
        raise ValueError("S must contain p and sit inside Sigma")
    if fam.global_complex is None:
        raise ValueError("family carries no global complex")
    field = fraction_field_of(fam.ring)
    base = det_complex(fam.global_complex)
    line = GradedLine(field, -base.degree, field.one())
    for ell in fam.ramified_primes():
        if ell in s:
            continue
        local, _ = local_determinant_line(fam, ell)
        line = line.tensor(local.line.inverse())
    return DeterminantLine(line, ("partial", s, fam.sigma))


# ---------------------------------------------------------------------------
# Independence of the ramification set
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SigmaIndependenceReport:
    added_primes: tuple
    torsions: dict
    euler_values: dict
    consistent: bool


def extend_family(fam, added):
    """Construct the Sigma'-version of a family: unramified data at the new
    primes, and the global complex extended by the cone over the added local
    complexes (realized as the block direct sum with [M --(1-Phi)--> M])."""
    ring = fam.ring
    local = dict(fam.local_data)
    g = fam.global_complex
    for ell in sorted(added):
        frob = added[ell]
        wd = WeilDeligneRep(ring, ell, frob,
                            Matrix.zeros(ring, frob.rows, frob.rows), weight=0)
        local[ell] = wd
        g = g.direct_sum(PerfectComplex.two_term(
            Matrix.identity(ring, frob.rows) - frob))
    return AlgebraicFamily(ring, fam.p, fam.sigma + tuple(added), local, g,
                           fam.specializations)


def sigma_independence_check(base, extension):
    """Verify that enlarging Sigma by unramified primes does not change the
    p-partial determinant: the supplied global complexes must differ by the
    cone over the added local complexes, and at each added prime the torsion
    of [M --(1-Phi)--> M] must equal the local generator Eul_ell(F', 1)."""
    if not set(base.sigma) <= set(extension.sigma):
        raise StructureMismatch("extension does not contain the base Sigma")
    added = tuple(sorted(set(extension.sigma) - set(base.sigma)))
    if not added:
        return SigmaIndependenceReport((), {}, {}, True)
    ring = base.ring
    expected = base.global_complex
    blocks = {}
    for ell in added:
        wd = extension.local_data[ell]
        if not wd.monodromy.is_zero() or wd.inertia:
            raise StructureMismatch(f"added prime {ell} is not unramified")
        block = PerfectComplex.two_term(
            Matrix.identity(ring, wd.dim) - wd.frobenius)
        blocks[ell] = block
        expected = expected.direct_sum(block)
    if extension.global_complex != expected:
        raise StructureMismatch(
            "global complexes are not related by the cone over the added local complexes")
    field = fraction_field_of(ring)
    torsions, values = {}, {}
    consistent = True
    for ell in added:
        tau = torsion_of_acyclic(blocks[ell])
        tau = embed_in_fraction_field(ring, field, tau) if not field.contains(tau) else tau
        _, val = local_determinant_line(extension, ell)
        torsions[ell] = tau
        values[ell] = val
        consistent = consistent and field.eq(tau, val)
    return SigmaIndependenceReport(added, torsions, values, consistent)


# ---------------------------------------------------------------------------
# The unit obstruction
# ---------------------------------------------------------------------------

def _p_valuation(x, p):
    """Valuation of a rational number at p."""
    x = Fraction(x)
    if x == 0:
        return None
    v = 0
    n = x.numerator
    while n % p == 0:
        n //= p
        v += 1
    d = x.denominator
    while d % p == 0:
        d //= p
        v -= 1
    return v


@dataclass(frozen=True)
class ObstructionReport:
    per_prime: dict          # ell -> (valuation under psi, valuation under phi)
    product_valuations: tuple
    units: tuple             # (psi product is a unit, phi product is a unit)
    impossible: bool


def _specialized_euler_value(fam_or_prod, spec, ell):
    """Eul_ell(F_spec, 1) in QQ for a specialization into the DVR model
    (QQ with its p-valuation)."""
    component, hom = spec
    fam = fam_or_prod.component(component) if isinstance(fam_or_prod, ProductFamily) \
        else fam_or_prod
    if not isinstance(hom.target, RationalField):
        raise UnsupportedRing("obstruction scan uses QQ-valued DVR models")
    wd = fam.local_data[ell].specialize(hom)
    return euler_factor(wd).evaluate(Fraction(1))


def obstruction_scan(fam_or_prod, psi, phi, p):
    """Per-prime p-valuations of Eul_ell(F_psi, 1) and Eul_ell(F_phi, 1) for
    ell in Sigma minus p; flags impossibility of a common domain-parametrized
    trivialization exactly when one product over Sigma minus p is a unit and
    the other is not."""
    sigma = fam_or_prod.sigma
    per = {}
    tot = [0, 0]
    for ell in sigma:
        if ell == p:
            continue
        vals = []
        for k, spec in enumerate((psi, phi)):
            v = _p_valuation(_specialized_euler_value(fam_or_prod, spec, ell), p)
            if v is None:
                raise ZeroDivisorEulerValue(f"Eul_{ell} vanishes at the specialization")
            vals.append(v)
            tot[k] += v
        per[ell] = tuple(vals)
    units = (tot[0] == 0, tot[1] == 0)
    return ObstructionReport(per, tuple(tot), units, units[0] != units[1])


# ---------------------------------------------------------------------------
# Euler-factor discrepancy on product rings
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DiscrepancyReport:
    component: str
    prime: int
    generic_factor_image: Polynomial
    pointwise_factor: Polynomial
    equal: bool


def euler_discrepancy(prod, component, hom, ell):
    """On the given component, compare the specialization of the generic
    Euler factor with the Euler factor of the specialized representation.
    A genuine discrepancy is the failure mechanism for non-classical points."""
    fam = prod.component(component)
    wd = fam.local_data[ell]
    generic = euler_factor(wd)
    if generic.ring == fam.ring:
        image = generic.map_coeffs(hom, hom.target)
    elif isinstance(generic.ring, FractionField) and generic.ring.polyring == fam.ring:
        ext = RingHom.on_fractions(hom)
        image = generic.map_coeffs(ext, ext.target)
    else:
        raise DomainMismatch("generic factor over an unexpected ring")
    pointwise = euler_factor(wd.specialize(hom))
    return DiscrepancyReport(component, ell, image, pointwise, image == pointwise)


# ---------------------------------------------------------------------------
# Iwasawa characteristic and Fitting ideals
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CharIdealReport:
    generator: tuple          # normalized: p^mu * distinguished, as a ring element
    mu: int
    lam: int
    distinguished: Polynomial
    unit: tuple
    determinant: tuple


def char_ideal(presentation):
    """Determinant of a square presentation matrix over the Iwasawa ring,
    normalized by Weierstrass preparation to p^mu * distinguished."""
    ring = presentation.ring
    if not isinstance(ring, IwasawaRing):
        raise UnsupportedRing("characteristic ideals live over the Iwasawa ring")
    if not presentation.is_square():
        raise ValueError("presentation must be square for a characteristic ideal")
    d = det(presentation)
    if all(c == 0 for c in d):
        raise NotTorsion("presentation determinant vanishes at working precision")
    unit, dist, mu = weierstrass_prepare(ring, d)
    gen = ring.from_coeffs([c for c in dist.coeffs])
    gen = ring.mul(ring.from_int(ring.p**mu), gen)
    return CharIdealReport(gen, mu, dist.degree, dist, unit, d)


def fitting_ideal(presentation, k):
    """Generators of the k-th Fitting ideal: all (n-k)-minors of the
    presentation of a module with n generators (n = rows)."""
    ring = presentation.ring
    n = presentation.rows
    size = n - k
    if size <= 0:
        return [ring.one()]
    if size > presentation.cols or size > n:
        return [ring.zero()]
    gens = []
    for rows in combinations(range(n), size):
        for cols in combinations(range(presentation.cols), size):
            sub = Matrix(ring, size, size,
                         [presentation[i, j] for i in rows for j in cols])
            m = det(sub)
            if not ring.is_zero(m) and m not in gens:
                gens.append(m)
    return gens if gens else [ring.zero()]


def iwasawa_divides(ring, g, x):
    """Whether g divides x in the Iwasawa ring at working precision."""
    return ring.divide_exact(x, g) is not None
