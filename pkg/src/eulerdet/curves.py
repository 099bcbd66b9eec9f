"""Integral Weierstrass models: point counts, reduction types, Euler factors
of the twisted degree-2 motive, congruence scanning, and the unit analysis
that exhibits the obstruction for congruent curves.

Point counting is direct enumeration with a quadratic-residue table, O(l) per
prime; exact and fast enough for l up to 10^5.  Reduction types use the
standard v(Delta)/v(c4) trichotomy on models checked to be minimal by a
bounded search over u = l coordinate changes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .matrices import Matrix
from .poly import Polynomial
from .rings import QQ
from .weildeligne import WeilDeligneRep

GOOD = "Good"
SPLIT_MULT = "SplitMultiplicative"
NONSPLIT_MULT = "NonsplitMultiplicative"
ADDITIVE = "Additive"


class BadReductionPrime(Exception):
    pass


class NonMinimalModel(Exception):
    pass


class PrimeEqualsP(Exception):
    pass


# conductors of the shipped congruent pair (level data for the Sturm bound)
KNOWN_CONDUCTORS = {
    (0, 0, 0, 1, -10): 52,
    (0, 0, 0, -584, 5444): 364,
}


class EllipticCurveQ:
    """y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 over Q, with the
    standard b/c-quantities recomputed and checked."""

    __slots__ = ("a1", "a2", "a3", "a4", "a6",
                 "b2", "b4", "b6", "b8", "c4", "c6", "discriminant")

    def __init__(self, a1, a2, a3, a4, a6):
        b2 = a1 * a1 + 4 * a2
        b4 = 2 * a4 + a1 * a3
        b6 = a3 * a3 + 4 * a6
        b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        c4 = b2 * b2 - 24 * b4
        c6 = -b2**3 + 36 * b2 * b4 - 216 * b6
        disc = -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6
        if disc == 0:
            raise ValueError("singular Weierstrass model")
        assert 4 * b8 == b2 * b6 - b4 * b4
        assert 1728 * disc == c4**3 - c6**2
        for name, val in (("a1", a1), ("a2", a2), ("a3", a3), ("a4", a4), ("a6", a6),
                          ("b2", b2), ("b4", b4), ("b6", b6), ("b8", b8),
                          ("c4", c4), ("c6", c6), ("discriminant", disc)):
            object.__setattr__(self, name, val)

    def __setattr__(self, *a):
        raise AttributeError("EllipticCurveQ is immutable")

    @classmethod
    def from_list(cls, coeffs):
        if len(coeffs) != 5:
            raise ValueError("curve input must be [a1, a2, a3, a4, a6]")
        return cls(*[int(c) for c in coeffs])

    def ainvariants(self):
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    def __repr__(self):
        return f"EllipticCurveQ{self.ainvariants()}"

    def conductor_bound(self):
        """The known conductor if shipped, else |discriminant| as a bound."""
        return KNOWN_CONDUCTORS.get(self.ainvariants(), abs(self.discriminant))


def _valuation(n, ell):
    if n == 0:
        return math.inf
    v = 0
    while n % ell == 0:
        n //= ell
        v += 1
    return v


def _transformed(e, u, r, s, t):
    """a-invariants after x = u^2 x' + r, y = u^3 y' + s u^2 x' + t, as exact
    rationals; integral iff the model was non-minimal this way."""
    a1, a2, a3, a4, a6 = e.ainvariants()
    u = Fraction(u)
    na1 = Fraction(a1 + 2 * s) / u
    na2 = Fraction(a2 - s * a1 + 3 * r - s * s) / u**2
    na3 = Fraction(a3 + r * a1 + 2 * t) / u**3
    na4 = Fraction(a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t) / u**4
    na6 = Fraction(a6 + r * a4 + r * r * a2 + r**3 - t * a3 - t * t - r * t * a1) / u**6
    return (na1, na2, na3, na4, na6)


def is_minimal_at(e, ell):
    """Minimality at ell, via the c4/Delta criterion and a bounded search
    over u = ell coordinate changes for the small primes."""
    if _valuation(e.discriminant, ell) < 12 or _valuation(e.c4, ell) < 4:
        return True
    for r in range(ell * ell):
        for s in range(ell):
            for t in range(ell**3):
                cand = _transformed(e, ell, r, s, t)
                if all(c.denominator == 1 for c in cand):
                    return False
    return True


def point_count(e, ell):
    """(#E(F_ell) including infinity, a_ell) at a good prime."""
    if _valuation(e.discriminant, ell) > 0:
        raise BadReductionPrime(f"{ell} divides the discriminant")
    if ell == 2:
        count = 1
        for x in range(2):
            for y in range(2):
                lhs = y * y + e.a1 * x * y + e.a3 * y
                rhs = x**3 + e.a2 * x * x + e.a4 * x + e.a6
                if (lhs - rhs) % 2 == 0:
                    count += 1
    else:
        squares = set((i * i) % ell for i in range(ell))
        total = 0
        for x in range(ell):
            g = (4 * x**3 + e.b2 * x * x + 2 * e.b4 * x + e.b6) % ell
            if g == 0:
                total += 0
            elif g in squares:
                total += 1
            else:
                total -= 1
        count = ell + 1 + total
    a = ell + 1 - count
    assert a * a <= 4 * ell, "Hasse bound violated"
    return count, a


def reduction_type(e, ell):
    """Good / split multiplicative / nonsplit multiplicative / additive."""
    if not is_minimal_at(e, ell):
        raise NonMinimalModel(f"model is not minimal at {ell}")
    vd = _valuation(e.discriminant, ell)
    if vd == 0:
        return GOOD
    if _valuation(e.c4, ell) > 0:
        return ADDITIVE
    if ell >= 5:
        squares = set((i * i) % ell for i in range(1, ell))
        return SPLIT_MULT if (-e.c6) % ell in squares else NONSPLIT_MULT
    return _small_prime_split(e, ell)


def _small_prime_split(e, ell):
    """Tabulated split criterion at 2 and 3: slopes of the tangent cone at
    the node of the reduction."""
    sing = None
    for x in range(ell):
        for y in range(ell):
            f = (y * y + e.a1 * x * y + e.a3 * y
                 - x**3 - e.a2 * x * x - e.a4 * x - e.a6) % ell
            fx = (e.a1 * y - 3 * x * x - 2 * e.a2 * x - e.a4) % ell
            fy = (2 * y + e.a1 * x + e.a3) % ell
            if f == 0 and fx == 0 and fy == 0:
                sing = (x, y)
                break
        if sing:
            break
    assert sing is not None, "no singular point on a multiplicative reduction"
    r, t = sing
    # translate the node to the origin; the slopes satisfy z^2 + a1' z - a2'
    a1p = e.a1
    a2p = e.a2 + 3 * r - 0 * a1p
    if ell == 2:
        # z^2 + z + a2' splits over F_2 iff a2' is even (a1 odd since v(b2)=0)
        return SPLIT_MULT if (a2p % 2) == 0 else NONSPLIT_MULT
    # odd small prime: discriminant of the slope quadratic is b2 mod 3
    disc = (a1p * a1p + 4 * a2p) % ell
    squares = set((i * i) % ell for i in range(1, ell))
    return SPLIT_MULT if disc in squares else NONSPLIT_MULT


def multiplicative_a(e, ell):
    return 1 if reduction_type(e, ell) == SPLIT_MULT else -1


def euler_factor_motive(e, ell, p):
    """Local Euler factor of the twisted degree-2 motive at ell != p, as a
    polynomial over QQ with p-integral coefficients.

    Good: 1 - (a/l) X + (1/l) X^2; multiplicative: 1 -+ (1/l) X;
    additive (no inertia invariants): 1.
    """
    if ell == p:
        raise PrimeEqualsP("Euler factors are only taken at primes away from p")
    rt = reduction_type(e, ell)
    one = Fraction(1)
    if rt == GOOD:
        _, a = point_count(e, ell)
        return Polynomial(QQ, (one, Fraction(-a, ell), Fraction(1, ell)))
    if rt == SPLIT_MULT:
        return Polynomial(QQ, (one, Fraction(-1, ell)))
    if rt == NONSPLIT_MULT:
        return Polynomial(QQ, (one, Fraction(1, ell)))
    return Polynomial(QQ, (one,))


def wd_model(e, ell, p):
    """A Weil-Deligne model over QQ realizing the motive's local Euler factor:
    good primes get the unramified companion of the quadratic factor,
    multiplicative primes the rank-one-monodromy model, additive primes the
    zero-invariant model with -1 in the finite inertia part."""
    if ell == p:
        raise PrimeEqualsP("no Weil-Deligne model at ell = p here")
    rt = reduction_type(e, ell)
    zero2 = Matrix.zeros(QQ, 2, 2)
    if rt == GOOD:
        _, a = point_count(e, ell)
        frob = Matrix.from_rows(QQ, [[Fraction(0), Fraction(-1, ell)],
                                     [Fraction(1), Fraction(a, ell)]])
        return WeilDeligneRep(QQ, ell, frob, zero2, weight=-1)
    if rt in (SPLIT_MULT, NONSPLIT_MULT):
        a = 1 if rt == SPLIT_MULT else -1
        frob = Matrix.from_rows(QQ, [[Fraction(a, ell), Fraction(0)],
                                     [Fraction(0), Fraction(a)]])
        mono = Matrix.from_rows(QQ, [[Fraction(0), Fraction(1)],
                                     [Fraction(0), Fraction(0)]])
        return WeilDeligneRep(QQ, ell, frob, mono, weight=-1)
    frob = Matrix.from_rows(QQ, [[Fraction(0), Fraction(1)],
                                 [Fraction(1), Fraction(0)]])
    return WeilDeligneRep(QQ, ell, frob, zero2,
                          inertia=(-Matrix.identity(QQ, 2),), weight=-1)


def _sieve_primes(bound):
    sieve = bytearray([1]) * (bound + 1)
    out = []
    for n in range(2, bound + 1):
        if sieve[n]:
            out.append(n)
            for k in range(n * n, bound + 1, n):
                sieve[k] = 0
    return out


def sturm_bound(n_level, weight=2):
    """ceil(weight * [SL2(Z) : Gamma0(N)] / 12) with the index
    N * prod_{q | N} (1 + 1/q)."""
    index = n_level
    q, m = 2, n_level
    seen = []
    while q * q <= m:
        if m % q == 0:
            seen.append(q)
            while m % q == 0:
                m //= q
        q += 1
    if m > 1:
        seen.append(m)
    for q in seen:
        index = index * (q + 1) // q
    return math.ceil(weight * index / 12)


@dataclass(frozen=True)
class CongruenceReport:
    prime: int
    bound: int
    checked: tuple
    failures: tuple
    congruent: bool


def congruence_check(e1, e2, p, bound=None, conductors=None):
    """a_ell(e1) = a_ell(e2) mod p for every good prime ell up to the bound
    (default: the Sturm-type bound at the lcm of the levels, weight 2)."""
    if bound is None:
        if conductors is not None:
            n1, n2 = conductors
        else:
            n1, n2 = e1.conductor_bound(), e2.conductor_bound()
        bound = sturm_bound(math.lcm(n1, n2))
    checked, failures = [], []
    skip = p * e1.discriminant * e2.discriminant
    for ell in _sieve_primes(bound):
        if skip % ell == 0:
            continue
        _, x = point_count(e1, ell)
        _, y = point_count(e2, ell)
        checked.append(ell)
        if (x - y) % p != 0:
            failures.append((ell, x, y))
    return CongruenceReport(p, bound, tuple(checked), tuple(failures),
                            not failures)


@dataclass(frozen=True)
class UnitRow:
    prime: int
    reduction: str
    factor: Polynomial
    value_at_one: Fraction
    valuation: int


def unit_analysis(e, sigma, p):
    """Exact Eul_ell(1) and its p-valuation for every ell in Sigma minus p."""
    rows = []
    for ell in sorted(set(sigma)):
        if ell == p:
            continue
        factor = euler_factor_motive(e, ell, p)
        value = factor.evaluate(Fraction(1))
        v = 0
        num, den = value.numerator, value.denominator
        while num % p == 0:
            num //= p
            v += 1
        while den % p == 0:
            den //= p
            v -= 1
        rows.append(UnitRow(ell, reduction_type(e, ell), factor, value, v))
    return rows


def residual_frobenius_data(e, p, ell):
    """(trace, det) of residual Frobenius at a good prime: (a_ell, ell) mod p."""
    _, a = point_count(e, ell)
    return a % p, ell % p


# ---------------------------------------------------------------------------
# The shipped congruent pair and its full reproduction
# ---------------------------------------------------------------------------

def shipped_curves():
    e1 = EllipticCurveQ(0, 0, 0, 1, -10)
    e2 = EllipticCurveQ(0, 0, 0, -584, 5444)
    return e1, e2


@dataclass(frozen=True)
class PaperExampleReport:
    a5: tuple
    a7: tuple
    a13: tuple
    reductions: dict
    factors: dict
    valuations: dict
    congruence: CongruenceReport
    obstruction_flag: bool
    passed: bool


def paper_example(p=5):
    """Full reproduction of the shipped congruent-pair analysis: Hecke
    eigenvalues, reduction types, exact Euler factors, the 5-valuation table
    of their values at 1, the congruence scan, and the unit obstruction."""
    e1, e2 = shipped_curves()
    a5 = (point_count(e1, 5)[1], point_count(e2, 5)[1])
    a7 = (point_count(e1, 7)[1], multiplicative_a(e2, 7))
    a13 = (multiplicative_a(e1, 13), multiplicative_a(e2, 13))
    reductions = {
        "E1": {ell: reduction_type(e1, ell) for ell in (2, 7, 13)},
        "E2": {ell: reduction_type(e2, ell) for ell in (2, 7, 13)},
    }
    factors = {
        "E1": {ell: euler_factor_motive(e1, ell, p) for ell in (2, 7, 13)},
        "E2": {ell: euler_factor_motive(e2, ell, p) for ell in (2, 7, 13)},
    }
    rows1 = unit_analysis(e1, (2, 7, 13), p)
    rows2 = unit_analysis(e2, (2, 7, 13), p)
    valuations = {
        "E1": tuple(r.valuation for r in rows1),
        "E2": tuple(r.valuation for r in rows2),
    }
    cong = congruence_check(e1, e2, p)
    tot1 = sum(r.valuation for r in rows1)
    tot2 = sum(r.valuation for r in rows2)
    flag = (tot1 == 0) != (tot2 == 0)

    x = Polynomial(QQ, (Fraction(0), Fraction(1)))
    one = Polynomial(QQ, (Fraction(1),))
    expected = {
        "a5": (2, -3), "a7": (-2, 1), "a13": (-1, -1),
        "red1": (ADDITIVE, GOOD, NONSPLIT_MULT),
        "red2": (ADDITIVE, SPLIT_MULT, NONSPLIT_MULT),
        "f1_7": one + x.scale(Fraction(2, 7)) + (x * x).scale(Fraction(1, 7)),
        "f2_7": one - x.scale(Fraction(1, 7)),
        "f_13": one + x.scale(Fraction(1, 13)),
        "vals": ((0, 1, 0), (0, 0, 0)),
    }
    passed = (
        a5 == expected["a5"] and a7 == expected["a7"] and a13 == expected["a13"]
        and tuple(reductions["E1"][l] for l in (2, 7, 13)) == expected["red1"]
        and tuple(reductions["E2"][l] for l in (2, 7, 13)) == expected["red2"]
        and factors["E1"][7] == expected["f1_7"]
        and factors["E2"][7] == expected["f2_7"]
        and factors["E1"][13] == expected["f_13"]
        and factors["E2"][13] == expected["f_13"]
        and factors["E1"][2] == one and factors["E2"][2] == one
        and (valuations["E1"], valuations["E2"]) == expected["vals"]
        and cong.congruent and len(cong.checked) > 0
        and flag
    )
    return PaperExampleReport(a5, a7, a13, reductions, factors, valuations,
                              cong, flag, passed)
