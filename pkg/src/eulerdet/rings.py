"""Exact coefficient rings.

Every ring is an object exposing arithmetic on plain element values:
integers for ZZ / GF(p) / Z/p^n, ``fractions.Fraction`` for QQ, tuples of
integers for the truncated Iwasawa algebra Z/p^a[[T]]/(T^b), and
:class:`~eulerdet.poly.Polynomial` / :class:`~eulerdet.poly.RationalFunction`
instances for polynomial rings and their fraction fields.  No floating point
enters any ring operation; equality is always decidable.

Precision model: a p-adic element carries (p, n) on its ring and an Iwasawa
element carries (p, a, b); mixed-precision operations are performed at the
minimum of the operand precisions.
"""

from __future__ import annotations

from fractions import Fraction

from .poly import Polynomial, RationalFunction


class RingError(Exception):
    pass


class UnsupportedRing(RingError):
    """The requested operation needs structure this ring does not have."""


class PrecisionExhausted(RingError):
    """An exact answer would need more p-adic or T-adic precision."""


class DomainMismatch(RingError):
    """An element was fed to a hom or ring it does not belong to."""


class Ring:
    """Base class; subclasses define zero/one/add/neg/mul and friends."""

    is_field = False
    is_domain = False

    def key(self):
        raise NotImplementedError

    def __eq__(self, other):
        return isinstance(other, Ring) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return self.name()

    def name(self):
        raise NotImplementedError

    # -- arithmetic ---------------------------------------------------
    def sub(self, x, y):
        return self.add(x, self.neg(y))

    def eq(self, x, y):
        return x == y

    def is_zero(self, x):
        return self.eq(x, self.zero())

    def is_one(self, x):
        return self.eq(x, self.one())

    def sum(self, xs):
        acc = self.zero()
        for x in xs:
            acc = self.add(acc, x)
        return acc

    def prod(self, xs):
        acc = self.one()
        for x in xs:
            acc = self.mul(acc, x)
        return acc

    def pow(self, x, n):
        if n < 0:
            return self.pow(self.inv(x), -n)
        acc = self.one()
        base = x
        while n:
            if n & 1:
                acc = self.mul(acc, base)
            base = self.mul(base, base)
            n >>= 1
        return acc

    def div(self, x, y):
        """Exact division by a unit."""
        return self.mul(x, self.inv(y))

    def contains(self, x):
        raise NotImplementedError

    def check(self, x):
        if not self.contains(x):
            raise DomainMismatch(f"{x!r} is not an element of {self.name()}")
        return x

    # -- hooks used by linear algebra ---------------------------------
    def snf_norm(self, x):
        """Pivot-selection key; smaller is better.  None for zero."""
        raise UnsupportedRing(f"{self.name()} has no Smith normal form support")

    def divmod(self, x, y):
        """Return (q, r) with x = q*y + r and r strictly smaller, if possible."""
        raise UnsupportedRing(f"{self.name()} has no division structure")


class IntegerRing(Ring):
    is_domain = True

    def key(self):
        return ("ZZ",)

    def name(self):
        return "ZZ"

    def zero(self):
        return 0

    def one(self):
        return 1

    def from_int(self, n):
        return int(n)

    def add(self, x, y):
        return x + y

    def neg(self, x):
        return -x

    def mul(self, x, y):
        return x * y

    def is_unit(self, x):
        return x in (1, -1)

    def inv(self, x):
        if not self.is_unit(x):
            raise UnsupportedRing(f"{x} is not a unit in ZZ")
        return x

    def contains(self, x):
        return isinstance(x, int)

    def snf_norm(self, x):
        return None if x == 0 else abs(x)

    def divmod(self, x, y):
        q, r = divmod(x, y)
        # pull the remainder into (-|y|/2, |y|/2] so norms strictly decrease
        if 2 * abs(r) > abs(y):
            q, r = q + (1 if y > 0 else -1), r - abs(y) * (1 if r > 0 else -1)
        return q, r


class RationalField(Ring):
    is_field = True
    is_domain = True

    def key(self):
        return ("QQ",)

    def name(self):
        return "QQ"

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def from_int(self, n):
        return Fraction(n)

    def add(self, x, y):
        return x + y

    def neg(self, x):
        return -x

    def mul(self, x, y):
        return x * y

    def is_unit(self, x):
        return x != 0

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("inverse of 0 in QQ")
        return 1 / Fraction(x)

    def contains(self, x):
        return isinstance(x, (Fraction, int))

    def snf_norm(self, x):
        return None if x == 0 else 1

    def divmod(self, x, y):
        return Fraction(x) / Fraction(y), Fraction(0)


class PrimeField(Ring):
    is_field = True
    is_domain = True

    def __init__(self, p):
        if p < 2 or any(p % q == 0 for q in range(2, int(p**0.5) + 1)):
            raise ValueError(f"{p} is not prime")
        self.p = p

    def key(self):
        return ("GF", self.p)

    def name(self):
        return f"GF({self.p})"

    def zero(self):
        return 0

    def one(self):
        return 1 % self.p

    def from_int(self, n):
        return n % self.p

    def add(self, x, y):
        return (x + y) % self.p

    def neg(self, x):
        return (-x) % self.p

    def mul(self, x, y):
        return (x * y) % self.p

    def is_unit(self, x):
        return x % self.p != 0

    def inv(self, x):
        return pow(x, -1, self.p)

    def contains(self, x):
        return isinstance(x, int) and 0 <= x < self.p

    def snf_norm(self, x):
        return None if x % self.p == 0 else 1

    def divmod(self, x, y):
        return self.mul(x, self.inv(y)), 0


class PAdicRing(Ring):
    """Truncated p-adics Z/p^n, with valuation capped at the precision n."""

    def __init__(self, p, n):
        if n < 1:
            raise ValueError("precision must be >= 1")
        self.p = p
        self.n = n
        self.modulus = p**n

    def key(self):
        return ("Zp", self.p, self.n)

    def name(self):
        return f"Z/{self.p}^{self.n}"

    def zero(self):
        return 0

    def one(self):
        return 1

    def from_int(self, n):
        return n % self.modulus

    def add(self, x, y):
        return (x + y) % self.modulus

    def neg(self, x):
        return (-x) % self.modulus

    def mul(self, x, y):
        return (x * y) % self.modulus

    def is_unit(self, x):
        return x % self.p != 0

    def inv(self, x):
        if not self.is_unit(x):
            raise UnsupportedRing(f"{x} is not a unit in {self.name()}")
        return pow(x, -1, self.modulus)

    def contains(self, x):
        return isinstance(x, int) and 0 <= x < self.modulus

    def valuation(self, x):
        """Largest k <= n with p^k | x; returns n for 0 (infinity at precision)."""
        if x % self.modulus == 0:
            return self.n
        v = 0
        while x % self.p == 0:
            x //= self.p
            v += 1
        return v

    def from_rational(self, x):
        x = Fraction(x)
        if x.denominator % self.p == 0:
            raise DomainMismatch(f"{x} is not {self.p}-integral")
        return (x.numerator * pow(x.denominator, -1, self.modulus)) % self.modulus

    def snf_norm(self, x):
        return None if x % self.modulus == 0 else self.valuation(x)

    def divmod(self, x, y):
        if self.valuation(x) >= self.valuation(y):
            v = self.valuation(y)
            yu = y // self.p**v
            q = ((x // self.p**v) * pow(yu, -1, self.modulus)) % self.modulus
            return q, 0
        return 0, x


class IwasawaRing(Ring):
    """Z/p^a[[T]]/(T^b): the Iwasawa algebra at finite (p-adic, T-adic) precision.

    Elements are tuples of length b with entries reduced mod p^a.
    """

    def __init__(self, p, a, b):
        if a < 1 or b < 1:
            raise ValueError("precisions must be >= 1")
        self.p = p
        self.a = a
        self.b = b
        self.pa = p**a

    def key(self):
        return ("Iw", self.p, self.a, self.b)

    def name(self):
        return f"Z/{self.p}^{self.a}[[T]]/(T^{self.b})"

    def zero(self):
        return (0,) * self.b

    def one(self):
        return (1,) + (0,) * (self.b - 1)

    def from_int(self, n):
        return (n % self.pa,) + (0,) * (self.b - 1)

    def from_coeffs(self, coeffs):
        cs = [c % self.pa for c in coeffs[: self.b]]
        cs += [0] * (self.b - len(cs))
        return tuple(cs)

    def gen(self):
        """The variable T."""
        if self.b < 2:
            raise PrecisionExhausted("T-precision 1 cannot represent T")
        return (0, 1) + (0,) * (self.b - 2)

    def add(self, x, y):
        return tuple((u + v) % self.pa for u, v in zip(x, y))

    def neg(self, x):
        return tuple((-u) % self.pa for u in x)

    def mul(self, x, y):
        out = [0] * self.b
        for i, u in enumerate(x):
            if u == 0:
                continue
            for j, v in enumerate(y):
                if i + j >= self.b:
                    break
                out[i + j] = (out[i + j] + u * v) % self.pa
        return tuple(out)

    def is_unit(self, x):
        return x[0] % self.p != 0

    def inv(self, x):
        if not self.is_unit(x):
            raise UnsupportedRing(f"{x} is not a unit in {self.name()}")
        # power-series inversion, doubling the T-precision each round
        inv0 = pow(x[0], -1, self.pa)
        cur = (inv0,) + (0,) * (self.b - 1)
        k = 1
        while k < self.b:
            # cur <- cur * (2 - x*cur)
            t = self.sub(self.from_int(2), self.mul(x, cur))
            cur = self.mul(cur, t)
            k *= 2
        return cur

    def contains(self, x):
        return (
            isinstance(x, tuple)
            and len(x) == self.b
            and all(isinstance(c, int) and 0 <= c < self.pa for c in x)
        )

    def coeff_valuation(self, c):
        if c % self.pa == 0:
            return self.a
        v = 0
        while c % self.p == 0:
            c //= self.p
            v += 1
        return v

    def mu_lambda(self, x):
        """(mu, lambda) of a nonzero element: mu = min coefficient valuation,
        lambda = first index where the valuation mu is attained."""
        vals = [self.coeff_valuation(c) for c in x]
        mu = min(vals)
        if mu >= self.a:
            return self.a, None
        return mu, vals.index(mu)

    def divide_exact(self, x, y):
        """Return q with q*y = x, or None when y does not divide x at precision."""
        if all(c == 0 for c in y):
            return None
        mu_y, lam_y = self.mu_lambda(y)
        if lam_y is None:
            return None
        if all(c % self.p**mu_y == 0 for c in x):
            x1 = tuple((c // self.p**mu_y) % (self.pa) for c in x)
        else:
            return None
        y1 = tuple((c // self.p**mu_y) % (self.pa) for c in y)
        # after stripping p^mu, divide by the distinguished*unit factorisation
        unit, dist, mu2 = weierstrass_prepare(self, y1)
        if mu2 != 0:
            return None
        q, r = _weierstrass_divide(self, x1, dist)
        if any(c % self.p ** max(self.a - mu_y, 0) != 0 for c in r):
            return None
        return self.mul(q, self.inv(unit))

    def snf_norm(self, x):
        mu, lam = self.mu_lambda(x)
        if lam is None and all(c == 0 for c in x):
            return None
        return (mu, self.b if lam is None else lam)

    def divmod(self, x, y):
        q = self.divide_exact(x, y)
        if q is None:
            return self.zero(), x
        return q, self.zero()


class PolynomialRing(Ring):
    """Dense univariate polynomials over a base ring."""

    def __init__(self, base, var="T"):
        self.base = base
        self.var = var

    def key(self):
        return ("Poly", self.base.key(), self.var)

    def name(self):
        return f"{self.base.name()}[{self.var}]"

    @property
    def is_domain(self):
        return self.base.is_domain

    def zero(self):
        return Polynomial(self.base, ())

    def one(self):
        return Polynomial(self.base, (self.base.one(),))

    def gen(self):
        return Polynomial(self.base, (self.base.zero(), self.base.one()))

    def from_int(self, n):
        return Polynomial(self.base, (self.base.from_int(n),))

    def constant(self, c):
        return Polynomial(self.base, (c,))

    def from_coeffs(self, coeffs):
        return Polynomial(self.base, tuple(coeffs))

    def add(self, x, y):
        return x + y

    def neg(self, x):
        return -x

    def mul(self, x, y):
        return x * y

    def is_unit(self, x):
        return x.degree == 0 and self.base.is_unit(x.coeffs[0])

    def inv(self, x):
        if not self.is_unit(x):
            raise UnsupportedRing(f"{x} is not a unit in {self.name()}")
        return Polynomial(self.base, (self.base.inv(x.coeffs[0]),))

    def contains(self, x):
        return isinstance(x, Polynomial) and x.ring == self.base

    def snf_norm(self, x):
        if x.degree < 0:
            return None
        if not self.base.is_field:
            raise UnsupportedRing(f"{self.name()} has no Smith normal form support")
        return x.degree

    def divmod(self, x, y):
        if not self.base.is_field:
            raise UnsupportedRing(f"{self.name()} has no division structure")
        return x.divmod(y)


class FractionField(Ring):
    """Fraction field of a polynomial ring over a field (rational functions)."""

    is_field = True
    is_domain = True

    def __init__(self, polyring):
        if not polyring.base.is_field:
            raise UnsupportedRing("fraction field needs a field of coefficients")
        self.polyring = polyring

    def key(self):
        return ("Frac", self.polyring.key())

    def name(self):
        return f"Frac({self.polyring.name()})"

    def zero(self):
        return RationalFunction(self.polyring.zero(), self.polyring.one())

    def one(self):
        return RationalFunction(self.polyring.one(), self.polyring.one())

    def from_int(self, n):
        return RationalFunction(self.polyring.from_int(n), self.polyring.one())

    def from_poly(self, x):
        return RationalFunction(x, self.polyring.one())

    def add(self, x, y):
        return x + y

    def neg(self, x):
        return -x

    def mul(self, x, y):
        return x * y

    def is_unit(self, x):
        return x.num.degree >= 0

    def inv(self, x):
        if x.num.degree < 0:
            raise ZeroDivisionError("inverse of 0 rational function")
        return RationalFunction(x.den, x.num)

    def contains(self, x):
        return isinstance(x, RationalFunction) and x.num.ring == self.polyring.base

    def snf_norm(self, x):
        return None if x.num.degree < 0 else 1

    def divmod(self, x, y):
        return x * self.inv(y), self.zero()


ZZ = IntegerRing()
QQ = RationalField()


def fraction_field_of(ring):
    """The field used for generic-fibre computations over ``ring``."""
    if ring.is_field:
        return ring
    if isinstance(ring, PolynomialRing) and ring.base.is_field:
        return FractionField(ring)
    raise UnsupportedRing(f"no computable fraction field for {ring.name()}")


def embed_in_fraction_field(ring, field, x):
    if ring == field:
        return x
    if isinstance(field, FractionField) and field.polyring == ring:
        return field.from_poly(x)
    raise DomainMismatch(f"cannot embed {ring.name()} into {field.name()}")


# ---------------------------------------------------------------------------
# Weierstrass preparation
# ---------------------------------------------------------------------------

def _weierstrass_divide(ring, h, dist):
    """Divide h by a distinguished polynomial in ring = Z/p^a[[T]]/(T^b).

    ``dist`` is a Polynomial over Z/p^a, monic of degree lam with non-leading
    coefficients divisible by p.  Returns (q, r) with h = q*dist + r and
    deg r < lam, both as ring elements (r has zero coefficients from lam on).
    """
    lam = dist.degree
    b, pa = ring.b, ring.pa
    if lam == 0:
        return h, ring.zero()
    # dist = T^lam - rlow with rlow = -(non-leading part), p | rlow
    rlow = [(-dist.coeffs[i]) % pa if i < len(dist.coeffs) - 1 else 0 for i in range(lam)]
    q = [0] * b
    rem = list(h)
    for _ in range(ring.a + 1):
        high = rem[lam:] + [0] * lam
        if all(c == 0 for c in high):
            break
        for i, c in enumerate(high):
            q[i] = (q[i] + c) % pa
        # rem <- rem_low + high * rlow
        new = rem[:lam] + [0] * (b - lam)
        for i, c in enumerate(high):
            if c == 0:
                continue
            for j, rc in enumerate(rlow):
                if i + j >= b:
                    break
                new[i + j] = (new[i + j] + c * rc) % pa
        rem = new
    return tuple(q), tuple(rem)


def weierstrass_prepare(ring, f):
    """Factor f = p^mu * unit * distinguished in Z/p^a[[T]]/(T^b).

    Returns (unit, distinguished, mu) where unit is a ring element with unit
    constant term and distinguished is a monic Polynomial over Z/p^a whose
    non-leading coefficients have positive p-valuation.  The product recovers
    f exactly at the working precision.
    """
    if not isinstance(ring, IwasawaRing):
        raise UnsupportedRing("weierstrass_prepare needs an Iwasawa ring")
    ring.check(f)
    if all(c == 0 for c in f):
        raise ValueError("weierstrass_prepare of 0")
    mu, _ = ring.mu_lambda(f)
    f1 = tuple((c // ring.p**mu) % ring.pa for c in f)
    vals = [ring.coeff_valuation(c) for c in f1]
    if 0 not in vals:
        raise PrecisionExhausted("no unit coefficient after removing p-power")
    lam = vals.index(0)
    if lam >= ring.b:
        raise PrecisionExhausted("lambda-invariant >= T-precision")
    coeff_ring = PAdicRing(ring.p, ring.a)
    if lam == 0:
        dist = Polynomial(coeff_ring, (1,))
        return f1, dist, mu
    # divide T^lam by f1: T^lam = q*f1 + r, then dist = T^lam - r, unit = q^{-1}
    tlam = tuple(1 if i == lam else 0 for i in range(ring.b))
    q, r = _iwasawa_divide_by(ring, tlam, f1, lam)
    dist_coeffs = [(-c) % ring.pa for c in r[:lam]] + [1]
    dist = Polynomial(coeff_ring, tuple(dist_coeffs))
    unit = ring.inv(q)
    assert ring.mul(unit, ring.from_coeffs(dist_coeffs)) == f1, "preparation round-trip failed"
    return unit, dist, mu


def _iwasawa_divide_by(ring, h, g, lam):
    """Divide h by g where g has lambda-invariant lam and unit coefficient there.

    Returns (q, r) with h = q*g + r in the ring and deg r < lam.
    """
    b, pa = ring.b, ring.pa
    ghigh = ring.from_coeffs(list(g[lam:]) + [0] * lam)
    glow = [g[i] for i in range(lam)]  # all divisible by p
    ginv = ring.inv(ghigh)
    q = ring.zero()
    rem = list(h)
    for _ in range(ring.a + 1):
        high = ring.from_coeffs(rem[lam:] + [0] * lam)
        if all(c == 0 for c in high):
            break
        qstep = ring.mul(ginv, high)
        q = ring.add(q, qstep)
        new = rem[:lam] + [0] * (b - lam)
        for i, c in enumerate(qstep):
            if c == 0:
                continue
            for j, gc in enumerate(glow):
                if i + j >= b:
                    break
                new[i + j] = (new[i + j] - c * gc) % pa
        rem = new
    return q, tuple(rem)


# ---------------------------------------------------------------------------
# Ring homomorphisms
# ---------------------------------------------------------------------------

class RingHom:
    """A specialization map between two supported rings.

    Built from the named constructors; ``compose`` chains them.  Application
    is element-wise through :func:`apply_hom` for matrices and polynomials.
    """

    def __init__(self, source, target, fn, descriptor):
        self.source = source
        self.target = target
        self._fn = fn
        self.descriptor = descriptor

    def __repr__(self):
        return f"RingHom({self.descriptor}: {self.source.name()} -> {self.target.name()})"

    def __call__(self, x):
        self.source.check(x)
        return self._fn(x)

    @staticmethod
    def identity(ring):
        return RingHom(ring, ring, lambda x: x, {"kind": "identity"})

    @staticmethod
    def compose(homs):
        """Compose left-to-right: the first hom is applied first."""
        if not homs:
            raise ValueError("empty composition")
        for f, g in zip(homs, homs[1:]):
            if f.target != g.source:
                raise DomainMismatch("non-matching composition")
        def fn(x):
            for h in homs:
                x = h(x)
            return x
        return RingHom(homs[0].source, homs[-1].target,
                       fn, {"kind": "compose", "parts": [h.descriptor for h in homs]})

    @staticmethod
    def reduce_mod(source, p, precision=1):
        """Reduction mod (p, precision): to GF(p) when precision = 1, else to Z/p^n."""
        target = PrimeField(p) if precision == 1 else PAdicRing(p, precision)
        desc = {"kind": "reduce_mod", "p": p, "precision": precision}
        if isinstance(source, IntegerRing):
            return RingHom(source, target, lambda x: target.from_int(x), desc)
        if isinstance(source, RationalField):
            def fn(x):
                x = Fraction(x)
                if x.denominator % p == 0:
                    raise DomainMismatch(f"{x} is not {p}-integral")
                m = p**precision
                return (x.numerator * pow(x.denominator, -1, m)) % m
            return RingHom(source, target, fn, desc)
        if isinstance(source, PAdicRing):
            if source.p != p or source.n < precision:
                raise DomainMismatch("cannot increase precision by reduction")
            return RingHom(source, target, lambda x: x % p**precision, desc)
        if isinstance(source, IwasawaRing):
            if source.p != p or source.a < precision:
                raise DomainMismatch("cannot increase precision by reduction")
            tgt = IwasawaRing(p, precision, source.b)
            return RingHom(source, tgt, lambda x: tgt.from_coeffs(x), desc)
        raise UnsupportedRing(f"reduce_mod undefined on {source.name()}")

    @staticmethod
    def truncate_iwasawa(source, a, b):
        """Drop to lower (p-adic, T-adic) precision."""
        if not isinstance(source, IwasawaRing) or a > source.a or b > source.b:
            raise DomainMismatch("truncation must not increase precision")
        tgt = IwasawaRing(source.p, a, b)
        return RingHom(source, tgt, lambda x: tgt.from_coeffs(x[:b]),
                       {"kind": "truncate", "a": a, "b": b})

    @staticmethod
    def evaluate_at(source, value, target=None):
        """Evaluate the variable of a polynomial or Iwasawa ring."""
        if isinstance(source, PolynomialRing):
            target = target or source.base
            if target == source.base:
                fn = lambda x: x.evaluate(value)
            else:
                raise DomainMismatch("evaluation target must be the base ring")
            return RingHom(source, target, fn,
                           {"kind": "evaluate", "var": source.var, "value": value})
        if isinstance(source, IwasawaRing):
            tgt = PAdicRing(source.p, source.a)
            v = tgt.from_int(value) if isinstance(value, int) else value
            def fn(x):
                acc, powv = 0, 1
                for c in x:
                    acc = (acc + c * powv) % tgt.modulus
                    powv = (powv * v) % tgt.modulus
                return acc
            return RingHom(source, tgt, fn,
                           {"kind": "evaluate", "var": "T", "value": v})
        raise UnsupportedRing(f"evaluate_at undefined on {source.name()}")

    @staticmethod
    def on_fractions(hom):
        """Extend a hom on a polynomial ring to its fraction field (partially
        defined: errors when the denominator dies)."""
        src = FractionField(hom.source)
        def fn(x):
            den = hom(x.den)
            if hom.target.is_zero(den):
                raise DomainMismatch("denominator vanishes under specialization")
            return hom.target.div(hom(x.num), den)
        return RingHom(src, hom.target, fn,
                       {"kind": "on_fractions", "base": hom.descriptor})


def apply_hom(x, hom):
    """Apply a RingHom to a scalar, Polynomial or Matrix, element-wise."""
    from .matrices import Matrix

    if isinstance(x, Matrix):
        if x.ring != hom.source:
            raise DomainMismatch("matrix is not over the hom's source ring")
        return x.map_entries(hom, hom.target)
    if isinstance(x, Polynomial) and not hom.source.contains(x):
        # polynomial whose *coefficients* live in the hom's source
        if x.ring != hom.source:
            raise DomainMismatch("polynomial is not over the hom's source ring")
        return x.map_coeffs(hom, hom.target)
    return hom(x)
