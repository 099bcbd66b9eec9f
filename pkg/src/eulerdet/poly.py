"""Dense univariate polynomials and rational functions over an exact ring.

A :class:`Polynomial` stores its coefficient ring and a tuple of coefficients,
lowest degree first, with no trailing zeros; the zero polynomial has degree -1.
The coefficient ring is duck-typed (any object from :mod:`eulerdet.rings`).
"""

from __future__ import annotations


class Polynomial:
    __slots__ = ("ring", "coeffs")

    def __init__(self, ring, coeffs):
        coeffs = list(coeffs)
        while coeffs and ring.is_zero(coeffs[-1]):
            coeffs.pop()
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "coeffs", tuple(coeffs))

    def __setattr__(self, *a):
        raise AttributeError("Polynomial is immutable")

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def coeff(self, i):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else self.ring.zero()

    def is_zero(self):
        return not self.coeffs

    def is_monic(self):
        return self.coeffs and self.ring.is_one(self.coeffs[-1])

    def __eq__(self, other):
        return (
            isinstance(other, Polynomial)
            and self.ring == other.ring
            and len(self.coeffs) == len(other.coeffs)
            and all(self.ring.eq(a, b) for a, b in zip(self.coeffs, other.coeffs))
        )

    def __hash__(self):
        return hash((self.ring, self.coeffs))

    def __repr__(self):
        if self.is_zero():
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if self.ring.is_zero(c):
                continue
            if i == 0:
                parts.append(f"{c}")
            elif i == 1:
                parts.append(f"({c})*X")
            else:
                parts.append(f"({c})*X^{i}")
        return " + ".join(parts)

    def __add__(self, other):
        R = self.ring
        n = max(len(self.coeffs), len(other.coeffs))
        return Polynomial(R, [R.add(self.coeff(i), other.coeff(i)) for i in range(n)])

    def __neg__(self):
        return Polynomial(self.ring, [self.ring.neg(c) for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        R = self.ring
        if self.is_zero() or other.is_zero():
            return Polynomial(R, ())
        out = [R.zero()] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if R.is_zero(a):
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = R.add(out[i + j], R.mul(a, b))
        return Polynomial(R, out)

    def scale(self, c):
        R = self.ring
        return Polynomial(R, [R.mul(c, a) for a in self.coeffs])

    def __pow__(self, n):
        acc = Polynomial(self.ring, (self.ring.one(),))
        base = self
        while n:
            if n & 1:
                acc = acc * base
            base = base * base
            n >>= 1
        return acc

    def shift(self, k):
        """Multiply by X^k."""
        if self.is_zero():
            return self
        return Polynomial(self.ring, (self.ring.zero(),) * k + self.coeffs)

    def evaluate(self, x):
        R = self.ring
        acc = R.zero()
        for c in reversed(self.coeffs):
            acc = R.add(R.mul(acc, x), c)
        return acc

    def derivative(self):
        R = self.ring
        return Polynomial(
            R, [R.mul(R.from_int(i), c) for i, c in enumerate(self.coeffs)][1:]
        )

    def compose(self, other):
        R = self.ring
        acc = Polynomial(R, ())
        for c in reversed(self.coeffs):
            acc = acc * other + Polynomial(R, (c,))
        return acc

    def taylor_shift_one(self):
        """Coefficients of P(1 + S) as a polynomial in S."""
        R = self.ring
        one = Polynomial(R, (R.one(), R.one()))
        return self.compose(one)

    def map_coeffs(self, fn, new_ring):
        return Polynomial(new_ring, [fn(c) for c in self.coeffs])

    def divmod(self, other):
        """Euclidean division; requires invertible leading coefficient."""
        R = self.ring
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        lead_inv = R.inv(other.coeffs[-1])
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return Polynomial(R, ()), self
        q = [R.zero()] * (dq + 1)
        for k in range(dq, -1, -1):
            c = R.mul(rem[k + other.degree], lead_inv)
            q[k] = c
            if R.is_zero(c):
                continue
            for j, b in enumerate(other.coeffs):
                rem[k + j] = R.sub(rem[k + j], R.mul(c, b))
        return Polynomial(R, q), Polynomial(R, rem)

    def monic(self):
        if self.is_zero():
            return self
        return self.scale(self.ring.inv(self.coeffs[-1]))


def poly_gcd_monic(f, g):
    """Monic gcd over a field."""
    while not g.is_zero():
        f, g = g, f.divmod(g)[1]
    return f.monic()


def vanishing_order_at_one(p):
    """Multiplicity of the root 1, computed by repeated exact division."""
    R = p.ring
    d = 0
    lin = Polynomial(R, (R.neg(R.one()), R.one()))  # X - 1
    while not p.is_zero() and R.is_zero(p.evaluate(R.one())):
        p, r = p.divmod(lin)
        assert r.is_zero()
        d += 1
    return d


class RationalFunction:
    """A reduced fraction of polynomials over a field, denominator monic."""

    __slots__ = ("num", "den")

    def __init__(self, num, den, reduce=True):
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if reduce:
            g = poly_gcd_monic(num, den) if not num.is_zero() else den.monic()
            if g.degree > 0 or not num.ring.is_one(g.coeff(0)):
                num = num.divmod(g)[0]
                den = den.divmod(g)[0]
            lc = den.coeffs[-1]
            if not den.ring.is_one(lc):
                inv = den.ring.inv(lc)
                num = num.scale(inv)
                den = den.scale(inv)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, *a):
        raise AttributeError("RationalFunction is immutable")

    def __eq__(self, other):
        return (
            isinstance(other, RationalFunction)
            and self.num == other.num
            and self.den == other.den
        )

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        if self.den.degree == 0:
            return f"({self.num})"
        return f"({self.num}) / ({self.den})"

    def __add__(self, other):
        return RationalFunction(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    def __neg__(self):
        return RationalFunction(-self.num, self.den, reduce=False)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        return RationalFunction(self.num * other.num, self.den * other.den)

    def is_zero(self):
        return self.num.is_zero()

    def is_polynomial(self):
        return self.den.degree == 0
