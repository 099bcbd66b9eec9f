"""Bounded complexes of free modules and the determinant calculus.

A :class:`PerfectComplex` is a bounded complex of free modules given by ranks
and differentials (d^i: C^i -> C^{i+1}, stored as matrices acting on column
vectors).  ``d o d = 0`` is enforced at construction.

Determinant lines are coordinatized: a :class:`GradedLine` is a degree and a
scalar relative to the standard-basis reference, so every "canonical
isomorphism" of the calculus becomes an explicit unit.  The trivialization of
an acyclic complex (its torsion) is normalized so that the two-term complex
[M --(1-F)--> M] in degrees (0, 1) has torsion det(1-F); all other choices
follow from fixing new-basis matrices ordered image-columns-first.  The
torsion is independent of the choice of splitting columns, and that is tested
rather than assumed.
"""

from __future__ import annotations

from dataclasses import dataclass

from .matrices import Matrix, rank, smith_normal_form_with_inverse
from .rings import IntegerRing, PAdicRing, UnsupportedRing


class ShapeMismatch(Exception):
    pass


class NotAcyclic(Exception):
    pass


class NoSplitting(Exception):
    pass


class StructureMismatch(Exception):
    pass


class PerfectComplex:
    """Bounded complex of free R-modules in degrees lowest..lowest+len(ranks)-1."""

    __slots__ = ("ring", "lowest", "ranks", "diffs")

    def __init__(self, ring, lowest, ranks, diffs, check=True):
        ranks = tuple(int(r) for r in ranks)
        diffs = tuple(diffs)
        if any(r < 0 for r in ranks):
            raise ShapeMismatch("negative rank")
        if len(diffs) != max(len(ranks) - 1, 0):
            raise ShapeMismatch("need exactly one differential between adjacent degrees")
        for k, d in enumerate(diffs):
            if (d.rows, d.cols) != (ranks[k + 1], ranks[k]):
                raise ShapeMismatch(f"differential {k} has shape {(d.rows, d.cols)}, "
                                    f"expected {(ranks[k + 1], ranks[k])}")
            if d.ring != ring:
                raise ShapeMismatch("differential over the wrong ring")
        if check:
            for d1, d2 in zip(diffs, diffs[1:]):
                if not (d2 * d1).is_zero():
                    raise ShapeMismatch("d o d != 0")
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "lowest", int(lowest))
        object.__setattr__(self, "ranks", ranks)
        object.__setattr__(self, "diffs", diffs)

    def __setattr__(self, *a):
        raise AttributeError("PerfectComplex is immutable")

    @classmethod
    def zero(cls, ring):
        return cls(ring, 0, (), ())

    @classmethod
    def single(cls, ring, degree, r):
        return cls(ring, degree, (r,), ())

    @classmethod
    def two_term(cls, d, lowest=0):
        """[C^lowest --d--> C^(lowest+1)]."""
        return cls(d.ring, lowest, (d.cols, d.rows), (d,))

    @property
    def highest(self):
        return self.lowest + len(self.ranks) - 1

    def degrees(self):
        return range(self.lowest, self.lowest + len(self.ranks))

    def rank_at(self, i):
        k = i - self.lowest
        return self.ranks[k] if 0 <= k < len(self.ranks) else 0

    def diff_at(self, i):
        """d^i: C^i -> C^{i+1} (a zero matrix outside the support)."""
        k = i - self.lowest
        if 0 <= k < len(self.diffs):
            return self.diffs[k]
        return Matrix.zeros(self.ring, self.rank_at(i + 1), self.rank_at(i))

    def euler_characteristic(self):
        return sum((1 if i % 2 == 0 else -1) * self.rank_at(i) for i in self.degrees())

    def total_rank(self):
        return sum(self.ranks)

    def __eq__(self, other):
        return (
            isinstance(other, PerfectComplex)
            and self.ring == other.ring
            and self.lowest == other.lowest
            and self.ranks == other.ranks
            and all(a == b for a, b in zip(self.diffs, other.diffs))
        )

    def __hash__(self):
        return hash((self.ring, self.lowest, self.ranks))

    def __repr__(self):
        return f"PerfectComplex({self.ring.name()}, lowest={self.lowest}, ranks={self.ranks})"

    def shift(self, k):
        """C[k] with C[k]^i = C^{i+k} and differential (-1)^k d."""
        diffs = self.diffs if k % 2 == 0 else tuple(-d for d in self.diffs)
        return PerfectComplex(self.ring, self.lowest - k, self.ranks, diffs, check=False)

    def direct_sum(self, other):
        if other.total_rank() == 0:
            return self
        if self.total_rank() == 0:
            return other
        lo = min(self.lowest, other.lowest)
        hi = max(self.highest, other.highest)
        ranks = [self.rank_at(i) + other.rank_at(i) for i in range(lo, hi + 1)]
        diffs = []
        for i in range(lo, hi):
            diffs.append(_block_diag2(self.ring, self.diff_at(i), other.diff_at(i),
                                      self.rank_at(i), other.rank_at(i),
                                      self.rank_at(i + 1), other.rank_at(i + 1)))
        return PerfectComplex(self.ring, lo, ranks, diffs, check=False)

    def map_entries(self, fn, new_ring):
        return PerfectComplex(new_ring, self.lowest, self.ranks,
                              [d.map_entries(fn, new_ring) for d in self.diffs])


def _block_diag2(ring, a, b, ca, cb, ra, rb):
    out = [[ring.zero()] * (ca + cb) for _ in range(ra + rb)]
    for i in range(a.rows):
        for j in range(a.cols):
            out[i][j] = a[i, j]
    for i in range(b.rows):
        for j in range(b.cols):
            out[ra + i][ca + j] = b[i, j]
    if not out:
        return Matrix(ring, 0, ca + cb, [])
    return Matrix.from_rows(ring, out)


class ComplexMap:
    """A degree-wise map of complexes, commuting with the differentials."""

    __slots__ = ("source", "target", "components")

    def __init__(self, source, target, components, check=True):
        comps = {}
        for i in range(min(source.lowest, target.lowest),
                       max(source.highest, target.highest) + 1):
            m = components.get(i)
            if m is None:
                m = Matrix.zeros(source.ring, target.rank_at(i), source.rank_at(i))
            if (m.rows, m.cols) != (target.rank_at(i), source.rank_at(i)):
                raise ShapeMismatch(f"component at degree {i} has wrong shape")
            comps[i] = m
        if check:
            for i in comps:
                left = target.diff_at(i) * comps[i]
                right = comps.get(i + 1,
                                  Matrix.zeros(source.ring, target.rank_at(i + 1),
                                               source.rank_at(i + 1))) * source.diff_at(i)
                if not (left - right).is_zero():
                    raise ShapeMismatch(f"map does not commute with d at degree {i}")
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "components", comps)

    def __setattr__(self, *a):
        raise AttributeError("ComplexMap is immutable")

    @classmethod
    def zero(cls, source, target):
        return cls(source, target, {}, check=False)

    @classmethod
    def identity(cls, c):
        return cls(c, c, {i: Matrix.identity(c.ring, c.rank_at(i)) for i in c.degrees()},
                   check=False)

    def component(self, i):
        m = self.components.get(i)
        if m is None:
            return Matrix.zeros(self.source.ring, self.target.rank_at(i),
                                self.source.rank_at(i))
        return m


def cone(f):
    """Mapping cone: Cone(f)^i = target^i (+) source^{i+1}."""
    S, T = f.source, f.target
    R = S.ring
    lo = min(T.lowest, S.lowest - 1)
    hi = max(T.highest, S.highest - 1)
    ranks = [T.rank_at(i) + S.rank_at(i + 1) for i in range(lo, hi + 1)]
    diffs = []
    for i in range(lo, hi):
        dT = T.diff_at(i)
        dS = S.diff_at(i + 1)
        fi = f.component(i + 1)
        rows = []
        for r in range(T.rank_at(i + 1)):
            rows.append([dT[r, c] for c in range(T.rank_at(i))]
                        + [fi[r, c] for c in range(S.rank_at(i + 1))])
        for r in range(S.rank_at(i + 2)):
            rows.append([R.zero()] * T.rank_at(i)
                        + [R.neg(dS[r, c]) for c in range(S.rank_at(i + 1))])
        m = (Matrix.from_rows(R, rows) if rows
             else Matrix(R, 0, T.rank_at(i) + S.rank_at(i + 1), []))
        diffs.append(m)
    out = PerfectComplex(R, lo, ranks, diffs)
    return _trim(out)


def _trim(c):
    """Drop zero-rank degrees at both ends."""
    ranks = list(c.ranks)
    diffs = list(c.diffs)
    lo = c.lowest
    while ranks and ranks[0] == 0:
        ranks.pop(0)
        if diffs:
            diffs.pop(0)
        lo += 1
    while ranks and ranks[-1] == 0:
        ranks.pop()
        if diffs:
            diffs.pop()
    if not ranks:
        return PerfectComplex.zero(c.ring)
    return PerfectComplex(c.ring, lo, ranks, diffs, check=False)


# ---------------------------------------------------------------------------
# Cohomology
# ---------------------------------------------------------------------------

def cohomology(c):
    """Per-degree description of H^i = ker d^i / im d^{i-1}.

    Returns {degree: {"free_rank": int, "invariant_factors": [ring elements]}}.
    Over a field the factors are empty; over Z and Z/p^n they are the
    nontrivial elementary divisors.
    """
    R = c.ring
    if R.is_field:
        out = {}
        for i in c.degrees():
            h = c.rank_at(i) - rank(c.diff_at(i)) - rank(c.diff_at(i - 1))
            out[i] = {"free_rank": h, "invariant_factors": []}
        return out
    if isinstance(R, IntegerRing):
        return {i: _cohomology_at_integers(c, i) for i in c.degrees()}
    if isinstance(R, PAdicRing):
        return {i: _cohomology_at_padic(c, i) for i in c.degrees()}
    raise UnsupportedRing(f"cohomology unsupported over {R.name()}")


def _cohomology_at_integers(c, i):
    R = c.ring
    d_i = c.diff_at(i)
    d_prev = c.diff_at(i - 1)
    _, D, V, Vinv = smith_normal_form_with_inverse(d_i)
    ker_idx = [j for j in range(d_i.cols)
               if j >= min(D.rows, D.cols) or R.is_zero(D[j, j])]
    k = len(ker_idx)
    # coordinates of im d^{i-1} in the kernel basis (rows of Vinv at ker_idx)
    w = Vinv * d_prev
    rel = Matrix(R, k, d_prev.cols,
                 [w[j, col] for j in ker_idx for col in range(d_prev.cols)])
    _, DR, _, _ = smith_normal_form_with_inverse(rel)
    diag = [DR[t, t] for t in range(min(DR.rows, DR.cols))]
    factors = [d for d in diag if not R.is_zero(d) and not R.is_unit(d)]
    r = sum(1 for d in diag if not R.is_zero(d))
    return {"free_rank": k - r, "invariant_factors": factors}


def _cohomology_at_padic(c, i):
    R = c.ring
    d_i = c.diff_at(i)
    d_prev = c.diff_at(i - 1)
    _, D, V, Vinv = smith_normal_form_with_inverse(d_i)
    # kernel generators: p^(n-k_j) * (V e_j), with annihilator p^(k_j)
    gens = []
    for j in range(d_i.cols):
        kv = R.n if (j >= min(D.rows, D.cols) or R.is_zero(D[j, j])) \
            else R.valuation(D[j, j])
        if kv > 0:
            gens.append((j, kv))
    w = Vinv * d_prev
    rows = []
    for j, kv in gens:
        row = []
        for col in range(d_prev.cols):
            val = w[j, col]
            scale = R.p ** (R.n - kv)
            assert val % scale == 0, "image column escaped the kernel lattice"
            row.append((val // scale) % R.modulus)
        rows.append(row)
    k = len(gens)
    ann = Matrix.diagonal(R, [R.from_int(R.p ** kv) for _, kv in gens]) \
        if k else Matrix(R, 0, 0, [])
    rel = Matrix.from_rows(R, rows) if rows else Matrix(R, 0, d_prev.cols, [])
    pres = rel.hstack(ann) if k else Matrix(R, 0, d_prev.cols, [])
    _, DR, _, _ = smith_normal_form_with_inverse(pres)
    diag = [DR[t, t] for t in range(min(DR.rows, DR.cols))]
    factors = [d for d in diag if not R.is_zero(d) and not R.is_unit(d)]
    r = sum(1 for d in diag if not R.is_zero(d))
    return {"free_rank": k - r, "invariant_factors": factors}


def is_acyclic(c):
    h = cohomology(c)
    return all(v["free_rank"] == 0 and not v["invariant_factors"] for v in h.values())


# ---------------------------------------------------------------------------
# Graded lines and torsion
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GradedLine:
    """A graded invertible module in coordinates: (degree, scalar).

    The scalar is the coordinate of the distinguished basis relative to the
    standard-basis reference; it lives in the stated ring (usually a fraction
    field when inverses are taken).
    """

    ring: object
    degree: int
    scalar: object

    def tensor(self, other):
        if self.ring != other.ring:
            raise ShapeMismatch("graded lines over different rings")
        return GradedLine(self.ring, self.degree + other.degree,
                          self.ring.mul(self.scalar, other.scalar))

    def inverse(self):
        return GradedLine(self.ring, -self.degree, self.ring.inv(self.scalar))


def det_complex(c):
    """Det of a perfect complex as a graded line: degree = Euler characteristic,
    scalar 1 relative to the standard bases.  Det(0) = (R, 0)."""
    return GradedLine(c.ring, c.euler_characteristic(), c.ring.one())


def _ranks_or_fail(c):
    """Differential ranks for an acyclic complex; NotAcyclic otherwise."""
    R = c.ring
    try:
        rs = {i: rank(c.diff_at(i)) for i in c.degrees()}
    except UnsupportedRing as e:
        raise NoSplitting(str(e)) from e
    for i in c.degrees():
        if c.rank_at(i) != rs[i] + rs.get(i - 1, 0):
            raise NotAcyclic(f"H^{i} != 0")
    return rs


def _full_rank_columns(d, r, order):
    """Greedy choice of r columns of d forming a full-column-rank submatrix."""
    if r == 0:
        return []
    cols = list(range(d.cols))
    if order == "backward":
        cols.reverse()
    chosen = []
    try:
        for j in cols:
            trial = chosen + [j]
            if rank(d.columns_sub(trial)) == len(trial):
                chosen.append(j)
                if len(chosen) == r:
                    return sorted(chosen)
    except UnsupportedRing as e:
        raise NoSplitting(str(e)) from e
    raise NoSplitting("could not select independent columns")


def _det_field(m):
    """Determinant via elimination with unit pivots (exact, any supported ring)."""
    from .matrices import det
    return det(m)


def torsion_of_acyclic(c, pivot_order="forward"):
    """The canonical trivialization scalar of an acyclic based complex.

    Normalized so that torsion([M --(1-F)--> M]) in degrees (0, 1) equals
    det(1-F).  Computed from new-basis matrices T_i = [d^{i-1} J-columns |
    selected unit vectors], with exponent (-1)^(i+1); the value does not
    depend on the column choices, which ``pivot_order`` varies for testing.
    """
    R = c.ring
    if c.total_rank() == 0:
        return R.one()
    if isinstance(R, IntegerRing):
        # strict integral acyclicity, then compute in QQ where pivots divide
        if not is_acyclic(c):
            raise NotAcyclic("complex has integral cohomology")
        from fractions import Fraction
        from .rings import QQ
        tau = torsion_of_acyclic(c.map_entries(lambda x: Fraction(x), QQ), pivot_order)
        return int(tau) if tau.denominator == 1 else tau
    rs = _ranks_or_fail(c)
    js = {}
    for i in c.degrees():
        js[i] = _full_rank_columns(c.diff_at(i), rs[i], pivot_order)
    tau = R.one()
    inv_part = R.one()
    for i in c.degrees():
        prev = c.diff_at(i - 1)
        im_cols = [prev.column(j) for j in js.get(i - 1, [])]
        e_cols = []
        n = c.rank_at(i)
        for j in js[i]:
            col = [R.zero()] * n
            col[j] = R.one()
            e_cols.append(col)
        cols = im_cols + e_cols
        t = Matrix(R, n, n, [cols[k][r0] for r0 in range(n) for k in range(n)])
        dt = _det_field(t)
        if R.is_zero(dt):
            raise NoSplitting("singular new-basis matrix")
        if (i % 2) == 0:
            inv_part = R.mul(inv_part, dt)
        else:
            tau = R.mul(tau, dt)
    if not R.is_unit(inv_part):
        raise NoSplitting("non-unit even-degree determinant")
    return R.mul(tau, R.inv(inv_part))


def base_change_complex(c, hom):
    """Entrywise image of the complex under a ring hom."""
    from .rings import DomainMismatch
    if c.ring != hom.source:
        raise DomainMismatch("complex is not over the hom's source ring")
    return c.map_entries(hom, hom.target)


# ---------------------------------------------------------------------------
# Short exact sequences of complexes
# ---------------------------------------------------------------------------

class ShortExactSequence:
    """0 -> C1 --alpha--> C2 --beta--> C3 -> 0, degree-wise exact."""

    __slots__ = ("alpha", "beta")

    def __init__(self, alpha, beta, check=True):
        if alpha.target is not beta.source and alpha.target != beta.source:
            raise ShapeMismatch("alpha.target != beta.source")
        if check:
            c1, c2, c3 = alpha.source, alpha.target, beta.target
            for i in range(min(c1.lowest, c2.lowest, c3.lowest),
                           max(c1.highest, c2.highest, c3.highest) + 1):
                a, b = alpha.component(i), beta.component(i)
                if c1.rank_at(i) + c3.rank_at(i) != c2.rank_at(i):
                    raise ShapeMismatch(f"ranks not additive at degree {i}")
                if not (b * a).is_zero():
                    raise ShapeMismatch(f"beta o alpha != 0 at degree {i}")
                if rank(a) != c1.rank_at(i) or rank(b) != c3.rank_at(i):
                    raise ShapeMismatch(f"not exact at degree {i}")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)

    def __setattr__(self, *a):
        raise AttributeError("ShortExactSequence is immutable")

    @property
    def sub(self):
        return self.alpha.source

    @property
    def middle(self):
        return self.alpha.target

    @property
    def quotient(self):
        return self.beta.target


def extension_middle(c1, c3, twists=None):
    """Build the based extension of c3 by c1: middle^i = C1^i (+) C3^i with
    differential [[d1, h], [0, d3]]; the twist h must satisfy d1 h + h d3 = 0.

    Returns the ShortExactSequence with the canonical inclusion/projection.
    """
    R = c1.ring
    lo = min(c1.lowest, c3.lowest) if (c1.total_rank() and c3.total_rank()) else \
        (c1.lowest if c1.total_rank() else c3.lowest)
    hi = max(c1.highest, c3.highest)
    twists = twists or {}
    ranks = []
    diffs = []
    for i in range(lo, hi + 1):
        ranks.append(c1.rank_at(i) + c3.rank_at(i))
    for i in range(lo, hi):
        d1 = c1.diff_at(i)
        d3 = c3.diff_at(i)
        h = twists.get(i, Matrix.zeros(R, c1.rank_at(i + 1), c3.rank_at(i)))
        rows = []
        for r0 in range(c1.rank_at(i + 1)):
            rows.append([d1[r0, j] for j in range(c1.rank_at(i))]
                        + [h[r0, j] for j in range(c3.rank_at(i))])
        for r0 in range(c3.rank_at(i + 1)):
            rows.append([R.zero()] * c1.rank_at(i)
                        + [d3[r0, j] for j in range(c3.rank_at(i))])
        diffs.append(Matrix.from_rows(R, rows) if rows
                     else Matrix(R, 0, ranks[i - lo], []))
    mid = PerfectComplex(R, lo, ranks, diffs)
    alpha = ComplexMap(c1, mid, {
        i: _inclusion(R, c1.rank_at(i), c3.rank_at(i)) for i in range(lo, hi + 1)})
    beta = ComplexMap(mid, c3, {
        i: _projection(R, c1.rank_at(i), c3.rank_at(i)) for i in range(lo, hi + 1)})
    return ShortExactSequence(alpha, beta)


def _inclusion(ring, r1, r3):
    rows = [[ring.one() if i == j else ring.zero() for j in range(r1)]
            for i in range(r1)]
    rows += [[ring.zero()] * r1 for _ in range(r3)]
    return Matrix.from_rows(ring, rows) if rows else Matrix(ring, 0, r1, [])


def _projection(ring, r1, r3):
    rows = [[ring.one() if j == r1 + i else ring.zero() for j in range(r1 + r3)]
            for i in range(r3)]
    return Matrix.from_rows(ring, rows) if rows else Matrix(ring, 0, r1 + r3, [])


@dataclass(frozen=True)
class TorsionMultiplicativityReport:
    sub: object
    middle: object
    quotient: object
    equal: bool


def ses_torsion_multiplicativity(ses):
    """Verify torsion(C2) = torsion(C1) * torsion(C3) on an SES of acyclic
    complexes with compatible bases."""
    t1 = torsion_of_acyclic(ses.sub)
    t2 = torsion_of_acyclic(ses.middle)
    t3 = torsion_of_acyclic(ses.quotient)
    R = ses.middle.ring
    return TorsionMultiplicativityReport(t1, t2, t3, R.eq(t2, R.mul(t1, t3)))
