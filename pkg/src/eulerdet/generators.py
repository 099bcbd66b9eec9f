"""Seeded random instance generators for the property suites.

Everything is driven by an explicit ``random.Random`` so runs are exactly
reproducible; no generator touches global state.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .complexes import PerfectComplex, extension_middle
from .frobenius import EtaleZeroScheme, FrobeniusModule, LocalConditionDatum, SelmerDatum
from .complexes import ComplexMap
from .matrices import Matrix, det, rank
from .rings import IwasawaRing, PolynomialRing, QQ
from .weildeligne import WeilDeligneRep


def rng_for(seed):
    return random.Random(seed)


def _rand_int(rng, lo=-4, hi=4):
    return rng.randint(lo, hi)


def random_invertible(rng, ring, dim, spread=3):
    """Random invertible matrix: unit-diagonal triangulars times a permutation."""
    if dim == 0:
        return Matrix(ring, 0, 0, [])
    low = [[ring.from_int(_rand_int(rng, -spread, spread)) if i > j
            else (ring.one() if i == j else ring.zero())
            for j in range(dim)] for i in range(dim)]
    up = [[ring.from_int(_rand_int(rng, -spread, spread)) if i < j
           else (ring.one() if i == j else ring.zero())
           for j in range(dim)] for i in range(dim)]
    perm = list(range(dim))
    rng.shuffle(perm)
    pm = [[ring.one() if perm[i] == j else ring.zero() for j in range(dim)]
          for i in range(dim)]
    return (Matrix.from_rows(ring, low) * Matrix.from_rows(ring, up)
            * Matrix.from_rows(ring, pm))


def random_nilpotent(rng, ring, dim):
    """Random nilpotent matrix: conjugated strictly upper triangular."""
    if dim == 0:
        return Matrix(ring, 0, 0, [])
    up = [[ring.from_int(_rand_int(rng)) if i < j else ring.zero()
           for j in range(dim)] for i in range(dim)]
    n = Matrix.from_rows(ring, up)
    p = random_invertible(rng, ring, dim)
    from .matrices import inverse
    return p * n * inverse(p)


def random_frobenius_nondegenerate(rng, ring, dim, tries=50):
    """Invertible F with det(1 - F) != 0."""
    idm = Matrix.identity(ring, dim)
    for _ in range(tries):
        f = random_invertible(rng, ring, dim)
        if not ring.is_zero(det(idm - f)):
            return f
    raise RuntimeError("could not generate a nondegenerate Frobenius")


def random_semisimple_at_one(rng, ring, dim):
    """F acting semi-simply at the eigenvalue 1: blockdiag(I_k, A) with
    det(1 - A) != 0, conjugated by a random invertible matrix."""
    k = rng.randint(0, dim)
    blocks = []
    if k:
        blocks.append(Matrix.identity(ring, k))
    if dim - k:
        blocks.append(random_frobenius_nondegenerate(rng, ring, dim - k))
    f = Matrix.block_diagonal(ring, blocks) if blocks else Matrix(ring, 0, 0, [])
    p = random_invertible(rng, ring, dim)
    from .matrices import inverse
    return p * f * inverse(p), k


def random_zero_scheme(rng, ring, max_points=5, max_degree=4, max_rank=3):
    points = []
    for _ in range(rng.randint(1, max_points)):
        deg = rng.randint(1, max_degree)
        r = rng.randint(1, max_rank)
        stalk = FrobeniusModule(ring, random_invertible(rng, ring, r))
        points.append((deg, stalk))
    return EtaleZeroScheme(ring, points)


def random_acyclic_complex(rng, ring, lowest=0):
    """A random acyclic three-term complex 0 -> R^a -> R^(a+c) -> R^c -> 0,
    conjugated in the middle so the splitting choice is nontrivial."""
    a = rng.randint(1, 2)
    c = rng.randint(1, 2)
    from .matrices import inverse
    t = random_invertible(rng, ring, a + c)
    tinv = inverse(t)
    d0 = Matrix(ring, a + c, a,
                [t[i, j] for i in range(a + c) for j in range(a)])
    d1 = Matrix(ring, c, a + c,
                [tinv[a + i, j] for i in range(c) for j in range(a + c)])
    return PerfectComplex(ring, lowest, (a, a + c, c), (d0, d1))


def random_two_term_ses(rng, ring, max_dim=3, lowest=0):
    """A based extension of two-term acyclic complexes on a common support."""
    n1 = rng.randint(1, max_dim)
    n3 = rng.randint(1, max_dim)
    c1 = PerfectComplex.two_term(random_frobenius_nondegenerate(rng, ring, n1),
                                 lowest)
    c3 = PerfectComplex.two_term(random_frobenius_nondegenerate(rng, ring, n3),
                                 lowest)
    h = Matrix.from_rows(ring, [[ring.from_int(_rand_int(rng)) for _ in range(n3)]
                                for _ in range(n1)])
    return extension_middle(c1, c3, {lowest: h})


def random_selmer_datum(rng, ring, max_places=3, max_rank=2):
    """Global and local complexes realized as unramified complexes of one
    block-diagonal Frobenius module; localizations are block projections and
    conditions are full, zero, or coordinate-subspace (nearly-ordinary)."""
    places = []
    blocks = []
    conds = []
    for v in range(rng.randint(1, max_places)):
        r = rng.randint(1, max_rank)
        diag = [ring.from_int(rng.choice([2, 3, 5, -1, -2])) for _ in range(r)]
        blocks.append(Matrix.diagonal(ring, diag))
        conds.append(rng.choice(["full", "zero", "nearly-ordinary"]))
    extra = rng.randint(0, 2)
    if extra:
        blocks.append(random_invertible(rng, ring, extra))
    f_total = Matrix.block_diagonal(ring, blocks)
    n = f_total.rows
    g = PerfectComplex.two_term(Matrix.identity(ring, n) - f_total)
    offset = 0
    for v, cond_tag in enumerate(conds):
        r = blocks[v].rows
        f_v = blocks[v]
        local = PerfectComplex.two_term(Matrix.identity(ring, r) - f_v)
        proj = Matrix(ring, r, n,
                      [ring.one() if j == offset + i else ring.zero()
                       for i in range(r) for j in range(n)])
        loc = ComplexMap(g, local, {0: proj, 1: proj})
        if cond_tag == "full":
            condition = LocalConditionDatum.full(local)
        elif cond_tag == "zero":
            condition = LocalConditionDatum.zero(local)
        else:
            s = rng.randint(0, r)
            sub_f = Matrix(ring, s, s, [f_v[i, j] for i in range(s) for j in range(s)])
            sub = PerfectComplex.two_term(Matrix.identity(ring, s) - sub_f)
            inc = Matrix(ring, r, s,
                         [ring.one() if i == j else ring.zero()
                          for i in range(r) for j in range(s)])
            condition = LocalConditionDatum(
                sub, ComplexMap(sub, local, {0: inc, 1: inc}), "nearly-ordinary")
        places.append((f"v{v}", local, condition, loc))
        offset += r
    return SelmerDatum(g, places)


# ---------------------------------------------------------------------------
# Weil-Deligne families over Q[T]
# ---------------------------------------------------------------------------

def _chain_partitions(weight, max_dim):
    """Chain-length multisets with m = weight + 1 (mod 2), total <= max_dim."""
    allowed = [m for m in range(1, max_dim + 1) if (m - weight - 1) % 2 == 0]
    outs = []

    def rec(acc, total, start):
        if acc:
            outs.append(tuple(acc))
        for m in allowed:
            if m < start or total + m > max_dim:
                continue
            rec(acc + [m], total + m, m)

    rec([], 0, 1)
    return outs


def random_wd_family(rng, ell=7, max_dim=4):
    """A family over Q[T] built from eigenvalue chains: Phi is a constant
    diagonal of (signed) powers of ell arranged so the full-rank members are
    pure of the chosen weight; N has polynomial superdiagonal entries.

    Returns (family, pure_points, drop_points): specializing T at a pure
    point preserves the monodromy rank (and purity); at a drop point some
    chain entry vanishes.
    """
    pt = PolynomialRing(QQ, "T")
    weight = rng.choice([0, 1, 2])
    parts = _chain_partitions(weight, max_dim)
    chains = list(rng.choice(parts))
    dim = sum(chains)
    eigs = []
    entries = []   # (row, col, polynomial)
    roots = set()
    pos = 0
    for m in chains:
        k = (weight - m + 1) // 2
        sign = rng.choice([1, -1])
        for i in range(m):
            eigs.append(Fraction(sign) * Fraction(ell) ** (k + i))
        for i in range(m - 1):
            kind = rng.choice(["one", "const", "linear", "linear"])
            if kind == "one":
                f = pt.one()
            elif kind == "const":
                f = pt.from_int(rng.choice([2, 3, -1, -2]))
            else:
                c = rng.randint(-3, 3)
                f = pt.from_coeffs([QQ.from_int(-c), QQ.one()])  # T - c
                roots.add(Fraction(c))
            entries.append((pos + i, pos + i + 1, f))
        pos += m
    phi = Matrix.diagonal(pt, [pt.constant(e) for e in eigs])
    rows = [[pt.zero()] * dim for _ in range(dim)]
    for i, j, f in entries:
        rows[i][j] = f
    mono = Matrix.from_rows(pt, rows) if dim else Matrix(pt, 0, 0, [])
    family = WeilDeligneRep(pt, ell, phi, mono, weight=weight)
    pure_points = [t for t in (Fraction(5), Fraction(7), Fraction(-4), Fraction(9))
                   if t not in roots][:2]
    drop_points = sorted(roots)
    return family, pure_points, drop_points


def random_iwasawa_presentation(rng, ring, dim):
    """Upper-triangular diagonal-plus-perturbation presentation with nonzero
    determinant over the Iwasawa ring."""
    t = ring.gen()
    choices = [
        lambda: ring.add(t, ring.from_int(ring.p * rng.randint(1, 3))),
        lambda: ring.add(ring.mul(t, t), ring.from_int(ring.p)),
        lambda: ring.from_int(ring.p),
        lambda: ring.from_int(rng.choice([1, 2, 3])),
        lambda: ring.sub(t, ring.from_int(ring.p)),
    ]
    rows = [[ring.zero()] * dim for _ in range(dim)]
    for i in range(dim):
        rows[i][i] = rng.choice(choices)()
        for j in range(i + 1, dim):
            if rng.random() < 0.5:
                rows[i][j] = ring.from_int(rng.randint(-2, 2) * ring.p)
    return Matrix.from_rows(ring, rows)
