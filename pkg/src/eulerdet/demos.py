"""Shipped demonstration families.

``paper_pair_product`` packages the congruent-curve pair as a two-component
product family whose obstruction scan must flag the impossibility of a common
domain-parametrized trivialization.  ``discrepancy_demo_family`` is the
non-domain family whose non-classical specialization exhibits unequal generic
and pointwise Euler factors at a ramified prime.
"""

from __future__ import annotations

from fractions import Fraction

from .complexes import PerfectComplex
from .curves import shipped_curves, wd_model
from .families import AlgebraicFamily, ProductFamily
from .generators import random_frobenius_nondegenerate
from .matrices import Matrix
from .rings import PolynomialRing, QQ, RingHom
from .weildeligne import WeilDeligneRep

DEMO_SIGMA = (2, 5, 7, 13)


def paper_pair_product():
    """The two shipped curves as constant families over QQ, with the
    identity specializations into the (QQ, v_5) DVR model."""
    e1, e2 = shipped_curves()
    comps = []
    for name, e in (("E1", e1), ("E2", e2)):
        local = {ell: wd_model(e, ell, 5) for ell in (2, 7, 13)}
        comps.append((name, AlgebraicFamily(QQ, 5, DEMO_SIGMA, local)))
    prod = ProductFamily(comps)
    psi = ("E1", RingHom.identity(QQ))
    phi = ("E2", RingHom.identity(QQ))
    return prod, psi, phi


def _const(pt, x):
    return pt.constant(QQ.from_int(x) if isinstance(x, int) else x)


def discrepancy_demo_family():
    """A two-component family over Q[T] x Q[T]: the first component is
    ramified at 7 with monodromy T * E12, so the specialization T -> 0 kills
    the monodromy (a non-classical point) while T -> 1 is pure.

    Returns (family, component name, monodromy-killing hom, pure hom).
    """
    pt = PolynomialRing(QQ, "T")
    t = pt.gen()

    # component 1: Steinberg-like at 7 with monodromy T * E12
    phi7 = Matrix.from_rows(pt, [[_const(pt, 1), pt.zero()],
                                 [pt.zero(), _const(pt, 7)]])
    n7 = Matrix.from_rows(pt, [[pt.zero(), t], [pt.zero(), pt.zero()]])
    wd7_a = WeilDeligneRep(pt, 7, phi7, n7, weight=1)
    # component 2: unramified principal-series-like at 7
    phi7b = Matrix.from_rows(pt, [[_const(pt, 2), pt.zero()],
                                  [pt.zero(), _const(pt, 3)]])
    wd7_b = WeilDeligneRep(pt, 7, phi7b, Matrix.zeros(pt, 2, 2), weight=1)
    # a common unramified prime 13 on both components
    phi13 = Matrix.from_rows(pt, [[_const(pt, -1), pt.zero()],
                                  [pt.zero(), _const(pt, 5)]])
    zero2 = Matrix.zeros(pt, 2, 2)

    def component(wd_at_7):
        local = {
            7: wd_at_7,
            13: WeilDeligneRep(pt, 13, phi13, zero2, weight=1),
            2: WeilDeligneRep(pt, 2,
                              Matrix.from_rows(pt, [[pt.zero(), _const(pt, 1)],
                                                    [_const(pt, 1), pt.zero()]]),
                              zero2,
                              inertia=(-Matrix.identity(pt, 2),), weight=1),
        }
        return AlgebraicFamily(pt, 5, DEMO_SIGMA, local)

    prod = ProductFamily([("R1", component(wd7_a)), ("R2", component(wd7_b))])
    kill = RingHom.evaluate_at(pt, Fraction(0))
    pure = RingHom.evaluate_at(pt, Fraction(1))
    return prod, "R1", kill, pure


def constant_family(rng, p=5):
    """A small family over QQ with a supplied global complex, used as the
    base for ramification-set extension checks."""
    local = {}
    for ell in (3, 7):
        n = rng.randint(1, 2)
        frob = random_frobenius_nondegenerate(rng, QQ, n)
        local[ell] = WeilDeligneRep(QQ, ell, frob, Matrix.zeros(QQ, n, n),
                                    weight=0)
    g_rank = rng.randint(1, 3)
    g = PerfectComplex.two_term(
        random_frobenius_nondegenerate(rng, QQ, g_rank), lowest=1)
    return AlgebraicFamily(QQ, p, (3, 5, 7), local, g)
