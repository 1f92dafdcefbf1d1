import itertools

import pytest

from fubinilab import convspace as cs
from fubinilab import convvect as cv
from fubinilab.monadlab.categories import X_CAT
from fubinilab.monadlab.monads import (
    DistributionMonad,
    DoubleDualizationMonad,
    FreeVectorMonad,
    IdentityMonad,
    MonadMorphism,
    TransportedMonad,
    double_dual_unit,
    is_reflexive,
    random_automorphisms,
)

from oracles import continuous, relation


def function_tables(d, x):
    cot = d.cot(x)
    return [d.function_values(x, f) for f in range(cot.size)]


@pytest.fixture(scope="module")
def dmon(small_spaces, f2):
    return {ax: DistributionMonad(f2, small_spaces[ax]) for ax in cs.AXIOMS}


@pytest.fixture(scope="module")
def hmon(small_vects):
    return {ax: DoubleDualizationMonad(small_vects[ax]) for ax in cs.AXIOMS}


# distribution monad -----------------------------------------------------------------
def test_functions_are_continuous_scalar_maps(dmon, axioms, f2):
    d = dmon[axioms]
    r = cv.scalar_object(f2)
    for x in d.universe:
        want = sorted(t for t in itertools.product(range(2), repeat=x.n) if continuous(relation(x), relation(r.space), t))
        assert sorted(function_tables(d, x)) == want


def test_distribution_examples(f2):
    d = DistributionMonad(f2)
    assert d.obj(cs.discrete(1)).n == 2
    assert d.obj(cs.discrete(0)).n == 1
    unit = d.unit(cs.discrete(2))
    assert len(set(unit.table)) == 2


def test_dirac_functionals(dmon, axioms):
    d = dmon[axioms]
    for x in d.universe:
        for pt in range(x.n):
            mu = d.unit(x)(pt)
            for vals in function_tables(d, x):
                assert d.evaluate(x, mu, vals) == vals[pt]


def test_multiplication_formula(dmon, axioms):
    # mult(rho)(f) = rho(mu -> mu(f))
    d = dmon[axioms]
    for x in d.universe:
        dx = d.obj(x)
        if d.obj(dx).n > 64:
            continue
        k = d.mult(x)
        for rho in range(d.obj(dx).n):
            for vals in function_tables(d, x):
                inner = [d.evaluate(x, mu, vals) for mu in range(dx.n)]
                assert d.evaluate(x, k(rho), vals) == d.evaluate(dx, rho, inner)


def test_functor_is_pushforward(dmon, axioms):
    d = dmon[axioms]
    for x in d.universe:
        for y in d.universe:
            for h in cs.homs(x, y):
                dh = d.fmap(h)
                for mu in range(d.obj(x).n):
                    for vals in function_tables(d, y):
                        pulled = [vals[h(i)] for i in range(x.n)]
                        assert d.evaluate(y, dh(mu), vals) == d.evaluate(x, mu, pulled)


def test_distribution_monad_laws(dmon, axioms):
    d = dmon[axioms]
    assert d.law_failures() == []


def test_distribution_monad_laws_f3(small_spaces, f3):
    spaces = [x for x in small_spaces["limit"] if x.n <= 1 or not x.is_discrete]
    d = DistributionMonad(f3, spaces)
    assert d.law_failures() == []


# double dualization ---------------------------------------------------------------------
def test_double_dual_examples(f2):
    h = DoubleDualizationMonad()
    r = cv.scalar_object(f2)
    assert h.obj(r).dim == 1
    assert is_reflexive(r).reflexive
    z = cv.zero_space(f2)
    assert h.obj(z).size == 1 and is_reflexive(z).reflexive


def test_double_dual_unit_is_evaluation(hmon, axioms):
    for e in hmon[axioms].universe:
        d1 = cv.dual(e)
        d2 = cv.dual(d1)
        unit = double_dual_unit(e)
        for u in range(e.size):
            phi2 = d2.linmap_at(unit(u))
            for phi in range(d1.size):
                assert phi2(phi) == d1.linmap_at(phi)(u)


def test_double_dual_monad_laws(hmon, axioms):
    assert hmon[axioms].law_failures() == []


def test_reflexivity_matches_null_span(hmon, axioms):
    # a functional is continuous iff it kills every vector converging to zero
    for e in hmon[axioms].universe:
        v = is_reflexive(e)
        assert v.reflexive == e.is_discrete
        if not v.reflexive:
            assert v.witness["kind"] == "not-injective"


# morphisms and transported monads ---------------------------------------------------------
def test_identity_morphism_laws(dmon):
    d = dmon["limit"]
    ident = MonadMorphism(d, d, lambda x: cs.identity(d.obj(x)), d.universe)
    assert ident.law_failures(d.universe_maps()) == []


def test_transported_monad_is_a_monad(dmon, axioms):
    d = dmon[axioms]
    moved = TransportedMonad(d, random_automorphisms(d, 11))
    assert moved.law_failures() == []
    alpha = random_automorphisms(d, 11)
    iso = MonadMorphism(d, moved, lambda x: alpha(x)[0], d.universe)
    assert iso.law_failures(d.universe_maps()) == []


def test_identity_and_free_monads(small_spaces, f2):
    spaces = small_spaces["limit"]
    assert IdentityMonad(X_CAT, spaces).law_failures() == []
    # iterating the free construction leaves the carrier bound beyond these
    small = [x for x in spaces if x.n <= 1 or x.is_discrete]
    assert FreeVectorMonad(f2, small).law_failures() == []
