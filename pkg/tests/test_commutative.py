import itertools
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fubinilab import convspace as cs
from fubinilab.errors import EnrichmentMismatch, MismatchedConstructions
from fubinilab.monadlab import commutative as com
from fubinilab.monadlab import functionals as fn
from fubinilab.monadlab.categories import X_CAT
from fubinilab.monadlab.monads import DistributionMonad, IdentityMonad, TransportedMonad, random_automorphisms


@pytest.fixture(scope="module")
def dmon(small_spaces, f2):
    return {ax: DistributionMonad(f2, small_spaces[ax]) for ax in cs.AXIOMS}


def pairs(spaces):
    return list(itertools.product(spaces, repeat=2))


# strengths -------------------------------------------------------------------------------
def test_strength_routes_agree(dmon, axioms):
    d = dmon[axioms]
    for x, y in pairs(d.universe):
        assert com.tprime_enriched(d, x, y) == com.tprime_lambda(d, x, y)
        assert com.tdoubleprime_enriched(d, x, y) == com.tdoubleprime_lambda(d, x, y)
        assert com.tprime(x, y, d).is_continuous()


def test_strength_mismatch_is_fatal(dmon, monkeypatch):
    d = dmon["limit"]
    x = y = cs.discrete(2)
    good = com.tprime_lambda(d, x, y)
    broken = cs.ContMap(good.dom, good.cod, [0] * good.dom.n, check=False)
    monkeypatch.setattr(com, "tprime_lambda", lambda *a: broken)
    with pytest.raises(MismatchedConstructions):
        com.tprime(x, y, d)


def test_strength_on_points(dmon):
    d = dmon["limit"]
    x = y = cs.discrete(1)
    t = com.tprime(x, y, d)
    # one point: the strength transports each functional unchanged
    assert len(set(t.table)) == d.obj(x).n


def test_strength_on_diracs(dmon):
    d = dmon["limit"]
    x = y = cs.discrete(2)
    t = com.tprime(x, y, d)
    xy = cs.product(x, y)
    for a in range(2):
        for b in range(2):
            assert t(d.unit(x)(a) * y.n + b) == d.unit(xy)(a * y.n + b)


def test_strength_natural(dmon):
    d = dmon["limit"]
    for x, x2, y in itertools.product(d.universe, repeat=3):
        for h in cs.homs(x, x2):
            lhs = cs.compose(d.fmap(cs.product_map(h, cs.identity(y))), com.tprime(x, y, d))
            rhs = cs.compose(com.tprime(x2, y, d), cs.product_map(d.fmap(h), cs.identity(y)))
            assert lhs.table == rhs.table
    for x, y, y2 in itertools.product(d.universe, repeat=3):
        for k in cs.homs(y, y2):
            lhs = cs.compose(d.fmap(cs.product_map(cs.identity(x), k)), com.tprime(x, y, d))
            rhs = cs.compose(com.tprime(x, y2, d), cs.product_map(cs.identity(d.obj(x)), k))
            assert lhs.table == rhs.table


# the two composites ----------------------------------------------------------------------
def test_composites_are_iterated_integrals(dmon, axioms):
    d = dmon[axioms]
    for x, y in pairs(d.universe):
        assert com.identification_failures(d, x, y) == []


def test_composites_on_diracs(dmon, axioms):
    d = dmon[axioms]
    for x, y in pairs(d.universe):
        otimes, tilde = com.fubini_pair(x, y, d)
        xy = cs.product(x, y)
        ty = d.obj(y).n
        for a in range(x.n):
            for b in range(y.n):
                q = d.unit(x)(a) * ty + d.unit(y)(b)
                assert otimes(q) == tilde(q) == d.unit(xy)(a * y.n + b)


def test_commutative_everywhere_on_universe(dmon, axioms):
    d = dmon[axioms]
    for x, y in pairs(d.universe):
        v = com.check_commutative(d, x, y)
        assert v.equal and v.witness is None
        assert v.implication_holds
        doc = v.to_json()
        assert set(doc) == {"X", "Y", "reflexive", "equal", "witness"}


def test_point_case_equal(dmon):
    d = dmon["limit"]
    v = com.check_commutative(d, cs.discrete(1), cs.discrete(1))
    assert v.equal and v.hypotheses_hold


def test_indiscrete_pair_recorded(dmon):
    d = dmon["limit"]
    v = com.check_commutative(d, cs.indiscrete(2), cs.indiscrete(2))
    assert set(v.reflexive) == {"cot_X", "cot_Y", "cot_XY"}
    assert v.implication_holds


def test_witness_on_disagreement(dmon):
    d = dmon["limit"]
    x = y = cs.discrete(1)
    otimes, tilde = com.fubini_pair(x, y, d)
    bad = cs.ContMap(tilde.dom, tilde.cod, [0] * tilde.dom.n, check=False)
    equal, witness = com.compare_pair(x, y, d, (otimes, bad))
    assert not equal
    assert {"mu", "nu", "otimes", "otimes_tilde", "f", "lhs", "rhs"} <= set(witness)


def test_verdict_invariant_under_isomorphism(dmon, axioms):
    d = dmon[axioms]
    moved = TransportedMonad(d, random_automorphisms(d, 5))
    for x, y in pairs(d.universe):
        assert com.compare_pair(x, y, d)[0] == com.compare_pair(x, y, moved)[0]


def test_unit_coherence(dmon, axioms):
    # otimes . (unit x unit) = unit at the product
    d = dmon[axioms]
    for x, y in pairs(d.universe):
        otimes, _ = com.fubini_pair(x, y, d, tilde=False)
        both = cs.product_map(d.unit(x), d.unit(y), cod=otimes.dom)
        assert cs.compose(otimes, both) == d.unit(cs.product(x, y))


# enrichment recovered from the monoidal structure ------------------------------------------
def test_kock_identity_monad():
    ident = IdentityMonad(X_CAT)
    for x, y in pairs(list(cs.enumerate_spaces(2))):
        r = com.kock_enrichment(ident, x, y)
        assert r.matches
        for h, table in r.derived.items():
            assert table == h


def test_kock_point_universe(dmon):
    d = dmon["limit"]
    one = cs.discrete(1)
    r = com.kock_enrichment(d, one, one)
    assert r.matches and len(r.derived) == 1


def test_kock_round_trip(dmon, axioms):
    d = dmon[axioms]
    for x, y in pairs(d.universe):
        assert com.kock_enrichment(d, x, y).matches


def test_kock_mismatch_raises():
    x = y = cs.discrete(2)

    class Broken(IdentityMonad):
        # wrong only on maps x -> y, which the strengths never push forward
        def fmap(self, f):
            if f.dom == x and f.cod == y:
                return cs.ContMap(x, y, [0] * x.n)
            return f

    with pytest.raises(EnrichmentMismatch):
        com.kock_enrichment(Broken(X_CAT), x, y)
    assert not com.kock_enrichment(Broken(X_CAT), x, y, strict=False).matches


# functionals over exact rationals -------------------------------------------------------
fractions = st.fractions(min_value=-5, max_value=5, max_denominator=7)


@given(
    st.lists(fractions, min_size=1, max_size=3),
    st.lists(fractions, min_size=1, max_size=3),
    st.data(),
)
def test_lambda_composites_are_double_sums(mu_w, nu_w, data):
    f = data.draw(st.lists(st.lists(fractions, min_size=len(nu_w), max_size=len(nu_w)), min_size=len(mu_w), max_size=len(mu_w)))
    mu = fn.weighted(dict(enumerate(mu_w)))
    nu = fn.weighted(dict(enumerate(nu_w)))
    g = lambda pr: f[pr[0]][pr[1]]
    total = sum((mu_w[a] * nu_w[b] * f[a][b] for a in range(len(mu_w)) for b in range(len(nu_w))), Fraction(0))
    assert fn.otimes(mu, nu)(g) == fn.otimes_tilde(mu, nu)(g) == total
    assert fn.iterated_inner_x(mu, nu, g) == fn.iterated_inner_y(mu, nu, g) == total


def test_dirac_functional():
    assert fn.dirac(3)(lambda v: v * v) == 9
    mu = fn.pushforward(lambda a: a + 1, fn.dirac(1))
    assert mu(lambda v: v) == 2
    assert fn.flatten(fn.dirac(fn.dirac(4)))(lambda v: v) == 4
