import itertools
import random

import numpy as np
import pytest

from fubinilab import convspace as cs
from fubinilab import convvect as cv
from fubinilab import factorlab as fl
from fubinilab.errors import AxiomViolation, IterationBudgetExhausted
from fubinilab.monadlab.monads import DoubleDualizationMonad, double_dual_unit, is_iso

from oracles import vec_add


@pytest.fixture(scope="module")
def limit_world(small_vects):
    vects = small_vects["limit"]
    maps = fl.universe_maps(vects)
    h = DoubleDualizationMonad(vects)
    sigma = fl.sigma_inverted(h, maps)
    return vects, maps, sigma, fl.Completer(sigma, h)


def indiscrete_line(field):
    return cv.ConvVect(field, 1, [[0, 1]])


def lin(dom, cod, rows):
    return cv.LinMap(dom, cod, np.array(rows, dtype=np.int64).reshape(cod.dim, dom.dim))


def null_span_size(e):
    """Size of the span of every vector lying in a set that converges to zero."""
    if e.is_discrete:
        return 1
    seeds = {u for s in e.conv0 for u in s}
    span = {0}
    while True:
        grown = span | {vec_add(a, b, e.p, e.dim) for a in span for b in seeds}
        if grown == span:
            return len(span)
        span = grown


# monos and epis -------------------------------------------------------------------
def test_identity_is_mono_epi_and_strong(f2, small_vects):
    r = cv.scalar_object(f2)
    i = cv.LinMap.identity(r)
    assert fl.is_v_mono(i, small_vects["limit"])
    assert fl.is_v_epi(i, small_vects["limit"])
    assert fl.is_strong_mono(i)


def test_zero_map_is_neither(f2, small_vects):
    r = cv.scalar_object(f2)
    z = cv.LinMap.zero(r, r)
    assert not fl.is_v_mono(z, small_vects["limit"])
    assert not fl.is_v_epi(z, small_vects["limit"])
    assert not fl.is_strong_mono(z)


def test_coordinate_inclusion_is_strong_mono(f2):
    r = cv.scalar_object(f2)
    plane = cv.ConvVect(f2, 2)
    inc = lin(r, plane, [1, 0])
    assert fl.is_v_mono(inc) and fl.is_strong_mono(inc)
    assert not fl.is_v_epi(inc)


def test_coarsening_bijection_is_mono_and_epi_but_not_strong(f2):
    r, line = cv.scalar_object(f2), indiscrete_line(f2)
    b = lin(r, line, [1])
    assert fl.is_v_mono(b) and fl.is_v_epi(b)
    assert not fl.is_strong_mono(b)


def test_mono_and_epi_follow_injectivity_and_surjectivity(small_vects, axioms):
    vects = small_vects[axioms]
    for f in fl.universe_maps(vects):
        assert fl.is_v_mono(f, vects) == f.is_injective
        assert fl.is_v_epi(f, vects) == f.is_surjective


# orthogonality ------------------------------------------------------------------------
def test_isomorphisms_are_orthogonal_to_everything(small_vects):
    vects = small_vects["limit"]
    maps = fl.universe_maps(vects)
    isos = [f for f in maps if f.is_isomorphism()[0]]
    for e in isos:
        for m in maps:
            assert fl.is_orthogonal(e, m).verdict


def test_coarsening_not_orthogonal_to_itself(f2):
    # only the zero map leaves the indiscrete line for the discrete one,
    # while the pullback of hom-objects has two points
    r, line = cv.scalar_object(f2), indiscrete_line(f2)
    b = lin(r, line, [1])
    for route in ("linear", "spaces"):
        cert = fl.is_orthogonal(b, b, route=route)
        assert not cert.verdict and not cert.bijective
        assert cert.witness["kind"] == "no-diagonal"
    assert not fl.is_orthogonal_ordinary(b, b)
    assert fl.orthogonality_routes_agree(b, b)


def test_epis_orthogonal_to_strong_monos(small_vects, axioms):
    vects = small_vects[axioms]
    maps = fl.universe_maps(vects)
    epis = [f for f in maps if f.is_surjective]
    strong = [f for f in maps if fl.is_strong_mono(f)]
    for e in epis:
        for m in strong:
            assert fl.is_orthogonal(e, m).verdict


def test_orthogonality_routes_agree(small_vects, axioms):
    maps = fl.universe_maps(small_vects[axioms])
    pairs = list(itertools.product(maps[::3], maps[::5]))
    # the down universe has over 10^5 pairs here; a fixed sample keeps this quick
    if len(pairs) > 8000:
        pairs = random.Random(0).sample(pairs, 2000)
    for e, m in pairs:
        assert fl.orthogonality_routes_agree(e, m)


def test_routes_agree_when_only_the_pullback_is_coarse(f2):
    # hom from a discrete plane to itself is discrete, the pullback is not
    z, plane = cv.zero_space(f2), cv.ConvVect(f2, 2)
    coarse = cv.ConvVect(f2, 2, [range(4)])
    e = lin(z, plane, [])
    m = lin(plane, coarse, [1, 1, 1, 0])
    for route in ("linear", "spaces"):
        cert = fl.is_orthogonal(e, m, route=route)
        assert cert.bijective and not cert.verdict
        assert cert.witness["kind"] == "inverse-not-continuous"


def test_orthogonal_classes(small_vects):
    maps = fl.universe_maps(small_vects["limit"])
    epis = [f for f in maps if f.is_surjective]
    enriched, ordinary = fl.orthogonal_classes(epis, maps)
    assert set(enriched) <= set(ordinary)
    assert set(enriched) == {i for i, f in enumerate(maps) if fl.is_strong_mono(f)}


def test_certificate_json(f2):
    r, line = cv.scalar_object(f2), indiscrete_line(f2)
    b = lin(r, line, [1])
    doc = fl.is_orthogonal(b, b).to_json()
    assert set(doc) == {"e", "m", "homs", "pullback", "comparison", "verdict", "witness"}
    assert set(doc["homs"]) == {"BC", "AC", "BD", "AD"}
    assert doc["verdict"] is False
    assert len(doc["comparison"]) == 1 and doc["pullback"]["points"] == 2


# factorization -----------------------------------------------------------------------
def test_factorization_recomposes(small_vects, axioms):
    vects = small_vects[axioms]
    for f in fl.universe_maps(vects):
        pair = fl.epi_strongmono_factorize(f)
        assert pair.composite() == f
        assert pair.epi_part.is_surjective
        assert fl.is_strong_mono(pair.mono_part)
        assert pair.image.dim == f.rank


def test_factorization_of_zero_and_iso(f2):
    r = cv.scalar_object(f2)
    pair = fl.epi_strongmono_factorize(cv.LinMap.zero(r, r))
    assert pair.image.dim == 0
    pair = fl.epi_strongmono_factorize(cv.LinMap.identity(r))
    assert pair.epi_part.is_isomorphism()[0] and pair.mono_part.is_isomorphism()[0]


# inverted maps and completion --------------------------------------------------------
def test_identities_are_inverted(limit_world):
    vects, _, sigma, _ = limit_world
    keys = {(f.dom.key, f.cod.key, f.matrix.tobytes()) for f in sigma}
    for e in vects:
        i = cv.LinMap.identity(e)
        assert (e.key, e.key, i.matrix.tobytes()) in keys


def test_double_dual_unit_at_free_spaces_is_inverted(small_spaces, axioms, f2):
    h = DoubleDualizationMonad()
    for x in small_spaces[axioms]:
        unit = double_dual_unit(cv.free(x, f2))
        assert fl.sigma_inverted(h, [unit]) == [unit]


def test_nothing_to_invert_means_complete(small_vects):
    for e in small_vects["limit"]:
        assert fl.is_complete(e, [])


def test_complete_objects_are_the_discrete_ones(limit_world):
    vects, _, sigma, _ = limit_world
    for e in vects:
        assert fl.is_complete(e, sigma) == e.is_discrete


def test_completion_of_complete_object_is_identity(limit_world):
    vects, _, _, comp = limit_world
    for e in vects:
        if e.is_discrete:
            c = comp(e)
            assert c.obj == e and c.unit == cv.LinMap.identity(e)


def test_completion_divides_out_null_vectors(limit_world):
    vects, _, _, comp = limit_world
    for e in vects:
        c = comp(e)
        assert c.obj.is_discrete
        assert c.obj.size * null_span_size(e) == e.size
        assert c.unit.is_surjective


def test_completion_budget(limit_world, f2):
    _, _, sigma, _ = limit_world
    with pytest.raises(IterationBudgetExhausted):
        fl.Completer(sigma, budget=0)(indiscrete_line(f2))
    z = cv.zero_space(f2)
    assert fl.Completer(sigma, budget=0)(z).obj == z


def test_completion_monad(limit_world):
    vects, maps, _, comp = limit_world
    mon = fl.CompletionMonad(comp, vects)
    assert mon.law_failures(maps) == []


def test_completion_comparison(limit_world):
    vects, _, _, comp = limit_world
    m = fl.completion_monad_morphism(comp, vects)
    assert fl.triangle_failures(m, comp) == []
    assert fl.strong_mono_failures(m) == []
    assert m.law_failures(fl.universe_maps(vects)) == []


def test_same_inverted_maps_for_completion(limit_world):
    vects, maps, sigma, comp = limit_world
    s_k = fl.sigma_inverted(fl.CompletionMonad(comp, vects), maps)
    key = lambda f: (f.dom.key, f.cod.key, f.matrix.tobytes())
    assert {key(f) for f in s_k} == {key(f) for f in sigma}


def test_retraction_identity(small_spaces, axioms, f2):
    for x in small_spaces[axioms] + [cs.discrete(0), cs.discrete(1)]:
        assert fl.reflexivity_retraction_check(x, f2)


# reflected tensor --------------------------------------------------------------------
def test_reflected_tensor_coherence(limit_world):
    vects, _, _, comp = limit_world
    assert fl.day_coherence_failures(vects, comp) == []


def test_reflected_tensor_unit_and_zero(limit_world, f2):
    vects, _, _, comp = limit_world
    unit = fl.day_unit(comp, f2)
    assert unit == cv.scalar_object(f2)
    z = cv.zero_space(f2)
    for c in vects:
        if comp.complete(c):
            assert is_iso(fl.day_unit_iso(c, comp))
            assert fl.day_reflection_tensor(z, c, comp).dim == 0
            assert fl.day_reflection_tensor(c, unit, comp).dim == c.dim


def test_reflected_tensor_rejects_incomplete(limit_world, f2):
    _, _, _, comp = limit_world
    with pytest.raises(AxiomViolation):
        fl.day_reflection_tensor(indiscrete_line(f2), cv.scalar_object(f2), comp)
