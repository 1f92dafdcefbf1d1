import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fubinilab import convspace as cs
from fubinilab.errors import BoundExceeded


def nonempty_subsets(n):
    pts = range(n)
    return [frozenset(c) for r in range(1, n + 1) for c in itertools.combinations(pts, r)]


def brute_structures(n, axioms):
    """Count structures on ``n`` points straight from the axioms."""
    subsets = nonempty_subsets(n)
    per_point = []
    for x in range(n):
        count = 0
        for bits in range(1 << len(subsets)):
            fam = {s for i, s in enumerate(subsets) if bits >> i & 1}
            if frozenset({x}) not in fam:
                continue
            if any(t not in fam for s in fam for t in subsets if t <= s):
                continue
            if axioms == "limit" and any(a | b not in fam for a in fam for b in fam):
                continue
            count += 1
        per_point.append(count)
    out = 1
    for c in per_point:
        out *= c
    return out


def relation(x):
    return {p: x.members(p) for p in range(x.n)}


def brute_continuous(x, y, table):
    rx, ry = relation(x), relation(y)
    return all(frozenset(table[a] for a in s) in ry[table[p]] for p in range(x.n) for s in rx[p])


def brute_homset(x, y):
    return [t for t in itertools.product(range(y.n), repeat=x.n) if brute_continuous(x, y, t)]


def iso(a, b):
    if a.n != b.n:
        return False
    return any(cs.is_isomorphism(cs.ContMap(a, b, t))[0] for t in brute_homset(a, b))


# basic constructors ------------------------------------------------------------
def test_discrete_spaces():
    assert cs.discrete(0).n == 0
    one = cs.discrete(1)
    assert one.members(0) == {frozenset({0})}
    two = cs.discrete(2)
    assert all(two.members(p) == {frozenset({p})} for p in range(2))


def test_indiscrete_converges_everywhere():
    x = cs.indiscrete(3)
    for p in range(3):
        assert x.members(p) == set(nonempty_subsets(3))


# enumeration -----------------------------------------------------------------
@pytest.mark.parametrize("axioms,n,expected", [("limit", 1, 1), ("limit", 2, 4), ("down", 1, 1), ("down", 2, 9)])
def test_enumeration_counts(axioms, n, expected):
    got = sum(1 for x in cs.enumerate_spaces(n, axioms) if x.n == n)
    assert got == expected == brute_structures(n, axioms)


def test_enumeration_three_points_matches_oracle():
    got = sum(1 for x in cs.enumerate_spaces(3, "limit") if x.n == 3)
    assert got == brute_structures(3, "limit")


def test_enumeration_distinct_and_valid(axioms):
    spaces = list(cs.enumerate_spaces(2, axioms))
    assert len({x.key for x in spaces}) == len(spaces)
    for x in spaces:
        x.validate()
        assert x.satisfies(axioms)
        for p in range(x.n):
            mem = x.members(p)
            assert frozenset({p}) in mem
            assert all(t in mem for s in mem for t in nonempty_subsets(x.n) if t <= s)
            if axioms == "limit":
                assert all(a | b in mem for a in mem for b in mem)


def test_enumeration_deterministic(axioms):
    a = [x.key for x in cs.enumerate_spaces(2, axioms)]
    b = [x.key for x in cs.enumerate_spaces(2, axioms)]
    assert a == b
    sizes = [x.n for x in cs.enumerate_spaces(2, axioms)]
    assert sizes == sorted(sizes)


def test_enumeration_bound():
    with pytest.raises(BoundExceeded):
        list(cs.enumerate_spaces(4))


# products -------------------------------------------------------------------------
def test_product_of_discretes_is_discrete():
    p = cs.product(cs.discrete(2), cs.discrete(2))
    assert p.n == 4 and all(p.members(q) == {frozenset({q})} for q in range(4))


def test_product_with_point_is_iso(small_spaces, axioms):
    for x in small_spaces[axioms]:
        assert iso(cs.product(x, cs.discrete(1)), x)


def test_product_of_indiscretes():
    p = cs.product(cs.indiscrete(2), cs.indiscrete(2))
    for q in range(4):
        assert p.members(q) == set(nonempty_subsets(4))


def test_product_structure_matches_definition(small_spaces, axioms):
    for x in small_spaces[axioms]:
        for y in small_spaces[axioms]:
            p = cs.product(x, y)
            rx, ry = relation(x), relation(y)
            for q in range(p.n):
                a, b = divmod(q, y.n)
                want = {
                    s for s in nonempty_subsets(p.n)
                    if frozenset(t // y.n for t in s) in rx[a] and frozenset(t % y.n for t in s) in ry[b]
                }
                assert p.members(q) == want


def test_product_universal_property(small_spaces):
    spaces = small_spaces["limit"]
    for x, y, w in itertools.product(spaces, repeat=3):
        p = cs.product(x, y)
        px, py = p.projections()
        for f in cs.homs(w, x):
            for g in cs.homs(w, y):
                h = cs.pairing(f, g, cod=p)
                assert h.is_continuous()
                assert cs.compose(px, h) == f and cs.compose(py, h) == g
                matches = [t for t in cs.homset(w, p) if all(t[i] // y.n == f(i) and t[i] % y.n == g(i) for i in range(w.n))]
                assert matches == [h.table]


# function spaces ------------------------------------------------------------------
def test_function_space_from_point_is_iso(small_spaces, axioms):
    for y in small_spaces[axioms]:
        assert iso(cs.function_space(cs.discrete(1), y), y)


def test_function_space_discrete():
    fs = cs.function_space(cs.discrete(2), cs.discrete(2))
    assert fs.n == 4 and fs.is_discrete


def test_function_space_from_empty_is_point():
    assert cs.function_space(cs.discrete(0), cs.indiscrete(2)).n == 1


def test_function_space_matches_definition(small_spaces, axioms):
    for x in small_spaces[axioms]:
        for y in small_spaces[axioms]:
            fs = cs.function_space(x, y)
            maps = brute_homset(x, y)
            assert sorted(fs.elements) == sorted(maps)
            rx, ry = relation(x), relation(y)
            for i, f in enumerate(fs.elements):
                want = {
                    a for a in nonempty_subsets(fs.n)
                    if all(frozenset(fs.elements[k][b] for k in a for b in s) in ry[f[p]] for p in range(x.n) for s in rx[p])
                }
                assert fs.members(i) == want


def test_exponential_law_counts(small_spaces, axioms):
    spaces = small_spaces[axioms]
    for x, y, z in itertools.product(spaces, repeat=3):
        assert len(brute_homset(cs.product(x, y), z)) == len(brute_homset(x, cs.function_space(y, z)))


def test_curry_roundtrip_and_counit(small_spaces, axioms):
    spaces = small_spaces[axioms]
    for x, y, z in itertools.product(spaces, repeat=3):
        xy = cs.product(x, y)
        fs = cs.function_space(y, z)
        ev = cs.eval_map(y, z, fs)
        for f in cs.homs(xy, z):
            c = cs.curry(f)
            assert c.is_continuous()
            assert cs.uncurry(c) == f
            assert cs.compose(ev, cs.product_map(c, cs.identity(y), dom=xy, cod=ev.dom)) == f
        for t in cs.homset(x, fs):
            g = cs.ContMap(x, fs, t)
            assert cs.curry(cs.uncurry(g)) == g


def test_curry_of_second_projection_is_constant():
    x, y = cs.indiscrete(2), cs.discrete(2)
    _, p2 = cs.product(x, y).projections()
    c = cs.curry(p2)
    assert len(set(c.table)) == 1
    assert c.cod.elements[c(0)] == (0, 1)


def test_currying_natural_in_first_argument(small_spaces):
    spaces = small_spaces["limit"]
    for w, x, y, z in itertools.product(spaces, repeat=4):
        if w.n * x.n * y.n * z.n > 8:
            continue
        for h in cs.homs(w, x):
            for f in cs.homs(cs.product(x, y), z):
                lhs = cs.compose(cs.curry(f), h)
                hy = cs.product_map(h, cs.identity(y))
                rhs = cs.curry(cs.compose(f, hy))
                assert lhs.table == rhs.table


def test_evaluation_continuous(small_spaces, axioms):
    for y in small_spaces[axioms]:
        for z in small_spaces[axioms]:
            assert cs.eval_map(y, z).is_continuous()


# embeddings, pullbacks, isomorphisms ----------------------------------------------
def test_embed_full_is_identity(small_spaces, axioms):
    for x in small_spaces[axioms]:
        sub, inc = cs.embed_initial(range(x.n), x)
        assert sub == x and inc.table == tuple(range(x.n))


def test_embed_point_of_indiscrete():
    sub, inc = cs.embed_initial([1], cs.indiscrete(2))
    assert sub.n == 1 and inc.table == (1,)


def test_embedding_initial_for_three_point_spaces(small_spaces):
    tests = small_spaces["limit"]
    for x in cs.enumerate_spaces(3, "limit"):
        if x.n != 3:
            continue
        for r in range(4):
            for s in itertools.combinations(range(3), r):
                sub, inc = cs.embed_initial(s, x)
                assert inc.is_continuous()
                for w in tests:
                    for t in itertools.product(range(sub.n), repeat=w.n):
                        composite = tuple(inc(v) for v in t)
                        assert brute_continuous(w, sub, t) == brute_continuous(w, x, composite)


def test_embedding_of_embedding(small_spaces):
    x = cs.indiscrete(3)
    s1, i1 = cs.embed_initial([0, 2], x)
    s2, i2 = cs.embed_initial([1], s1)
    direct, _ = cs.embed_initial([2], x)
    assert s2 == direct and cs.compose(i1, i2).table == (2,)


def test_pullback_along_identities(small_spaces, axioms):
    for a in small_spaces[axioms]:
        pb, p1, _ = cs.pullback(cs.identity(a), cs.identity(a))
        assert cs.is_isomorphism(p1)[0]


def test_pullback_empty():
    c = cs.discrete(2)
    f = cs.ContMap(cs.discrete(1), c, [0])
    g = cs.ContMap(cs.discrete(1), c, [1])
    assert cs.pullback(f, g)[0].n == 0


def test_pullback_of_discretes_is_set_pullback():
    a, b, c = cs.discrete(2), cs.discrete(2), cs.discrete(2)
    for ta in itertools.product(range(2), repeat=2):
        for tb in itertools.product(range(2), repeat=2):
            pb, p1, p2 = cs.pullback(cs.ContMap(a, c, ta), cs.ContMap(b, c, tb))
            want = sorted((i, j) for i in range(2) for j in range(2) if ta[i] == tb[j])
            assert sorted(zip(p1.table, p2.table)) == want
            assert pb.is_discrete


def test_pullback_universal_property(small_spaces):
    spaces = small_spaces["limit"]
    for a, b, c in itertools.product(spaces, repeat=3):
        for f in cs.homs(a, c):
            for g in cs.homs(b, c):
                pb, p1, p2 = cs.pullback(f, g)
                for w in spaces:
                    for u in cs.homs(w, a):
                        for v in cs.homs(w, b):
                            if cs.compose(f, u) != cs.compose(g, v):
                                continue
                            lifts = [t for t in cs.homset(w, pb) if all(p1(t[i]) == u(i) and p2(t[i]) == v(i) for i in range(w.n))]
                            assert len(lifts) == 1


def test_isomorphism_examples(small_spaces, axioms):
    for x in small_spaces[axioms]:
        ok, inv = cs.is_isomorphism(cs.identity(x))
        assert ok and inv == cs.identity(x)
    # not even continuous
    bij = cs.ContMap(cs.indiscrete(2), cs.discrete(2), [0, 1], check=False)
    assert not cs.is_isomorphism(bij)[0]
    # continuous, but the inverse is not
    bij = cs.ContMap(cs.discrete(2), cs.indiscrete(2), [0, 1])
    assert not cs.is_isomorphism(bij)[0]
    assert not cs.is_isomorphism(cs.ContMap(cs.discrete(2), cs.discrete(1), [0, 0]))[0]


def test_composition_of_continuous_is_continuous(small_spaces, axioms):
    spaces = small_spaces[axioms]
    for x, y, z in itertools.product(spaces, repeat=3):
        for f in cs.homs(x, y):
            for g in cs.homs(y, z):
                assert brute_continuous(x, z, cs.compose(g, f).table)


# JSON -------------------------------------------------------------------------------
@given(st.data())
def test_json_roundtrip(data):
    axioms = data.draw(st.sampled_from(cs.AXIOMS))
    spaces = list(cs.enumerate_spaces(3, axioms)) if axioms == "limit" else list(cs.enumerate_spaces(2, axioms))
    x = data.draw(st.sampled_from(spaces))
    assert cs.from_json(cs.to_json(x)) == x


def test_json_shape():
    d = cs.to_json(cs.indiscrete(2))
    assert d == {"points": 2, "conv": [[3], [3]]}
