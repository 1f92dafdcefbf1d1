"""Individual checks, grouped into suites and keyed by instance.

Every suite exposes ``keys(ctx)`` (the instances it covers, in a fixed order)
and ``run(ctx, key)`` returning a list of :class:`CheckResult`.  Keys are
plain tuples so work can be shipped to worker processes.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Any, Callable

from .. import convspace as cs
from .. import convvect as cv
from .. import factorlab as fl
from ..errors import BoundExceeded, FubiniLabError
from ..monadlab import adjunctions as adj
from ..monadlab import commutative as com
from ..monadlab import functionals as fn
from ..monadlab.categories import L_CAT, X_CAT
from ..monadlab.monads import (
    DistributionMonad,
    DoubleDualizationMonad,
    TransportedMonad,
    double_dual_unit,
    is_iso,
    is_reflexive,
    random_automorphisms,
)
from ..scalars import field_new
from .config import SuiteConfig
from .oracle import oracle_discrete_fubini


@dataclass(frozen=True)
class CheckResult:
    suite: str
    check: str
    key: str
    status: str  # "pass", "fail" or "skip"
    detail: Any = None
    verdict: dict | None = None

    @property
    def ok(self) -> bool:
        return self.status != "fail"


class Context:
    """Universes and shared constructions for one configuration."""

    def __init__(self, config: SuiteConfig):
        self.config = config
        self.field = field_new(config.field)
        self.spaces = list(cs.enumerate_spaces(config.max_size, config.axioms)) if config.max_size > 0 else []

    def sid(self, i: int) -> str:
        return f"S{i}"

    def vid(self, k: int) -> str:
        return f"E{k}"

    @cached_property
    def vects(self) -> list[cv.ConvVect]:
        return list(cv.enumerate_convvects(self.config.vect_points, self.field, self.config.axioms))

    @cached_property
    def d(self) -> DistributionMonad:
        return DistributionMonad(self.field, self.spaces)

    @cached_property
    def h(self) -> DoubleDualizationMonad:
        return DoubleDualizationMonad(self.vects)

    @cached_property
    def vect_maps(self) -> list[cv.LinMap]:
        return fl.universe_maps(self.vects)

    @cached_property
    def sigma(self) -> list[cv.LinMap]:
        return fl.sigma_inverted(self.h, self.vect_maps)

    @cached_property
    def completer(self) -> fl.Completer:
        return fl.Completer(self.sigma, self.h, self.config.budget)

    @cached_property
    def space_maps(self) -> list[cs.ContMap]:
        return self.d.universe_maps()

    def pairs(self) -> list[tuple]:
        n = len(self.spaces)
        return [(i, j) for i in range(n) for j in range(n)]

    def pair_key(self, i: int, j: int) -> str:
        return f"{self.sid(i)}x{self.sid(j)}"

    def rng(self, *parts) -> random.Random:
        return random.Random(":".join(str(p) for p in (self.config.seed,) + parts))


def _result(suite: str, check: str, key: str, ok: bool, detail=None, verdict=None) -> CheckResult:
    return CheckResult(suite, check, key, "pass" if ok else "fail", None if ok else detail, verdict)


def _failures(suite: str, check: str, key: str, failures: list) -> CheckResult:
    return _result(suite, check, key, not failures, failures[:5])


# cartesian closedness ---------------------------------------------------------
def _cartesian(ctx: Context, key: tuple) -> list[CheckResult]:
    i, j, k = key
    x, y, z = ctx.spaces[i], ctx.spaces[j], ctx.spaces[k]
    name = f"{ctx.sid(i)},{ctx.sid(j)},{ctx.sid(k)}"
    xy = cs.product(x, y)
    maps = cs.homs(xy, z)
    fs = cs.function_space(y, z)
    curried = [cs.curry(f) for f in maps]
    target = cs.homset(x, fs)
    bijective = len({c.table for c in curried}) == len(maps) == len(target)
    inverse = all(cs.uncurry(c) == f for c, f in zip(curried, maps))
    ev = cs.eval_map(y, z, fs)
    iy = cs.identity(y)
    triangle = all(
        cs.compose(ev, cs.product_map(c, iy, dom=xy, cod=ev.dom)).table == f.table for c, f in zip(curried, maps)
    )
    return [
        _result("cartesian", "currying-bijection", name, bijective and inverse,
                {"maps": len(maps), "curried": len(target)}),
        _result("cartesian", "evaluation-triangle", name, triangle),
    ]


# free adjunction ----------------------------------------------------------------
def _free(ctx: Context, key: tuple) -> list[CheckResult]:
    i, k = key
    x, e = ctx.spaces[i], ctx.vects[k]
    name = f"{ctx.sid(i)},{ctx.vid(k)}"
    fx = cv.free(x, ctx.field)
    hom = cv.internal_hom(fx, e)
    tables = cs.homset(x, e.space)
    count = hom.size == len(tables)
    ins = cv.insertion(x, ctx.field)
    transposes = [cv.free_transpose(cs.ContMap(x, e.space, t), ctx.field) for t in tables]
    restricted = all(cs.compose(g.underlying, ins).table == t for g, t in zip(transposes, tables))
    distinct = len({g.matrix.tobytes() for g in transposes}) == len(tables)
    tri = adj.free_forgetful(ctx.field, [x], [e]).triangle_failures()
    return [
        _result("free", "hom-count", name, count, {"linear": hom.size, "continuous": len(tables)}),
        _result("free", "transpose-bijection", name, restricted and distinct),
        _failures("free", "triangles", name, tri),
    ]


# monoidal structure ---------------------------------------------------------------
def _monoidal(ctx: Context, key: tuple) -> list[CheckResult]:
    i, j = key
    x, y = ctx.spaces[i], ctx.spaces[j]
    name = ctx.pair_key(i, j)
    fwd, back = cv.strong_monoidal_iso(x, y, ctx.field)
    fx, fy = cv.free(x, ctx.field), cv.free(y, ctx.field)
    ix, iy = cv.insertion(x, ctx.field), cv.insertion(y, ctx.field)
    ixy = cv.insertion(cs.product(x, y), ctx.field)
    gens = all(
        fwd(cv.tensor_code(fx, fy, ix(a), iy(b))) == ixy(a * y.n + b)
        for a in range(x.n)
        for b in range(y.n)
    )
    fwd_yx, _ = cv.strong_monoidal_iso(y, x, ctx.field)
    lhs = cv.free_map(cs.swap(x, y), ctx.field).compose(fwd)
    rhs = fwd_yx.compose(cv.symmetry(fx, fy))
    return [
        _result("monoidal", "iso-on-generators", name, gens and is_iso(fwd) and is_iso(back)),
        _result("monoidal", "symmetry-square", name, lhs == rhs),
    ]


# monads ---------------------------------------------------------------------------
def _monads(ctx: Context, key: tuple) -> list[CheckResult]:
    (which,) = key
    if which == "D":
        return [_failures("monads", "laws", "D", ctx.d.law_failures(ctx.space_maps))]
    return [_failures("monads", "laws", "H", ctx.h.law_failures(ctx.vect_maps))]


# adjunction calculus ------------------------------------------------------------------
def _small_spaces(ctx: Context) -> list:
    return [x for x in ctx.spaces if x.n <= 1 or x.is_discrete]


def _adjunctions(ctx: Context, key: tuple) -> list[CheckResult]:
    (which,) = key
    f = ctx.field
    ff = adj.free_forgetful(f, ctx.spaces, ctx.vects)
    if which == "triangles":
        return [
            _failures("adjunctions", "free-triangles", "all", ff.triangle_failures()),
            _failures("adjunctions", "dual-triangles", "all", adj.dualization(f, ctx.vects, ctx.vects).triangle_failures()),
        ]
    if which == "distribution":
        theta = adj.distribution_comparison(ctx.d, ctx.spaces)
        fails = theta.law_failures(ctx.space_maps)
        iso = adj.morphism_is_iso(theta)
        return [_result("adjunctions", "free-dual-induces-D", "all", not fails and iso, fails[:5])]
    if which == "transport":
        composite = adj.compose_adjunctions(ff, adj.dualization(f)).induced_monad()
        moved = adj.transport_monad(ff, DoubleDualizationMonad())
        diffs = adj.monad_differences(composite, moved, ctx.spaces, ctx.space_maps)
        ident = adj.compose_adjunctions(adj.identity_adjunction(X_CAT, ctx.spaces), ff).induced_monad()
        idiffs = adj.monad_differences(ident, ff.induced_monad(), ctx.spaces, ctx.space_maps)
        return [
            _failures("adjunctions", "composite-equals-transport", "all", diffs),
            _failures("adjunctions", "identity-composite", "all", idiffs),
        ]
    if which == "uniqueness":
        small = _small_spaces(ctx)
        a1 = adj.free_forgetful(f, small)
        a2 = adj.scaled_free_forgetful(f, small)
        fails = adj.uniqueness_failures(a1, a2)
        iso = adj.induced_iso(a1, a2)
        return [
            _failures("adjunctions", "left-adjoints-isomorphic", "small", fails),
            _failures("adjunctions", "induced-monad-iso", "small", iso.law_failures()),
        ]
    if which == "trivial-factorization":
        small = _small_spaces(ctx)
        a1 = adj.free_forgetful(f, small)
        m = adj.monad_morphism_from_factorization(a1, a1, adj.identity_adjunction(L_CAT))
        fails = [f"component at {x!r} is not the identity" for x in small if m(x) != X_CAT.identity(a1.induced_monad().obj(x))]
        return [_failures("adjunctions", "trivial-factorization", "small", fails + m.law_failures())]
    if which == "invariance":
        alpha = random_automorphisms(ctx.d, ctx.config.seed)
        moved = TransportedMonad(ctx.d, alpha)
        out = [_failures("adjunctions", "transported-laws", "all", moved.law_failures(ctx.space_maps))]
        diffs = []
        for i, j in ctx.pairs():
            x, y = ctx.spaces[i], ctx.spaces[j]
            if com.compare_pair(x, y, ctx.d)[0] != com.compare_pair(x, y, moved)[0]:
                diffs.append(ctx.pair_key(i, j))
        out.append(_failures("adjunctions", "verdict-invariance", "all", diffs))
        return out
    raise KeyError(which)


# composites and verdicts ------------------------------------------------------------
def _identification(ctx: Context, key: tuple) -> list[CheckResult]:
    i, j = key
    x, y = ctx.spaces[i], ctx.spaces[j]
    name = ctx.pair_key(i, j)
    d = ctx.d
    pair = com.fubini_pair(x, y, d)
    fails = com.identification_failures(d, x, y, pair)
    dx, dy, dxy = d.unit(x), d.unit(y), d.unit(cs.product(x, y))
    ty = d.obj(y).n
    dirac = all(
        pair[0](dx(a) * ty + dy(b)) == dxy(a * y.n + b) == pair[1](dx(a) * ty + dy(b))
        for a in range(x.n)
        for b in range(y.n)
    )
    return [
        _failures("identification", "iterated-expressions", name, fails),
        _result("identification", "dirac-inputs", name, dirac),
    ]


def _retraction(ctx: Context, key: tuple) -> list[CheckResult]:
    (i,) = key
    ok = fl.reflexivity_retraction_check(ctx.spaces[i], ctx.field)
    return [_result("retraction", "retraction-identity", ctx.sid(i), ok)]


def _fubini(ctx: Context, key: tuple) -> list[CheckResult]:
    i, j = key
    x, y = ctx.spaces[i], ctx.spaces[j]
    v = com.check_commutative(ctx.d, x, y)
    payload = {"instance": ctx.pair_key(i, j), **v.to_json()}
    return [_result("fubini", "implication", ctx.pair_key(i, j), v.implication_holds, v.witness, payload)]


def chain_links(ctx: Context, z: cs.ConvSpace) -> dict[str, bool]:
    """The intermediate links at the free space on ``z``."""
    fz = cv.free(z, ctx.field)
    unit = double_dual_unit(fz)
    inverted = is_iso(ctx.h.fmap(unit))
    comparison = fl.completion_monad_morphism(ctx.completer, [fz])
    i_iso = is_iso(comparison(fz))
    triangle = comparison(fz).compose(ctx.completer(fz).unit) == unit
    return {"unit-inverted": inverted, "comparison-iso": i_iso, "comparison-triangle": triangle}


def _chain(ctx: Context, key: tuple) -> list[CheckResult]:
    i, j = key
    x, y = ctx.spaces[i], ctx.spaces[j]
    name = ctx.pair_key(i, j)
    xy = cs.product(x, y)
    hyp = all(is_reflexive(ctx.d.cot(z)).reflexive for z in (x, y, xy))
    if not hyp:
        return [CheckResult("chain", "hypotheses", name, "skip", "a cotensor is not reflexive")]
    out = []
    for label, z in (("X", x), ("Y", y), ("XY", xy)):
        for link, ok in chain_links(ctx, z).items():
            out.append(_result("chain", link, f"{name}:{label}", ok))
    equal, witness = com.compare_pair(x, y, ctx.d)
    out.append(_result("chain", "commutative", name, equal, witness))
    return out


def _kock(ctx: Context, key: tuple) -> list[CheckResult]:
    i, j = key
    r = com.kock_enrichment(ctx.d, ctx.spaces[i], ctx.spaces[j], strict=False)
    return [_result("kock", "round-trip", ctx.pair_key(i, j), r.matches)]


# oracle ---------------------------------------------------------------------------------
def rational_instance(ctx: Context, k: int) -> dict:
    rng = ctx.rng("oracle", k)

    def q():
        return Fraction(rng.randint(-9, 9), rng.randint(1, 9))

    n, m = rng.randint(1, 3), rng.randint(1, 3)
    return {
        "mu": [q() for _ in range(n)],
        "nu": [q() for _ in range(m)],
        "f": [[q() for _ in range(m)] for _ in range(n)],
    }


def _oracle(ctx: Context, key: tuple) -> list[CheckResult]:
    if key[0] == "rational":
        k = key[1]
        inst = rational_instance(ctx, k)
        mu, nu, f = inst["mu"], inst["nu"], inst["f"]
        lhs, rhs, prod = oracle_discrete_fubini(len(mu), len(nu), mu, nu, f)
        m1 = fn.weighted(dict(enumerate(mu)))
        n1 = fn.weighted(dict(enumerate(nu)))
        g = lambda pr: f[pr[0]][pr[1]]
        got = (fn.otimes(m1, n1)(g), fn.otimes_tilde(m1, n1)(g),
               fn.iterated_inner_x(m1, n1, g), fn.iterated_inner_y(m1, n1, g))
        ok = lhs == rhs == prod and all(v == prod for v in got)
        detail = {"seed": ctx.config.seed, "index": k, "mu": [str(v) for v in mu], "nu": [str(v) for v in nu],
                  "f": [[str(v) for v in row] for row in f], "oracle": str(prod), "got": [str(v) for v in got]}
        return [_result("oracle", "rational", f"Q{k}", ok, detail)]
    _, i, j = key
    x, y = ctx.spaces[i], ctx.spaces[j]
    d, p = ctx.d, ctx.field.p
    xy = cs.product(x, y)
    otimes, tilde = com.fubini_pair(x, y, d)
    ty = d.obj(y).n
    bad = []
    for fpt in range(d.cot(xy).size):
        vals = d.function_values(xy, fpt)
        mat = [[vals[a * y.n + b] for b in range(y.n)] for a in range(x.n)]
        for a in range(d.obj(x).n):
            wa = d.weights(x, a)
            for b in range(ty):
                wb = d.weights(y, b)
                lhs, rhs, prod = oracle_discrete_fubini(x.n, y.n, wa, wb, mat, modulus=p)
                q = a * ty + b
                got = (d.evaluate(xy, otimes(q), vals), d.evaluate(xy, tilde(q), vals))
                if not (lhs == rhs == prod == got[0] == got[1]):
                    bad.append({"mu": a, "nu": b, "f": list(vals), "oracle": int(prod), "got": list(got)})
    return [_failures("oracle", "field-exhaustive", ctx.pair_key(i, j), bad)]


# factorization --------------------------------------------------------------------------
def _factorization(ctx: Context, key: tuple) -> list[CheckResult]:
    which = key[0]
    maps = ctx.vect_maps
    if which == "map":
        k = key[1]
        f = maps[k]
        pair = fl.epi_strongmono_factorize(f)
        ok = (pair.composite() == f and fl.is_v_epi(pair.epi_part, ctx.vects)
              and fl.is_v_mono(pair.mono_part, ctx.vects) and fl.is_strong_mono(pair.mono_part))
        return [_result("factorization", "epi-strongmono", f"M{k}", ok)]
    if which == "orthogonal":
        # every produced epi part against every strong mono, and every epi against every mono part
        epis = _unique(maps[k] for k in range(len(maps)) if maps[k].is_surjective)
        monos = _unique(f for f in maps if fl.is_strong_mono(f))
        parts = [fl.epi_strongmono_factorize(f) for f in maps]
        e_parts = _unique(p.epi_part for p in parts)
        m_parts = _unique(p.mono_part for p in parts)
        bad = []
        for e in e_parts:
            for m in monos:
                if not fl.is_orthogonal(e, m).verdict:
                    bad.append("epi part not orthogonal to a strong mono")
        for e in epis:
            for m in m_parts:
                if not fl.is_orthogonal(e, m).verdict:
                    bad.append("epi not orthogonal to a mono part")
        return [_failures("factorization", "orthogonality", "all", bad)]
    if which == "classes":
        epis = _unique(f for f in maps if f.is_surjective)
        enriched, ordinary = fl.orthogonal_classes(epis, maps)
        return [_result("factorization", "enriched-equals-ordinary", "all", enriched == ordinary,
                        {"enriched": len(enriched), "ordinary": len(ordinary)})]
    if which == "routes":
        rng = ctx.rng("routes")
        epis = [f for f in maps if f.is_surjective]
        sample = [(rng.choice(epis), rng.choice(maps)) for _ in range(200)] if epis else []
        bad = [i for i, (e, m) in enumerate(sample) if not fl.orthogonality_routes_agree(e, m)]
        return [_failures("factorization", "orthogonality-routes", "sample", bad)]
    raise KeyError(which)


def _unique(maps) -> list:
    """Drop repeats, treating objects with the same convergence as equal."""
    seen, out = set(), []
    for f in maps:
        k = (_skey(f.dom), _skey(f.cod), f.matrix.tobytes())
        if k not in seen:
            seen.add(k)
            out.append(f)
    return out


# completion -----------------------------------------------------------------------------
def _completion(ctx: Context, key: tuple) -> list[CheckResult]:
    which = key[0]
    comp = ctx.completer
    if which == "object":
        k = key[1]
        e = ctx.vects[k]
        name = ctx.vid(k)
        c = comp(e)
        out = [
            _result("completion", "complete", name, comp.complete(c.obj)),
            _result("completion", "unit-inverted", name, is_iso(ctx.h.fmap(c.unit))),
            _result("completion", "double-dual-complete", name, comp.complete(ctx.h.obj(e))),
        ]
        if comp.complete(e):
            out.append(_result("completion", "complete-fixed", name, is_iso(c.unit)))
        first = fl.epi_strongmono_factorize(double_dual_unit(e)).epi_part
        if len(c.chain) == 2:
            out.append(_result("completion", "first-step", name, first == c.unit))
        return out
    if which == "morphism":
        m = fl.completion_monad_morphism(comp, ctx.vects)
        return [
            _failures("completion", "comparison-laws", "all", m.law_failures(ctx.vect_maps)),
            _failures("completion", "comparison-strong-mono", "all", fl.strong_mono_failures(m)),
            _failures("completion", "comparison-triangle", "all", fl.triangle_failures(m, comp)),
        ]
    if which == "sigma":
        mon = fl.CompletionMonad(comp, ctx.vects)
        s_k = fl.sigma_inverted(mon, ctx.vect_maps)
        same = {_mkey(f) for f in s_k} == {_mkey(f) for f in ctx.sigma}
        return [
            _result("completion", "same-inverted-maps", "all", same, {"completion": len(s_k), "double-dual": len(ctx.sigma)}),
            _failures("completion", "monad-laws", "all", mon.law_failures()),
        ]
    if which == "tensor":
        return [_failures("completion", "reflected-tensor-coherence", "all", fl.day_coherence_failures(ctx.vects, comp))]
    raise KeyError(which)


def _skey(e: cv.ConvVect) -> tuple:
    return (e.p, e.dim, e.conv0)


def _mkey(f):
    return (f.dom.key, f.cod.key, f.matrix.tobytes())


# registry -----------------------------------------------------------------------------------
def _keys(ctx: Context, suite: str) -> list[tuple]:
    n = len(ctx.spaces)
    if n == 0:
        return []
    if suite == "cartesian":
        return [(i, j, k) for i in range(n) for j in range(n) for k in range(n)]
    if suite == "free":
        return [(i, k) for i in range(n) for k in range(len(ctx.vects))]
    if suite in ("monoidal", "identification", "fubini", "chain", "kock"):
        return ctx.pairs()
    if suite == "monads":
        return [("D",), ("H",)]
    if suite == "adjunctions":
        return [(w,) for w in ("triangles", "distribution", "transport", "uniqueness", "trivial-factorization", "invariance")]
    if suite == "retraction":
        return [(i,) for i in range(n)]
    if suite == "oracle":
        keys = [("rational", k) for k in range(ctx.config.oracle_instances)]
        disc = [i for i, x in enumerate(ctx.spaces) if x.is_discrete]
        return keys + [("field", i, j) for i in disc for j in disc]
    if suite == "factorization":
        return [("map", k) for k in range(len(ctx.vect_maps))] + [("orthogonal",), ("classes",), ("routes",)]
    if suite == "completion":
        return [("object", k) for k in range(len(ctx.vects))] + [("morphism",), ("sigma",), ("tensor",)]
    raise KeyError(suite)


RUNNERS: dict[str, Callable[[Context, tuple], list[CheckResult]]] = {
    "cartesian": _cartesian,
    "free": _free,
    "monoidal": _monoidal,
    "monads": _monads,
    "adjunctions": _adjunctions,
    "identification": _identification,
    "retraction": _retraction,
    "fubini": _fubini,
    "chain": _chain,
    "kock": _kock,
    "oracle": _oracle,
    "factorization": _factorization,
    "completion": _completion,
}


def suite_keys(ctx: Context, suite: str) -> list[tuple]:
    return _keys(ctx, suite)


def run_check(ctx: Context, suite: str, key: tuple) -> list[CheckResult]:
    """Run one instance; bound overruns become skips and library errors failures."""
    try:
        return RUNNERS[suite](ctx, key)
    except BoundExceeded as exc:
        return [CheckResult(suite, "bounds", repr(key), "skip", str(exc))]
    except FubiniLabError as exc:
        return [CheckResult(suite, "error", repr(key), "fail", f"{type(exc).__name__}: {exc}")]
