"""Enriched orthogonality, image factorization, inverted maps and completion.

Everything is decided on finite data.  Hom-objects are the carriers of
``internal_hom`` viewed as convergence spaces, pullbacks are computed in
convergence spaces, and "isomorphism" always means bijective with a
continuous inverse.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import convspace as cs
from . import linalg
from .convspace import ContMap
from .convvect import (
    ConvVect,
    LinMap,
    dual,
    dual_map,
    free,
    hom_post,
    hom_pre,
    image_initial,
    internal_hom,
    quotient,
    scalar_object,
    left_unitor,
    associator,
    symmetry,
    tensor,
    tensor_map,
)
from .errors import AxiomViolation, IterationBudgetExhausted, MismatchedConstructions
from .monadlab.adjunctions import AdjunctionInstance, dualization, monad_morphism_from_factorization
from .monadlab.categories import L_CAT, L_OP
from .monadlab.monads import DoubleDualizationMonad, MonadInstance, MonadMorphism, double_dual_unit, is_iso
from .scalars import Field

DEFAULT_BUDGET = 8


def universe_maps(universe: Sequence[ConvVect]) -> list[LinMap]:
    """Every continuous linear map between two objects of ``universe``."""
    return [f for a in universe for b in universe for f in L_CAT.homs(a, b)]


# monos and epis -------------------------------------------------------------
def _test_objects(m: LinMap, universe: Iterable[ConvVect]) -> list[ConvVect]:
    objs = [e for e in universe if e.p == m.p]
    r = scalar_object(m.dom.field)
    return objs if r in objs else objs + [r]


def is_v_mono(m: LinMap, universe: Sequence[ConvVect] = ()) -> bool:
    """Postcomposition with ``m`` is injective on every hom-object.

    The scalar object is always among the test objects, and the verdict is
    compared with injectivity of ``m``.
    """
    enriched = all(hom_post(m, c).is_injective for c in _test_objects(m, universe))
    if enriched != m.is_injective:
        raise MismatchedConstructions(f"mono verdicts differ for {m!r}")
    return enriched


def cokernel(f: LinMap) -> LinMap:
    """Quotient of the codomain by the image, with the final structure."""
    img = linalg.Coordinates.span(f.matrix.T, f.p, f.cod.dim)
    return quotient(f.cod, img)[1]


def is_v_epi(e: LinMap, universe: Sequence[ConvVect] = ()) -> bool:
    """Precomposition with ``e`` is injective on every hom-object.

    The cokernel of ``e`` is added to the test objects; the verdict is
    compared with surjectivity.
    """
    tests = _test_objects(e, universe) + [cokernel(e).cod]
    enriched = all(hom_pre(e, c).is_injective for c in tests)
    if enriched != e.is_surjective:
        raise MismatchedConstructions(f"epi verdicts differ for {e!r}")
    return enriched


def is_strong_mono(m: LinMap) -> bool:
    """Injective and carrying the structure induced from the codomain."""
    if not m.is_injective:
        return False
    _, core, _ = image_initial(m)
    return core.is_isomorphism()[0]


# orthogonality ----------------------------------------------------------------
@dataclass
class OrthogonalityCertificate:
    """Outcome of the hom-object pullback test for ``e`` against ``m``.

    ``homs`` holds the corners ``BC, AC, BD, AD`` for ``e : A -> B`` and
    ``m : C -> D``; ``bijective`` is the ordinary unique-lifting verdict.
    """

    e: LinMap
    m: LinMap
    homs: dict
    verdict: bool
    bijective: bool
    witness: dict | None = None
    route: str = "linear"

    def __bool__(self) -> bool:
        return self.verdict

    def square(self) -> tuple[cs.ConvSpace, ContMap]:
        """The pullback of hom-spaces and the comparison map into it."""
        return _pullback_square(self.e, self.m)

    def to_json(self) -> dict:
        pb, comp = self.square()
        return {
            "e": {"dom": self.e.dom.dim, "cod": self.e.cod.dim, "matrix": self.e.matrix.tolist()},
            "m": {"dom": self.m.dom.dim, "cod": self.m.cod.dim, "matrix": self.m.matrix.tolist()},
            "homs": {k: cs.to_json(v.space) for k, v in self.homs.items()},
            "pullback": cs.to_json(pb),
            "comparison": list(comp.table),
            "verdict": self.verdict,
            "witness": self.witness,
        }


def _corners(e: LinMap, m: LinMap) -> dict:
    a, b, c, d = e.dom, e.cod, m.dom, m.cod
    return {"BC": internal_hom(b, c), "AC": internal_hom(a, c), "BD": internal_hom(b, d), "AD": internal_hom(a, d)}


def _pullback_square(e: LinMap, m: LinMap):
    a, b = e.dom, e.cod
    pre_c, post_b = hom_pre(e, m.dom), hom_post(m, b)
    post_a, pre_d = hom_post(m, a), hom_pre(e, m.cod)
    pb, p1, p2 = cs.pullback(post_a.underlying, pre_d.underlying)
    index = {(p1(k), p2(k)): k for k in range(pb.n)}
    table = [index[(pre_c(u), post_b(u))] for u in range(pre_c.dom.size)]
    return pb, ContMap(pre_c.dom.space, pb, table)


def _orthogonal_spaces(e: LinMap, m: LinMap) -> OrthogonalityCertificate:
    pb, comp = _pullback_square(e, m)
    table = comp.table
    bijective = len(set(table)) == len(table) == pb.n
    witness = None
    if len(set(table)) != len(table):
        seen: dict[int, int] = {}
        for u, k in enumerate(table):
            if k in seen:
                witness = {"kind": "two-diagonals", "maps": [seen[k], u]}
                break
            seen[k] = u
    elif not bijective:
        witness = {"kind": "no-diagonal", "pullback_point": min(set(range(pb.n)) - set(table))}
    verdict = bijective
    if bijective:
        verdict = cs.is_isomorphism(comp)[0]
        if not verdict:
            witness = {"kind": "inverse-not-continuous"}
    return OrthogonalityCertificate(e, m, _corners(e, m), verdict, bijective, witness, "spaces")


def _orthogonal_linear(e: LinMap, m: LinMap) -> OrthogonalityCertificate:
    homs = _corners(e, m)
    bc, ac, bd = homs["BC"], homs["AC"], homs["BD"]
    p = e.p
    pre_c, post_b = hom_pre(e, m.dom), hom_post(m, e.cod)
    post_a, pre_d = hom_post(m, e.dom), hom_pre(e, m.cod)
    # pullback = kernel of (u, v) -> post_a u - pre_d v
    glue = np.concatenate([post_a.matrix, (-pre_d.matrix) % p], axis=1)
    pb_dim = ac.dim + bd.dim - linalg.rank(glue, p)
    comp = np.concatenate([pre_c.matrix, post_b.matrix], axis=0)
    r = linalg.rank(comp, p)
    witness = None
    if r < bc.dim:
        k = linalg.nullspace(comp, p)[0]
        witness = {"kind": "two-diagonals", "maps": [0, bc.code(k)]}
    elif r < pb_dim:
        ker = linalg.nullspace(glue, p)
        img = linalg.Coordinates.span(comp.T, p, ac.dim + bd.dim)
        v = next(row for row in ker if not img.contains(row))
        witness = {"kind": "no-diagonal", "square": [ac.code(v[: ac.dim]), bd.code(v[ac.dim:])]}
    bijective = witness is None
    verdict = bijective
    if bijective:
        t1, t2 = pre_c.point_table(), post_b.point_table()
        for g1 in ac.gens0():
            for g2 in bd.gens0():
                t = [u for u in range(bc.size) if t1[u] in g1 and t2[u] in g2]
                if t and not bc.converges0(t):
                    verdict = False
                    witness = {"kind": "inverse-not-continuous", "converging_set": t}
                    break
            if not verdict:
                break
    return OrthogonalityCertificate(e, m, homs, verdict, bijective, witness, "linear")


def is_orthogonal(e: LinMap, m: LinMap, route: str = "linear") -> OrthogonalityCertificate:
    """Whether the square of hom-objects for ``e`` against ``m`` is a pullback.

    ``route="linear"`` works with matrices and generating sets;
    ``route="spaces"`` builds the pullback of convergence spaces and tests the
    comparison map for being an isomorphism.
    """
    if route == "linear":
        return _orthogonal_linear(e, m)
    if route == "spaces":
        return _orthogonal_spaces(e, m)
    raise ValueError(route)


def orthogonality_routes_agree(e: LinMap, m: LinMap) -> bool:
    a, b = _orthogonal_linear(e, m), _orthogonal_spaces(e, m)
    return (a.verdict, a.bijective) == (b.verdict, b.bijective)


def is_orthogonal_ordinary(e: LinMap, m: LinMap) -> bool:
    """Unique diagonal fill-ins for every commutative square, ignoring convergence."""
    return is_orthogonal(e, m).bijective


def orthogonal_classes(left: Sequence[LinMap], candidates: Sequence[LinMap]) -> tuple[list[int], list[int]]:
    """Indices of candidates orthogonal to all of ``left``, enriched then ordinary."""
    enriched, ordinary = [], []
    for i, m in enumerate(candidates):
        v_ok = o_ok = True
        for e in left:
            c = is_orthogonal(e, m)
            v_ok = v_ok and c.verdict
            o_ok = o_ok and c.bijective
            if not o_ok:
                # ordinary failure implies enriched failure
                break
        if v_ok:
            enriched.append(i)
        if o_ok:
            ordinary.append(i)
    return enriched, ordinary


# factorization -----------------------------------------------------------------
@dataclass
class FactorizationPair:
    epi_part: LinMap
    mono_part: LinMap

    @property
    def image(self) -> ConvVect:
        return self.epi_part.cod

    def composite(self) -> LinMap:
        return self.mono_part.compose(self.epi_part)


def epi_strongmono_factorize(f: LinMap) -> FactorizationPair:
    """Corestriction onto the image followed by the inclusion.

    The image carries the structure induced from the codomain, so the second
    factor is an embedding; the first is surjective and continuous because
    ``f`` is.
    """
    _, core, inc = image_initial(f)
    out = FactorizationPair(core, inc)
    if out.composite() != f:
        raise MismatchedConstructions("factorization does not recompose")
    return out


# inverted maps and completion ------------------------------------------------------
def sigma_inverted(functor, maps: Iterable[LinMap]) -> list[LinMap]:
    """Those ``maps`` whose image under ``functor.fmap`` is an isomorphism."""
    return [f for f in maps if is_iso(functor.fmap(f))]


def _dedupe(maps: Iterable[LinMap]) -> list[LinMap]:
    seen, out = set(), []
    for f in maps:
        k = (f.dom.key, f.cod.key, f.matrix.tobytes())
        if k not in seen:
            seen.add(k)
            out.append(f)
    return out


def is_complete(e: ConvVect, sigma: Iterable[LinMap]) -> bool:
    """Precomposition ``[h.cod, e] -> [h.dom, e]`` is an isomorphism for all ``h``."""
    return all(hom_pre(h, e).is_isomorphism()[0] for h in sigma)


def section(q: LinMap) -> np.ndarray:
    """A linear right inverse of a surjective map, as a matrix."""
    p = q.p
    r, pivots = linalg.rref(q.matrix, p)
    if len(pivots) != q.cod.dim:
        raise ValueError("section of a non-surjective map")
    sub = q.matrix[:, list(pivots)]
    inv = linalg.inverse(sub, p)
    out = np.zeros((q.dom.dim, q.cod.dim), dtype=np.int64)
    out[list(pivots), :] = inv
    return out


@dataclass
class Completion:
    obj: ConvVect
    unit: LinMap
    chain: list = field(default_factory=list)


class Completer:
    """Functional completion relative to a class of inverted maps."""

    def __init__(self, sigma: Sequence[LinMap], monad: MonadInstance | None = None, budget: int = DEFAULT_BUDGET):
        self.sigma = _dedupe(sigma)
        self.monad = monad or DoubleDualizationMonad()
        self.budget = budget
        self._cache: dict = {}

    def complete(self, e: ConvVect) -> bool:
        return is_complete(e, self.sigma)

    def __call__(self, e: ConvVect) -> Completion:
        if e.key in self._cache:
            return self._cache[e.key]
        cur, unit, chain = e, LinMap.identity(e), [e]
        for _ in range(self.budget + 1):
            if self.complete(cur):
                break
            step = epi_strongmono_factorize(self.monad.unit(cur)).epi_part
            unit = step.compose(unit)
            cur = step.cod
            chain.append(cur)
        else:
            raise IterationBudgetExhausted(f"completion of {e!r} after {self.budget} rounds", chain)
        if not is_iso(self.monad.fmap(unit)):
            raise AxiomViolation(f"completion unit at {e!r} is not inverted")
        out = Completion(cur, unit, chain)
        self._cache[e.key] = out
        return out

    def fmap(self, f: LinMap) -> LinMap:
        """The map between completions induced by ``f``."""
        src, dst = self(f.dom), self(f.cod)
        m = linalg.matmul(dst.unit.matrix, linalg.matmul(f.matrix, section(src.unit), f.p), f.p)
        out = LinMap(src.obj, dst.obj, m)
        if out.compose(src.unit) != dst.unit.compose(f):
            raise AxiomViolation("completion is not functorial along the given map")
        return out


def completion(e: ConvVect, sigma: Sequence[LinMap], monad: MonadInstance | None = None, *, budget: int = DEFAULT_BUDGET) -> tuple[ConvVect, LinMap]:
    c = Completer(sigma, monad, budget)(e)
    return c.obj, c.unit


class CompletionMonad(MonadInstance):
    """The idempotent monad of the completion reflection."""

    name = "completion"

    def __init__(self, completer: Completer, universe: Sequence[ConvVect] = ()):
        super().__init__(L_CAT, universe)
        self.completer = completer

    def obj(self, e):
        return self.completer(e).obj

    def fmap(self, f):
        return self.completer.fmap(f)

    def unit(self, e):
        return self.completer(e).unit

    def mult(self, e):
        ok, inv = self.unit(self.obj(e)).is_isomorphism()
        if not ok:
            raise AxiomViolation("completion of a complete object is not an isomorphism")
        return inv


def completion_adjunction(completer: Completer, universe: Sequence[ConvVect] = ()) -> AdjunctionInstance:
    """Completion left adjoint to the inclusion of complete objects."""
    mon = CompletionMonad(completer)
    ident = lambda v: v
    return AdjunctionInstance(
        "K-J", L_CAT, L_CAT, mon.obj, mon.fmap, ident, ident, mon.unit, mon.mult, universe,
        [mon.obj(e) for e in universe],
    )


def restricted_dualization(field_: Field, complete_objects: Sequence[ConvVect] = ()) -> AdjunctionInstance:
    """Dualization from complete objects to the opposite category."""
    base = dualization(field_)
    return AdjunctionInstance(
        "Q-P", L_CAT, L_OP, base.left_obj, base.left_map, base.right_obj, base.right_map,
        base.unit, base.counit, complete_objects,
    )


def completion_monad_morphism(completer: Completer, universe: Sequence[ConvVect]) -> MonadMorphism:
    """Comparison from the completion monad to double dualization.

    Computed as the double-dual unit pushed through a section of the
    completion unit, and again from the factorization of dualization
    through completion; the two must agree.
    """
    mon = CompletionMonad(completer, universe)
    h = DoubleDualizationMonad(universe)

    def direct(e):
        c = completer(e)
        d = double_dual_unit(e)
        return LinMap(c.obj, d.cod, linalg.matmul(d.matrix, section(c.unit), e.p))

    if universe:
        field_ = universe[0].field
        kj = completion_adjunction(completer, universe)
        qp = restricted_dualization(field_)
        via = monad_morphism_from_factorization(dualization(field_, universe), kj, qp)
        for e in universe:
            if via(e) != direct(e):
                raise MismatchedConstructions(f"completion comparison differs at {e!r}")
    return MonadMorphism(mon, h, direct, universe)


def strong_mono_failures(morphism: MonadMorphism) -> list[str]:
    return [f"component at {e!r} is not a strong mono" for e in morphism.universe if not is_strong_mono(morphism(e))]


def triangle_failures(morphism: MonadMorphism, completer: Completer) -> list[str]:
    out = []
    for e in morphism.universe:
        if morphism(e).compose(completer(e).unit) != double_dual_unit(e):
            out.append(f"comparison after completion unit differs from double-dual unit at {e!r}")
    return out


def reflexivity_retraction_check(x: cs.ConvSpace, field_: Field) -> bool:
    """``dual(unit at FX) . unit at (FX)* = id`` on the dual of the free space."""
    fx = free(x, field_)
    s = dual(fx)
    lhs = dual_map(double_dual_unit(fx)).compose(double_dual_unit(s))
    return lhs == LinMap.identity(s)


# reflected tensor -----------------------------------------------------------------
def day_reflection_tensor(c1: ConvVect, c2: ConvVect, completer: Completer) -> ConvVect:
    """Tensor of two complete objects, then completed."""
    for c in (c1, c2):
        if not completer.complete(c):
            raise AxiomViolation(f"{c!r} is not complete")
    out = completer(tensor(c1, c2)).obj
    if not completer.complete(out):
        raise AxiomViolation("reflected tensor is not complete")
    return out


def day_unit(completer: Completer, field_: Field) -> ConvVect:
    return completer(scalar_object(field_)).obj


def descend(h: LinMap, q: LinMap) -> LinMap:
    """The map ``g`` with ``g . q = h`` for surjective ``q``; raises if none exists."""
    g = LinMap(q.cod, h.cod, linalg.matmul(h.matrix, section(q), h.p))
    if g.compose(q) != h:
        raise AxiomViolation("map does not factor through the given surjection")
    return g


def day_unit_iso(c: ConvVect, completer: Completer) -> LinMap:
    """``K(K(R) (x) c) -> c`` from the left unitor."""
    r = scalar_object(c.field)
    kr = completer(r)
    outer = completer(tensor(kr.obj, c))
    h = left_unitor(c)
    g = descend(h, tensor_map(kr.unit, LinMap.identity(c)))
    return descend(g, outer.unit)


def day_associator(c1: ConvVect, c2: ConvVect, c3: ConvVect, completer: Completer) -> LinMap:
    """``K(K(c1 (x) c2) (x) c3) -> K(c1 (x) K(c2 (x) c3))``."""
    k12, k23 = completer(tensor(c1, c2)), completer(tensor(c2, c3))
    left = completer(tensor(k12.obj, c3))
    right = completer(tensor(c1, k23.obj))
    h = right.unit.compose(tensor_map(LinMap.identity(c1), k23.unit)).compose(associator(c1, c2, c3))
    g = descend(h, tensor_map(k12.unit, LinMap.identity(c3)))
    return descend(g, left.unit)


def day_coherence_failures(objects: Sequence[ConvVect], completer: Completer) -> list[str]:
    """Unit, symmetry and associativity isomorphisms of the reflected tensor."""
    out = []
    complete = [c for c in objects if completer.complete(c)]
    for c in complete:
        if not is_iso(day_unit_iso(c, completer)):
            out.append(f"unit map is not an isomorphism at {c!r}")
    for c1 in complete:
        for c2 in complete:
            if not is_iso(completer.fmap(symmetry(c1, c2))):
                out.append(f"symmetry is not an isomorphism at {c1!r}, {c2!r}")
            for c3 in complete:
                if not is_iso(day_associator(c1, c2, c3, completer)):
                    out.append(f"associator is not an isomorphism at {c1!r}, {c2!r}, {c3!r}")
    return out
