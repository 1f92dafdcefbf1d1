"""Monads on finite universes, with exhaustive law checks.

A monad is given object-wise: ``obj``, ``fmap``, ``unit`` and ``mult`` are
computed on demand, and the laws are checked over an explicit universe of
objects and every morphism between them.
"""
from __future__ import annotations

import zlib
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .. import convspace as cs
from .. import linalg
from ..convspace import ContMap, ConvSpace
from ..convvect import (
    ConvVect,
    LinMap,
    counit,
    cotensor,
    dual,
    dual_map,
    free,
    free_map,
    insertion,
    restrict,
    scalar_object,
)
from ..scalars import Field
from .categories import L_CAT, X_CAT, Category


class MonadInstance:
    """Endofunctor with unit and multiplication, checked on ``universe``."""

    name = "T"

    def __init__(self, category: Category, universe: Sequence = ()):
        self.category = category
        self.universe = list(universe)

    def obj(self, a):
        raise NotImplementedError

    def fmap(self, f):
        raise NotImplementedError

    def unit(self, a):
        raise NotImplementedError

    def mult(self, a):
        raise NotImplementedError

    @property
    def on_objects(self) -> Callable:
        return self.obj

    @property
    def on_maps(self) -> Callable:
        return self.fmap

    def universe_maps(self) -> list:
        cat = self.category
        return [f for a in self.universe for b in self.universe for f in cat.homs(a, b)]

    def law_failures(self, maps: Iterable | None = None) -> list[str]:
        """Every violated functor, naturality or monad law, as text."""
        cat = self.category
        maps = self.universe_maps() if maps is None else list(maps)
        out: list[str] = []
        eq = cat.equal
        for a in self.universe:
            ta = self.obj(a)
            if not eq(self.fmap(cat.identity(a)), cat.identity(ta)):
                out.append(f"identity not preserved at {a!r}")
            eta, mu = self.unit(a), self.mult(a)
            idt = cat.identity(ta)
            if not eq(cat.compose(mu, self.fmap(eta)), idt):
                out.append(f"mult . T(unit) != id at {a!r}")
            if not eq(cat.compose(mu, self.unit(ta)), idt):
                out.append(f"mult . unit(T) != id at {a!r}")
            if not eq(cat.compose(mu, self.fmap(mu)), cat.compose(mu, self.mult(ta))):
                out.append(f"associativity fails at {a!r}")
        by_dom: dict = {}
        for f in maps:
            by_dom.setdefault(cat.dom(f), []).append(f)
        for f in maps:
            a, b = cat.dom(f), cat.cod(f)
            tf = self.fmap(f)
            if not eq(cat.compose(tf, self.unit(a)), cat.compose(self.unit(b), f)):
                out.append(f"unit not natural along {f!r}")
            if not eq(cat.compose(tf, self.mult(a)), cat.compose(self.mult(b), self.fmap(tf))):
                out.append(f"mult not natural along {f!r}")
            for g in by_dom.get(b, ()):
                if not eq(self.fmap(cat.compose(g, f)), cat.compose(self.fmap(g), tf)):
                    out.append(f"composition not preserved for {g!r} after {f!r}")
        return out

    def check_laws(self, maps: Iterable | None = None) -> bool:
        return not self.law_failures(maps)


class MonadMorphism:
    """Components ``source.obj(a) -> target.obj(a)`` for ``a`` in the universe."""

    def __init__(self, source: MonadInstance, target: MonadInstance, component: Callable, universe: Sequence = ()):
        self.source = source
        self.target = target
        self.component = component
        self.universe = list(universe)

    def __call__(self, a):
        return self.component(a)

    def law_failures(self, maps: Iterable | None = None) -> list[str]:
        cat = self.source.category
        s, t = self.source, self.target
        out = []
        for a in self.universe:
            th = self.component(a)
            if not cat.equal(cat.compose(th, s.unit(a)), t.unit(a)):
                out.append(f"unit law fails at {a!r}")
            both = cat.compose(self.component(t.obj(a)), s.fmap(th))
            if not cat.equal(cat.compose(t.mult(a), both), cat.compose(th, s.mult(a))):
                out.append(f"multiplication law fails at {a!r}")
        for f in maps or ():
            a, b = cat.dom(f), cat.cod(f)
            if not cat.equal(cat.compose(t.fmap(f), self.component(a)), cat.compose(self.component(b), s.fmap(f))):
                out.append(f"not natural along {f!r}")
        return out

    def check_laws(self, maps: Iterable | None = None) -> bool:
        return not self.law_failures(maps)


def is_iso(f) -> bool:
    if isinstance(f, LinMap):
        return f.is_isomorphism()[0]
    return cs.is_isomorphism(f)[0]


class IdentityMonad(MonadInstance):
    name = "Id"

    def obj(self, a):
        return a

    def fmap(self, f):
        return f

    def unit(self, a):
        return self.category.identity(a)

    def mult(self, a):
        return self.category.identity(a)


class DistributionMonad(MonadInstance):
    """Continuous linear functionals on the scalar-valued continuous functions.

    ``cot(X)`` is the space of continuous functions ``X -> R``, ``vect(X)`` its
    dual, and ``obj(X)`` the carrier of that dual.  In coordinates a point of
    ``obj(X)`` lists its values on the basis of ``cot(X)``, which for the
    component-indicator basis are weights on the components of ``X``.
    """

    name = "D"

    def __init__(self, field: Field, universe: Sequence[ConvSpace] = ()):
        super().__init__(X_CAT, universe)
        self.field = field
        self.R = scalar_object(field)
        self._fmap: dict = {}
        self._unit: dict = {}
        self._mult: dict = {}

    def cot(self, x: ConvSpace) -> ConvVect:
        return cotensor(x, self.R)

    def vect(self, x: ConvSpace) -> ConvVect:
        return dual(self.cot(x))

    def obj(self, x: ConvSpace) -> ConvSpace:
        return self.vect(x).space

    def fmap(self, h: ContMap) -> ContMap:
        key = (h.dom, h.cod, h.table)
        out = self._fmap.get(key)
        if out is None:
            lin = dual_map(restrict(h, self.R))
            out = ContMap(self.obj(h.dom), self.obj(h.cod), linear=lin, check=False)
            self._fmap[key] = out
        return out

    def dirac(self, x: ConvSpace, pt: int) -> int:
        """The functional ``f -> f(pt)``."""
        cot, d = self.cot(x), self.vect(x)
        row = cot.realization.basis[:, pt] if cot.dim else np.zeros(0, dtype=np.int64)
        return d.point_of_ambient(row)

    def unit(self, x: ConvSpace) -> ContMap:
        out = self._unit.get(x)
        if out is None:
            out = ContMap(x, self.obj(x), [self.dirac(x, i) for i in range(x.n)])
            self._unit[x] = out
        return out

    def sigma(self, x: ConvSpace) -> LinMap:
        """``cot(X) -> cot(obj X)``, ``f -> (mu -> mu(f))``."""
        d = self.vect(x)
        dx = d.space
        src, dst = self.cot(x), self.cot(dx)
        if d.dim:
            amb = linalg.matmul(linalg.all_vectors(d.dim, d.p), d.realization.basis, d.p)
        else:
            amb = np.zeros((1, 0), dtype=np.int64)
        cols = [dst.realization.coords(amb[:, j]) for j in range(src.dim)]
        m = np.array(cols, dtype=np.int64).reshape(src.dim, dst.dim).T
        return LinMap(src, dst, m)

    def mult(self, x: ConvSpace) -> ContMap:
        out = self._mult.get(x)
        if out is None:
            lin = dual_map(self.sigma(x))
            out = ContMap(self.obj(self.obj(x)), self.obj(x), linear=lin, check=False)
            self._mult[x] = out
        return out

    def function_point(self, x: ConvSpace, values: Sequence[int]) -> int:
        """Point of ``cot(X)`` with the given values."""
        cot = self.cot(x)
        return cot.point_of_ambient(np.asarray(values, dtype=np.int64).reshape(-1))

    def function_values(self, x: ConvSpace, f: int) -> tuple[int, ...]:
        cot = self.cot(x)
        return tuple(int(v) for v in cot.ambient_of(f))

    def weights(self, x: ConvSpace, mu: int) -> tuple[int, ...]:
        """Values of ``mu`` on the basis of ``cot(X)``."""
        d = self.vect(x)
        return tuple(int(v) for v in d.ambient_of(mu))

    def evaluate(self, x: ConvSpace, mu: int, values: Sequence[int]) -> int:
        """``mu(f)`` for ``f`` given by its values on the points of ``x``."""
        cot = self.cot(x)
        coords = cot.realization.coords(np.asarray(values, dtype=np.int64) % self.field.p)
        w = np.array(self.weights(x, mu), dtype=np.int64)
        return int(np.dot(w, coords) % self.field.p) if w.size else 0


def distribution_monad(universe: Sequence[ConvSpace], field: Field) -> DistributionMonad:
    return DistributionMonad(field, universe)


def double_dual_unit(e: ConvVect) -> LinMap:
    """``E -> E**``, ``e -> (phi -> phi(e))``."""
    d1 = dual(e)
    d2 = dual(d1)
    cols = [d2.realization.coords(d1.realization.basis[:, i]) for i in range(e.dim)]
    m = np.array(cols, dtype=np.int64).reshape(e.dim, d2.dim).T
    return LinMap(e, d2, m)


class DoubleDualizationMonad(MonadInstance):
    name = "H"

    def __init__(self, universe: Sequence[ConvVect] = ()):
        super().__init__(L_CAT, universe)

    def obj(self, e: ConvVect) -> ConvVect:
        return dual(dual(e))

    def fmap(self, f: LinMap) -> LinMap:
        return dual_map(dual_map(f))

    def unit(self, e: ConvVect) -> LinMap:
        return double_dual_unit(e)

    def mult(self, e: ConvVect) -> LinMap:
        return dual_map(double_dual_unit(dual(e)))


def double_dualization_monad(universe: Sequence[ConvVect]) -> DoubleDualizationMonad:
    return DoubleDualizationMonad(universe)


@dataclass
class ReflexivityVerdict:
    reflexive: bool
    inverse: LinMap | None = None
    witness: dict | None = None

    def __bool__(self) -> bool:
        return self.reflexive

    def to_json(self) -> dict:
        return {"reflexive": self.reflexive, "witness": self.witness}


def is_reflexive(e: ConvVect) -> ReflexivityVerdict:
    """Whether the double-dual unit is an isomorphism, with a witness if not."""
    d = double_dual_unit(e)
    p = e.p
    if not d.is_injective:
        k = linalg.nullspace(d.matrix, p)[0]
        return ReflexivityVerdict(False, witness={"kind": "not-injective", "kernel_vector": e.code(k)})
    if not d.is_surjective:
        img = linalg.Coordinates.span(d.matrix.T, p, d.cod.dim)
        for u in range(d.cod.size):
            if not img.contains(d.cod.vec(u)):
                return ReflexivityVerdict(False, witness={"kind": "not-surjective", "missed_point": u})
    ok, inv = d.is_isomorphism()
    if not ok:
        back = LinMap(d.cod, d.dom, linalg.inverse(d.matrix, p), check=False)
        x, g = back.continuity_witness()
        return ReflexivityVerdict(
            False, witness={"kind": "inverse-not-continuous", "converging_set": sorted(g)}
        )
    return ReflexivityVerdict(True, inverse=inv)


class FreeVectorMonad(MonadInstance):
    """The monad ``G F`` of the free/forgetful adjunction."""

    name = "GF"

    def __init__(self, field: Field, universe: Sequence[ConvSpace] = ()):
        super().__init__(X_CAT, universe)
        self.field = field

    def obj(self, x: ConvSpace) -> ConvSpace:
        return free(x, self.field).space

    def fmap(self, h: ContMap) -> ContMap:
        return free_map(h, self.field).underlying

    def unit(self, x: ConvSpace) -> ContMap:
        return insertion(x, self.field)

    def mult(self, x: ConvSpace) -> ContMap:
        return counit(free(x, self.field)).underlying


class TransportedMonad(MonadInstance):
    """``base`` conjugated by object-wise automorphisms ``alpha(a)`` of ``base.obj(a)``.

    ``alpha`` returns a pair ``(iso, inverse)``; the result is isomorphic to
    ``base`` via ``alpha``.
    """

    def __init__(self, base: MonadInstance, alpha: Callable):
        super().__init__(base.category, base.universe)
        self.base = base
        self.alpha = alpha
        self.name = base.name + "'"

    def obj(self, a):
        return self.base.obj(a)

    def fmap(self, f):
        cat = self.category
        a, b = cat.dom(f), cat.cod(f)
        return cat.compose(self.alpha(b)[0], cat.compose(self.base.fmap(f), self.alpha(a)[1]))

    def unit(self, a):
        return self.category.compose(self.alpha(a)[0], self.base.unit(a))

    def mult(self, a):
        cat = self.category
        al, al_inv = self.alpha(a)
        return cat.compose(
            al,
            cat.compose(self.base.mult(a), cat.compose(self.base.fmap(al_inv), self.alpha(self.base.obj(a))[1])),
        )


def stable_seed(obj, seed: int) -> int:
    return zlib.crc32(repr((obj.key, seed)).encode())


def random_automorphisms(monad: DistributionMonad, seed: int) -> Callable:
    """Deterministic random linear automorphisms of each ``monad.vect(X)``."""
    cache: dict = {}

    def alpha(x: ConvSpace):
        if x not in cache:
            v = monad.vect(x)
            rng = np.random.default_rng(stable_seed(x, seed))
            while True:
                m = rng.integers(0, v.p, size=(v.dim, v.dim))
                inv = linalg.inverse(m, v.p)
                if inv is not None:
                    break
            fwd = LinMap(v, v, m)
            back = LinMap(v, v, inv)
            cache[x] = (fwd.underlying, back.underlying)
        return cache[x]

    return alpha
