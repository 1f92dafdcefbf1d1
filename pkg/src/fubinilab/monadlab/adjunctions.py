"""Adjunctions given object-wise, their composites and induced monads."""
from __future__ import annotations

from typing import Callable, Sequence

from ..convspace import ConvSpace
from ..convvect import (
    ConvVect,
    LinMap,
    counit,
    cotensor_iso,
    dual,
    dual_map,
    free,
    free_map,
    insertion,
    left_unitor,
    scalar_object,
    tensor,
    tensor_map,
)
from ..scalars import Field
from .categories import L_CAT, L_OP, X_CAT, Category
from .monads import (
    DistributionMonad,
    MonadInstance,
    MonadMorphism,
    double_dual_unit,
    is_iso,
)


class AdjunctionInstance:
    """``left : A -> B`` left adjoint to ``right : B -> A``.

    ``unit(a) : a -> right(left(a))`` in ``A`` and
    ``counit(b) : left(right(b)) -> b`` in ``B``.
    """

    def __init__(
        self,
        name: str,
        cat_a: Category,
        cat_b: Category,
        left_obj: Callable,
        left_map: Callable,
        right_obj: Callable,
        right_map: Callable,
        unit: Callable,
        counit: Callable,
        universe_a: Sequence = (),
        universe_b: Sequence = (),
    ):
        self.name = name
        self.cat_a = cat_a
        self.cat_b = cat_b
        self.left_obj = left_obj
        self.left_map = left_map
        self.right_obj = right_obj
        self.right_map = right_map
        self.unit = unit
        self.counit = counit
        self.universe_a = list(universe_a)
        self.universe_b = list(universe_b)

    def triangle_failures(self) -> list[str]:
        out = []
        for a in self.universe_a:
            fa = self.left_obj(a)
            lhs = self.cat_b.compose(self.counit(fa), self.left_map(self.unit(a)))
            if not self.cat_b.equal(lhs, self.cat_b.identity(fa)):
                out.append(f"{self.name}: counit . left(unit) != id at {a!r}")
        for b in self.universe_b:
            gb = self.right_obj(b)
            lhs = self.cat_a.compose(self.right_map(self.counit(b)), self.unit(gb))
            if not self.cat_a.equal(lhs, self.cat_a.identity(gb)):
                out.append(f"{self.name}: right(counit) . unit != id at {b!r}")
        return out

    def induced_monad(self) -> "InducedMonad":
        return InducedMonad(self)


class InducedMonad(MonadInstance):
    def __init__(self, adj: AdjunctionInstance):
        super().__init__(adj.cat_a, adj.universe_a)
        self.adj = adj
        self.name = f"monad({adj.name})"

    def obj(self, a):
        return self.adj.right_obj(self.adj.left_obj(a))

    def fmap(self, f):
        return self.adj.right_map(self.adj.left_map(f))

    def unit(self, a):
        return self.adj.unit(a)

    def mult(self, a):
        return self.adj.right_map(self.adj.counit(self.adj.left_obj(a)))


def identity_adjunction(cat: Category, universe: Sequence = ()) -> AdjunctionInstance:
    ident = lambda v: v
    return AdjunctionInstance(
        "id", cat, cat, ident, ident, ident, ident, cat.identity, cat.identity, universe, universe
    )


def compose_adjunctions(first: AdjunctionInstance, second: AdjunctionInstance) -> AdjunctionInstance:
    """``first : A -> B`` followed by ``second : B -> C``."""
    a_cat, c_cat = first.cat_a, second.cat_b

    def unit(a):
        fa = first.left_obj(a)
        return a_cat.compose(first.right_map(second.unit(fa)), first.unit(a))

    def counit(c):
        gc = second.right_obj(c)
        return c_cat.compose(second.counit(c), second.left_map(first.counit(gc)))

    return AdjunctionInstance(
        f"{second.name}.{first.name}",
        a_cat,
        c_cat,
        lambda a: second.left_obj(first.left_obj(a)),
        lambda f: second.left_map(first.left_map(f)),
        lambda c: first.right_obj(second.right_obj(c)),
        lambda g: first.right_map(second.right_map(g)),
        unit,
        counit,
        first.universe_a,
        second.universe_b,
    )


class TransportedMonad(MonadInstance):
    """The monad ``right . T . left`` obtained from a monad ``T`` on ``B``."""

    def __init__(self, adj: AdjunctionInstance, monad: MonadInstance):
        super().__init__(adj.cat_a, adj.universe_a)
        self.adj = adj
        self.monad = monad
        self.name = f"[{adj.name}]({monad.name})"

    def obj(self, a):
        return self.adj.right_obj(self.monad.obj(self.adj.left_obj(a)))

    def fmap(self, f):
        return self.adj.right_map(self.monad.fmap(self.adj.left_map(f)))

    def unit(self, a):
        fa = self.adj.left_obj(a)
        return self.cat_a.compose(self.adj.right_map(self.monad.unit(fa)), self.adj.unit(a))

    def mult(self, a):
        adj, t = self.adj, self.monad
        fa = adj.left_obj(a)
        tfa = t.obj(fa)
        inner = adj.right_map(t.fmap(adj.counit(tfa)))
        return self.cat_a.compose(adj.right_map(t.mult(fa)), inner)

    @property
    def cat_a(self) -> Category:
        return self.category


def transport_monad(adj: AdjunctionInstance, monad: MonadInstance) -> TransportedMonad:
    return TransportedMonad(adj, monad)


def monad_differences(m1: MonadInstance, m2: MonadInstance, universe: Sequence, maps: Sequence = ()) -> list[str]:
    """Where two monads on the same category differ as data."""
    cat = m1.category
    out = []
    for a in universe:
        if m1.obj(a) != m2.obj(a):
            out.append(f"objects differ at {a!r}")
            continue
        if not cat.equal(m1.unit(a), m2.unit(a)):
            out.append(f"units differ at {a!r}")
        if not cat.equal(m1.mult(a), m2.mult(a)):
            out.append(f"multiplications differ at {a!r}")
    for f in maps:
        if not cat.equal(m1.fmap(f), m2.fmap(f)):
            out.append(f"actions on {f!r} differ")
    return out


def uniqueness_iso(adj: AdjunctionInstance, other: AdjunctionInstance):
    """For adjunctions with the same right adjoint, the comparison of left adjoints.

    Returns ``(phi, psi)`` with ``phi(a) : left(a) -> other.left(a)`` built from
    the counit of ``adj`` and the unit of ``other``, and ``psi`` its inverse
    built the other way round.
    """
    cat = adj.cat_b

    def phi(a):
        return cat.compose(adj.counit(other.left_obj(a)), adj.left_map(other.unit(a)))

    def psi(a):
        return cat.compose(other.counit(adj.left_obj(a)), other.left_map(adj.unit(a)))

    return phi, psi


def uniqueness_failures(adj: AdjunctionInstance, other: AdjunctionInstance) -> list[str]:
    phi, psi = uniqueness_iso(adj, other)
    cat = adj.cat_b
    out = []
    for a in adj.universe_a:
        f, g = phi(a), psi(a)
        if not cat.equal(cat.compose(g, f), cat.identity(adj.left_obj(a))):
            out.append(f"psi . phi != id at {a!r}")
        if not cat.equal(cat.compose(f, g), cat.identity(other.left_obj(a))):
            out.append(f"phi . psi != id at {a!r}")
    return out


def induced_iso(adj: AdjunctionInstance, other: AdjunctionInstance) -> MonadMorphism:
    """The monad isomorphism ``right(phi)`` between the two induced monads."""
    phi, _ = uniqueness_iso(adj, other)
    return MonadMorphism(
        adj.induced_monad(), other.induced_monad(), lambda a: adj.right_map(phi(a)), adj.universe_a
    )


def monad_morphism_from_factorization(
    outer: AdjunctionInstance, left: AdjunctionInstance, right: AdjunctionInstance
) -> MonadMorphism:
    """Monad morphism from the monad of ``left`` to the monad of ``outer``.

    ``right . left`` must have the same right adjoint as ``outer``.  The
    component at ``a`` is ``xi(a) . left.right(right.unit(left.left(a)))``,
    where ``xi`` is the comparison of the composite with ``outer``.
    """
    comp = compose_adjunctions(left, right)
    cat_c = outer.cat_b
    cat_a = outer.cat_a

    def xi(a):
        phi = cat_c.compose(comp.counit(outer.left_obj(a)), comp.left_map(outer.unit(a)))
        return outer.right_map(phi)

    def component(a):
        fa = left.left_obj(a)
        return cat_a.compose(xi(a), left.right_map(right.unit(fa)))

    return MonadMorphism(left.induced_monad(), outer.induced_monad(), component, outer.universe_a)


# concrete adjunctions -------------------------------------------------------
def free_forgetful(field: Field, universe_a: Sequence[ConvSpace] = (), universe_b: Sequence[ConvVect] = ()) -> AdjunctionInstance:
    return AdjunctionInstance(
        "F-G",
        X_CAT,
        L_CAT,
        lambda x: free(x, field),
        lambda h: free_map(h, field),
        lambda e: e.space,
        lambda f: f.underlying,
        lambda x: insertion(x, field),
        counit,
        universe_a,
        universe_b,
    )


def scaled_free_forgetful(field: Field, universe_a: Sequence[ConvSpace] = (), universe_b: Sequence[ConvVect] = ()) -> AdjunctionInstance:
    """Left adjoint ``x -> R (x) F x`` to the same forgetful functor."""
    r = scalar_object(field)
    ff = free_forgetful(field)

    def left_obj(x):
        return tensor(r, free(x, field))

    def left_map(h):
        return tensor_map(LinMap.identity(r), free_map(h, field))

    def unit(x):
        lu = left_unitor(free(x, field))
        _, back = lu.is_isomorphism()
        return X_CAT.compose(back.underlying, ff.unit(x))

    def cu(e):
        fe = free(e.space, field)
        return counit(e).compose(left_unitor(fe))

    return AdjunctionInstance(
        "RF-G", X_CAT, L_CAT, left_obj, left_map, lambda e: e.space, lambda f: f.underlying, unit, cu, universe_a, universe_b
    )


def dualization(field: Field, universe_a: Sequence[ConvVect] = (), universe_b: Sequence[ConvVect] = ()) -> AdjunctionInstance:
    """Dualization left adjoint to itself, ``L -> L^op``; both unit and counit are double-dual units."""
    return AdjunctionInstance(
        "dual",
        L_CAT,
        L_OP,
        dual,
        dual_map,
        dual,
        dual_map,
        double_dual_unit,
        double_dual_unit,
        universe_a,
        universe_b,
    )


def distribution_comparison(d: DistributionMonad, universe: Sequence[ConvSpace]) -> MonadMorphism:
    """Monad morphism from the monad of free-then-dualize to ``d``.

    The component at ``X`` dualizes the isomorphism between continuous
    functions on ``X`` and functionals on the free space.
    """
    adj = compose_adjunctions(free_forgetful(d.field, universe), dualization(d.field))
    t = adj.induced_monad()
    return MonadMorphism(
        t, d, lambda x: dual_map(cotensor_iso(x, d.R)).underlying, universe
    )


def morphism_is_iso(m: MonadMorphism) -> bool:
    return all(is_iso(m(a)) for a in m.universe)
