"""Composition, identities and hom-sets for the concrete categories in use."""
from __future__ import annotations

from .. import convspace as cs
from ..convvect import ConvVect, LinMap, internal_hom


class Category:
    name = "?"

    def compose(self, g, f):
        """``g`` after ``f``."""
        raise NotImplementedError

    def identity(self, obj):
        raise NotImplementedError

    def dom(self, f):
        return f.dom

    def cod(self, f):
        return f.cod

    def equal(self, f, g) -> bool:
        return f == g

    def homs(self, a, b) -> list:
        raise NotImplementedError


class SpaceCategory(Category):
    """Convergence spaces and continuous maps."""

    name = "X"

    def compose(self, g, f):
        return cs.compose(g, f)

    def identity(self, obj):
        return cs.identity(obj)

    def homs(self, a, b):
        return cs.homs(a, b)


class VectCategory(Category):
    """Convergence vector spaces and continuous linear maps."""

    name = "L"

    def compose(self, g, f):
        return g.compose(f)

    def identity(self, obj):
        return LinMap.identity(obj)

    def homs(self, a: ConvVect, b: ConvVect):
        h = internal_hom(a, b)
        return [h.linmap_at(u) for u in h.points()]


class OppositeCategory(Category):
    """Opposite of ``base``; a morphism ``a -> b`` is a base morphism ``b -> a``."""

    def __init__(self, base: Category):
        self.base = base
        self.name = base.name + "^op"

    def compose(self, g, f):
        return self.base.compose(f, g)

    def identity(self, obj):
        return self.base.identity(obj)

    def dom(self, f):
        return self.base.cod(f)

    def cod(self, f):
        return self.base.dom(f)

    def equal(self, f, g) -> bool:
        return self.base.equal(f, g)

    def homs(self, a, b):
        return self.base.homs(b, a)


X_CAT = SpaceCategory()
L_CAT = VectCategory()
L_OP = OppositeCategory(L_CAT)
