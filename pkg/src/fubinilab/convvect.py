"""Convergence vector spaces over a prime field.

A point of a ``dim``-dimensional space is the integer code of its coordinate
vector (see :mod:`fubinilab.linalg`).  Convergence of a vector space is
translation invariant, so only the family ``conv0`` of sets converging to the
zero vector is stored; ``None`` means discrete.

Hom objects and cotensors carry a ``realization``: a reduced echelon basis of
their carrier inside an ambient coordinate space (flattened matrices, or
concatenated function values), so their points can be read back as maps.
"""
from __future__ import annotations

import contextlib
import itertools
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import linalg
from .convspace import (
    ContMap,
    ConvSpace,
    check_axioms,
    compose,
    function_space,
    identity,
    maximal_hereditary,
    normalize_family,
    product,
)
from .errors import (
    AxiomViolation,
    BoundExceeded,
    MismatchedConstructions,
    NotContinuous,
    NotLinear,
    NotLinearizable,
)
from .linalg import Coordinates
from .scalars import Field

DEFAULT_CARRIER_BOUND = 64
DEFAULT_HOM_SEARCH_BOUND = 1 << 16
DEFAULT_CLOSED_FORM_WIDTH = 1 << 12


class _Limits:
    carrier_bound = DEFAULT_CARRIER_BOUND
    hom_search_bound = DEFAULT_HOM_SEARCH_BOUND
    closed_form_width = DEFAULT_CLOSED_FORM_WIDTH


limits = _Limits()


@contextlib.contextmanager
def carrier_bound(n: int):
    """Temporarily change the carrier bound for structured constructions."""
    old = limits.carrier_bound
    limits.carrier_bound = n
    try:
        yield
    finally:
        limits.carrier_bound = old


def _require_carrier(p: int, dim: int, what: str) -> None:
    if p**dim > limits.carrier_bound:
        raise BoundExceeded(f"{what}: carrier {p}^{dim} exceeds bound {limits.carrier_bound}")


def _require_width(width: int) -> None:
    # closed-form carriers are never enumerated, but their coordinates are
    if width > limits.closed_form_width:
        raise BoundExceeded(f"cotensor: ambient width {width} exceeds {limits.closed_form_width}")


# point arithmetic on codes -------------------------------------------------
def add_codes(u: int, v: int, p: int) -> int:
    if p == 2:
        return u ^ v
    out, scale = 0, 1
    while u or v:
        u, a = divmod(u, p)
        v, b = divmod(v, p)
        out += ((a + b) % p) * scale
        scale *= p
    return out


def smul_code(c: int, u: int, p: int) -> int:
    c %= p
    if c == 0:
        return 0
    if c == 1:
        return u
    out, scale = 0, 1
    while u:
        u, a = divmod(u, p)
        out += (a * c % p) * scale
        scale *= p
    return out


def neg_code(u: int, p: int) -> int:
    return smul_code(p - 1, u, p)


def sumset(a: Iterable[int], b: Iterable[int], p: int) -> frozenset[int]:
    return frozenset(add_codes(x, y, p) for x in a for y in b)


def _origin_key(origin) -> tuple:
    return tuple(o.key if isinstance(o, (ConvSpace, ConvVect)) else o for o in origin)


class ConvVect:
    """A convergence vector space ``F_p^dim`` with translation-invariant convergence."""

    def __init__(
        self,
        field: Field,
        dim: int,
        conv0: Iterable[Iterable[int]] | None = None,
        *,
        realization: Coordinates | None = None,
        origin: tuple = ("plain",),
        check: bool = True,
    ):
        self.field = field
        self.p = field.p
        self.dim = dim
        fam = None
        if conv0 is not None:
            fam = normalize_family(conv0)
            if fam == (frozenset((0,)),):
                fam = None
        self.conv0 = fam
        self.realization = realization
        self.origin = origin
        self._space = None
        self._key = None
        if realization is not None and realization.dim != dim:
            raise ValueError("realization dimension mismatch")
        if check and fam is not None:
            self.validate()

    # arithmetic ----------------------------------------------------------
    @property
    def size(self) -> int:
        return self.p**self.dim

    def add(self, u: int, v: int) -> int:
        return add_codes(u, v, self.p)

    def smul(self, c: int, u: int) -> int:
        return smul_code(c, u, self.p)

    def neg(self, u: int) -> int:
        return neg_code(u, self.p)

    def sub(self, u: int, v: int) -> int:
        return add_codes(u, neg_code(v, self.p), self.p)

    def vec(self, u: int) -> np.ndarray:
        return linalg.decode(u, self.dim, self.p)

    def code(self, v) -> int:
        return linalg.encode(np.asarray(v) % self.p, self.p)

    def basis_code(self, i: int) -> int:
        return self.p**i

    def points(self) -> range:
        if self.size > linalg_points_bound():
            raise BoundExceeded(f"refusing to enumerate {self.size} vectors")
        return range(self.size)

    # convergence -----------------------------------------------------------
    @property
    def is_discrete(self) -> bool:
        return self.conv0 is None

    def gens0(self) -> tuple:
        return (frozenset((0,)),) if self.conv0 is None else self.conv0

    def converges0(self, subset: Iterable[int]) -> bool:
        s = frozenset(subset)
        return bool(s) and any(s <= g for g in self.gens0())

    def converges(self, subset: Iterable[int], x: int) -> bool:
        return self.converges0(self.sub(a, x) for a in subset)

    def validate(self) -> None:
        p = self.p
        gens = self.gens0()
        if not any(0 in g for g in gens):
            raise AxiomViolation("{0} must converge to 0")
        for g in gens:
            if max(g) >= self.size:
                raise AxiomViolation("converging set outside the carrier")
        for a in gens:
            for c in range(p):
                if not self.converges0(smul_code(c, x, p) for x in a):
                    raise AxiomViolation("scalar multiplication is not continuous")
            for b in gens:
                if not self.converges0(sumset(a, b, p)):
                    raise AxiomViolation("addition is not continuous")

    def satisfies(self, axioms: str) -> bool:
        check_axioms(axioms)
        return axioms == "down" or self.conv0 is None or len(self.conv0) == 1

    def null_span(self) -> Coordinates:
        """Span of every vector lying in a set that converges to zero."""
        vecs = [self.vec(u) for g in self.gens0() for u in g]
        return Coordinates.span(linalg.as_rows(vecs, self.dim), self.p, self.dim)

    def limit_subspace(self) -> Coordinates | None:
        """The subspace ``N`` when ``conv0`` is exactly all subsets of ``N``."""
        if self.conv0 is None:
            return Coordinates.span(np.zeros((0, self.dim), dtype=np.int64), self.p, self.dim)
        if len(self.conv0) != 1:
            return None
        g = self.conv0[0]
        n = self.null_span()
        return n if len(g) == self.p**n.dim else None

    @property
    def space(self) -> ConvSpace:
        """The underlying convergence space (the forgetful functor on objects)."""
        if self._space is None:
            n = self.size
            if self.conv0 is None:
                self._space = ConvSpace(n, discrete=True, vect=self, check=False)
            else:
                gens = self.conv0
                p = self.p
                self._space = ConvSpace(
                    n,
                    [[[add_codes(x, a, p) for a in g] for g in gens] for x in range(n)],
                    vect=self,
                    check=False,
                )
        return self._space

    # identity ------------------------------------------------------------
    @property
    def key(self):
        if self._key is None:
            c0 = None if self.conv0 is None else tuple(tuple(sorted(g)) for g in self.conv0)
            self._key = (self.p, self.dim, c0, _origin_key(self.origin))
        return self._key

    def __eq__(self, other) -> bool:
        return isinstance(other, ConvVect) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        kind = self.origin[0]
        if self.conv0 is None:
            return f"ConvVect({kind}, F{self.p}^{self.dim}, discrete)"
        return f"ConvVect({kind}, F{self.p}^{self.dim}, conv0={[sorted(g) for g in self.conv0]})"

    # realized carriers -----------------------------------------------------
    def ambient_of(self, u: int) -> np.ndarray:
        return self.realization.realize(self.vec(u))

    def point_of_ambient(self, amb) -> int:
        return self.code(self.realization.coords(amb))

    def linmap_at(self, u: int) -> "LinMap":
        """The linear map named by a point of an internal hom."""
        if self.origin[0] != "hom":
            raise ValueError("not an internal hom")
        e1, e2 = self.origin[1], self.origin[2]
        m = self.ambient_of(u).reshape(e2.dim, e1.dim)
        return LinMap(e1, e2, m, check=False)

    def point_of_linmap(self, f: "LinMap") -> int:
        return self.point_of_ambient(f.matrix.reshape(-1))

    def function_at(self, u: int) -> tuple[int, ...]:
        """The point table named by a point of a cotensor."""
        if self.origin[0] != "cotensor":
            raise ValueError("not a cotensor")
        x, e = self.origin[1], self.origin[2]
        amb = self.ambient_of(u).reshape(x.n, e.dim)
        return tuple(e.code(row) for row in amb)

    def point_of_function(self, values: Sequence[int]) -> int:
        e = self.origin[2]
        amb = np.concatenate([e.vec(v) for v in values]) if values else np.zeros(0, dtype=np.int64)
        return self.point_of_ambient(amb)


TABLE_BOUND = 1 << 12


def linalg_points_bound() -> int:
    return 1 << 20


class LinMap:
    """A continuous linear map; ``matrix`` has shape ``(cod.dim, dom.dim)``."""

    def __init__(self, dom: ConvVect, cod: ConvVect, matrix, *, check: bool = True):
        if dom.p != cod.p:
            raise ValueError("maps between different fields")
        m = np.asarray(matrix, dtype=np.int64).reshape(cod.dim, dom.dim) % dom.p
        self.dom = dom
        self.cod = cod
        self.matrix = linalg.frozen(m)
        self._underlying = None
        self._points = None
        if check:
            self.certify()

    @property
    def p(self) -> int:
        return self.dom.p

    def point_table(self) -> tuple[int, ...] | None:
        """Codes of all images, computed in one pass; ``None`` for large domains."""
        if self._points is None and self.dom.size <= TABLE_BOUND:
            p = self.p
            vecs = linalg.all_vectors(self.dom.dim, p)
            img = (vecs @ self.matrix.T) % p
            weights = p ** np.arange(self.cod.dim, dtype=np.int64)
            self._points = tuple(int(c) for c in img @ weights)
        return self._points

    def apply_vec(self, v) -> np.ndarray:
        return linalg.matmul(self.matrix, np.asarray(v, dtype=np.int64).reshape(-1, 1), self.p)[:, 0]

    def __call__(self, u: int) -> int:
        if self.dom.dim == 0:
            return 0
        table = self.point_table()
        if table is not None:
            return table[u]
        return self.cod.code(self.apply_vec(self.dom.vec(u)))

    def image(self, subset: Iterable[int]) -> frozenset[int]:
        return frozenset(self(u) for u in subset)

    def continuity_witness(self) -> tuple[int, frozenset] | None:
        if self.dom.conv0 is None:
            return None
        for g in self.dom.conv0:
            if not self.cod.converges0(self.image(g)):
                return 0, g
        return None

    def is_continuous(self) -> bool:
        return self.continuity_witness() is None

    def certify(self) -> "LinMap":
        w = self.continuity_witness()
        if w is not None:
            raise NotContinuous(f"{sorted(w[1])} converges to 0 but its image does not")
        return self

    def compose(self, other: "LinMap") -> "LinMap":
        """``self`` after ``other``."""
        if other.cod != self.dom:
            raise ValueError("maps are not composable")
        return LinMap(other.dom, self.cod, linalg.matmul(self.matrix, other.matrix, self.p), check=False)

    def __matmul__(self, other: "LinMap") -> "LinMap":
        return self.compose(other)

    def __add__(self, other: "LinMap") -> "LinMap":
        return LinMap(self.dom, self.cod, (self.matrix + other.matrix) % self.p, check=False)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LinMap):
            return NotImplemented
        return (
            self.dom == other.dom
            and self.cod == other.cod
            and np.array_equal(self.matrix, other.matrix)
        )

    def __hash__(self) -> int:
        return hash((self.dom, self.cod, self.matrix.tobytes()))

    def __repr__(self) -> str:
        return f"LinMap({self.dom!r} -> {self.cod!r}, {self.matrix.tolist()})"

    @property
    def rank(self) -> int:
        return linalg.rank(self.matrix, self.p)

    @property
    def is_injective(self) -> bool:
        return self.rank == self.dom.dim

    @property
    def is_surjective(self) -> bool:
        return self.rank == self.cod.dim

    def is_isomorphism(self) -> tuple[bool, "LinMap | None"]:
        if self.dom.dim != self.cod.dim:
            return False, None
        inv = linalg.inverse(self.matrix, self.p)
        if inv is None:
            return False, None
        back = LinMap(self.cod, self.dom, inv, check=False)
        if not back.is_continuous():
            return False, None
        return True, back

    @property
    def underlying(self) -> ContMap:
        """The map of underlying convergence spaces."""
        if self._underlying is None:
            self._underlying = ContMap(self.dom.space, self.cod.space, linear=self, check=False)
        return self._underlying

    @classmethod
    def identity(cls, e: ConvVect) -> "LinMap":
        return cls(e, e, np.eye(e.dim, dtype=np.int64), check=False)

    @classmethod
    def zero(cls, dom: ConvVect, cod: ConvVect) -> "LinMap":
        return cls(dom, cod, np.zeros((cod.dim, dom.dim), dtype=np.int64), check=False)

    @classmethod
    def from_function(cls, dom: ConvVect, cod: ConvVect, fn, *, exhaustive: bool = True) -> "LinMap":
        """Linear map agreeing with a point function; linearity is checked exhaustively."""
        cols = [cod.vec(fn(dom.basis_code(i))) for i in range(dom.dim)]
        m = np.array(cols, dtype=np.int64).T.reshape(cod.dim, dom.dim)
        out = cls(dom, cod, m, check=False)
        if exhaustive:
            for u in dom.points():
                if out(u) != fn(u):
                    raise NotLinear(f"point function is not linear at {u}")
        return out.certify()


def G(e):
    """Forgetful functor to convergence spaces, on objects and on maps."""
    if isinstance(e, ConvVect):
        return e.space
    if isinstance(e, LinMap):
        return e.underlying
    raise TypeError(type(e))


# basic objects ---------------------------------------------------------------
def scalar_object(field: Field) -> ConvVect:
    return ConvVect(field, 1, origin=("scalar",))


def zero_space(field: Field) -> ConvVect:
    return ConvVect(field, 0, origin=("zero",))


def closure(field: Field, dim: int, seeds: Iterable[Iterable[int]]) -> tuple | None:
    """Least translation-invariant vector-space convergence containing ``seeds`` at 0."""
    p = field.p
    gens = normalize_family(list(seeds) + [[0]])
    while True:
        new = list(gens)
        for a in gens:
            for c in range(2, p):
                new.append([smul_code(c, x, p) for x in a])
            for b in gens:
                new.append(sumset(a, b, p))
        nxt = normalize_family(new)
        if nxt == gens:
            break
        gens = nxt
    return None if gens == (frozenset((0,)),) else gens


def free(x: ConvSpace, field: Field) -> ConvVect:
    """Free convergence vector space on ``x``; basis vector ``i`` is the point ``i``."""
    if not x.is_discrete:
        _require_carrier(field.p, x.n, "free")
    return _free(x, field)


# bounds are checked by the public wrappers so that cache hits obey them too
@lru_cache(maxsize=4096)
def _free(x: ConvSpace, field: Field) -> ConvVect:
    dim = x.n
    p = field.p
    if x.is_discrete:
        return ConvVect(field, dim, origin=("free", x))
    _require_carrier(p, dim, "free")
    seeds = []
    for pt in range(x.n):
        base = p**pt
        for g in x.conv(pt):
            seeds.append([add_codes(p**a, neg_code(base, p), p) for a in g])
    return ConvVect(field, dim, closure(field, dim, seeds), origin=("free", x))


def insertion(x: ConvSpace, field: Field) -> ContMap:
    fx = free(x, field)
    return ContMap(x, fx.space, [field.p**i for i in range(x.n)])


def free_transpose(f: ContMap, field: Field) -> LinMap:
    """The linear extension ``F(dom) -> E`` of ``f : dom -> G(E)``."""
    e = f.cod.vect
    if e is None:
        raise ValueError("codomain must be the carrier of a ConvVect")
    fx = free(f.dom, field)
    cols = [e.vec(f(i)) for i in range(f.dom.n)]
    m = np.array(cols, dtype=np.int64).T.reshape(e.dim, fx.dim)
    out = LinMap(fx, e, m, check=False)
    w = out.continuity_witness()
    if w is not None:
        raise NotLinearizable(f"linear extension fails continuity on {sorted(w[1])}")
    return out


def restriction(f: LinMap, x: ConvSpace) -> ContMap:
    """Restriction of ``f : F(x) -> E`` along the insertion."""
    return ContMap(x, f.cod.space, [f(f.dom.basis_code(i)) for i in range(x.n)], check=False)


def counit(e: ConvVect) -> LinMap:
    return free_transpose(identity(e.space), e.field)


def free_map(h: ContMap, field: Field) -> LinMap:
    return free_transpose(compose(insertion(h.cod, field), h), field)


# tensor ---------------------------------------------------------------------
def tensor_code(e1: ConvVect, e2: ConvVect, u: int, v: int) -> int:
    """The elementary tensor ``u (x) v`` as a point of ``tensor(e1, e2)``."""
    a, b = e1.vec(u), e2.vec(v)
    return linalg.encode(np.outer(a, b).reshape(-1) % e1.p, e1.p)


def tensor(e1: ConvVect, e2: ConvVect) -> ConvVect:
    """Tensor product; basis vector ``i * dim2 + j`` is ``e_i (x) e_j``."""
    if not (e1.is_discrete and e2.is_discrete):
        _require_carrier(e1.p, e1.dim * e2.dim, "tensor")
    return _tensor(e1, e2)


@lru_cache(maxsize=4096)
def _tensor(e1: ConvVect, e2: ConvVect) -> ConvVect:
    field, p = e1.field, e1.p
    dim = e1.dim * e2.dim
    if e1.is_discrete and e2.is_discrete:
        return ConvVect(field, dim, origin=("tensor", e1, e2))
    _require_carrier(p, dim, "tensor")
    seeds = set()
    for u1 in e1.points():
        for u2 in e2.points():
            base = tensor_code(e1, e2, u1, u2)
            for g1 in e1.gens0():
                for g2 in e2.gens0():
                    seeds.add(
                        frozenset(
                            add_codes(
                                tensor_code(e1, e2, add_codes(u1, a, p), add_codes(u2, b, p)),
                                neg_code(base, p),
                                p,
                            )
                            for a in g1
                            for b in g2
                        )
                    )
    return ConvVect(field, dim, closure(field, dim, seeds), origin=("tensor", e1, e2))


def tensor_map(f1: LinMap, f2: LinMap) -> LinMap:
    return LinMap(
        tensor(f1.dom, f2.dom),
        tensor(f1.cod, f2.cod),
        np.kron(f1.matrix, f2.matrix) % f1.p,
    )


def symmetry(e1: ConvVect, e2: ConvVect) -> LinMap:
    d1, d2 = e1.dim, e2.dim
    m = np.zeros((d1 * d2, d1 * d2), dtype=np.int64)
    for i in range(d1):
        for j in range(d2):
            m[j * d1 + i, i * d2 + j] = 1
    return LinMap(tensor(e1, e2), tensor(e2, e1), m)


def left_unitor(e: ConvVect) -> LinMap:
    r = scalar_object(e.field)
    return LinMap(tensor(r, e), e, np.eye(e.dim, dtype=np.int64))


def associator(e1: ConvVect, e2: ConvVect, e3: ConvVect) -> LinMap:
    n = e1.dim * e2.dim * e3.dim
    return LinMap(
        tensor(tensor(e1, e2), e3), tensor(e1, tensor(e2, e3)), np.eye(n, dtype=np.int64)
    )


def bilinear_matrix(e1: ConvVect, e2: ConvVect, e3: ConvVect, fn) -> np.ndarray:
    """Matrix on ``tensor(e1, e2)`` of a bilinear point function ``fn(u, v)``."""
    cols = [
        e3.vec(fn(e1.basis_code(i), e2.basis_code(j)))
        for i in range(e1.dim)
        for j in range(e2.dim)
    ]
    return np.array(cols, dtype=np.int64).T.reshape(e3.dim, e1.dim * e2.dim)


def is_bilinear_continuous(e1: ConvVect, e2: ConvVect, e3: ConvVect, table: Sequence[int]) -> bool:
    """Continuity of a map ``G e1 * G e2 -> G e3`` given by its point table."""
    sp = product(e1.space, e2.space)
    return ContMap(sp, e3.space, table, check=False).is_continuous()


def strong_monoidal_iso(x: ConvSpace, y: ConvSpace, field: Field) -> tuple[LinMap, LinMap]:
    """``F x (x) F y -> F(x * y)`` and its inverse, both checked."""
    fx, fy = free(x, field), free(y, field)
    fxy = free(product(x, y), field)
    p = field.p

    def gen(u: int, v: int) -> int:
        a, b = fx.vec(u), fy.vec(v)
        return linalg.encode(np.outer(a, b).reshape(-1) % p, p)

    fwd = LinMap(tensor(fx, fy), fxy, bilinear_matrix(fx, fy, fxy, gen))
    pairs = product(x, y)
    t = tensor(fx, fy)
    back = free_transpose(
        ContMap(
            pairs,
            t.space,
            [tensor_code(fx, fy, p**i, p**j) for i in range(x.n) for j in range(y.n)],
        ),
        field,
    )
    if back.compose(fwd) != LinMap.identity(t) or fwd.compose(back) != LinMap.identity(fxy):
        raise MismatchedConstructions("monoidal structure maps are not mutually inverse")
    return fwd, back


# internal hom ----------------------------------------------------------------
def _hom_constraints_null(e1: ConvVect, d2: int) -> np.ndarray:
    """Rows expressing ``M n = 0`` for ``n`` in the null span of ``e1``."""
    ns = e1.null_span().basis
    rows = []
    for n in ns:
        for r in range(d2):
            v = np.zeros((d2, e1.dim), dtype=np.int64)
            v[r] = n
            rows.append(v.reshape(-1))
    return linalg.as_rows(rows, d2 * e1.dim)


def _annihilator(c: Coordinates, dim: int) -> np.ndarray:
    if c.dim == 0:
        return np.eye(dim, dtype=np.int64)
    return linalg.nullspace(c.basis, c.p)


def _hom_closed(e1: ConvVect, e2: ConvVect) -> ConvVect | None:
    p, d1, d2 = e1.p, e1.dim, e2.dim
    width = d1 * d2
    n2 = e2.limit_subspace()
    origin = ("hom", e1, e2)
    if e2.is_discrete:
        cons = _hom_constraints_null(e1, d2)
        if cons.shape[0] == 0 or not cons.any():
            coords = Coordinates.identity(width, p)
        else:
            coords = Coordinates.span(linalg.nullspace(cons, p), p, width)
        return ConvVect(e1.field, coords.dim, realization=coords, origin=origin)
    n1 = e1.limit_subspace()
    if n1 is None or n2 is None:
        return None
    ann = _annihilator(n2, d2)
    rows = [np.kron(a, n).reshape(-1) for a in ann for n in n1.basis]
    cons = linalg.as_rows(rows, width)
    basis = linalg.nullspace(cons, p) if cons.shape[0] else np.eye(width, dtype=np.int64)
    coords = Coordinates.span(basis, p, width)
    _require_carrier(p, coords.dim, "internal_hom")
    zrows = []
    for a in ann:
        for j in range(d1):
            v = np.zeros((d2, d1), dtype=np.int64)
            v[:, j] = a
            zrows.append(v.reshape(-1))
    zcons = linalg.as_rows(zrows, width)
    wbasis = linalg.nullspace(zcons, p) if zcons.shape[0] else np.eye(width, dtype=np.int64)
    wc = linalg.as_rows([coords.coords(w) for w in wbasis], coords.dim)
    wspan = Coordinates.span(wc, p, coords.dim)
    gen = [linalg.encode(linalg.matmul(c.reshape(1, -1), wspan.basis, p)[0], p)
           for c in linalg.all_vectors(wspan.dim, p)]
    return ConvVect(e1.field, coords.dim, [gen], realization=coords, origin=origin)


def _hom_generic(e1: ConvVect, e2: ConvVect) -> ConvVect:
    p, d1, d2 = e1.p, e1.dim, e2.dim
    width = d1 * d2
    if p**width > limits.hom_search_bound:
        raise BoundExceeded(f"internal_hom search over {p}^{width} matrices")
    cont = []
    for amb in linalg.all_vectors(width, p):
        f = LinMap(e1, e2, amb.reshape(d2, d1), check=False)
        if f.is_continuous():
            cont.append(amb)
    coords = Coordinates.span(linalg.as_rows(cont, width), p, width)
    if p**coords.dim != len(cont):
        raise AssertionError("continuous linear maps do not form a subspace")
    _require_carrier(p, coords.dim, "internal_hom")
    maps = [LinMap(e1, e2, linalg.matmul(c.reshape(1, -1), coords.basis, p).reshape(d2, d1), check=False)
            for c in linalg.all_vectors(coords.dim, p)]
    pts = list(e1.points())
    gens1 = e1.gens0()

    def good(a: frozenset) -> bool:
        for x in pts:
            for g in gens1:
                img = {maps[i](add_codes(x, b, p)) for i in a for b in g}
                if not e2.converges0(img):
                    return False
        return True

    conv0 = maximal_hereditary(range(len(maps)), good)
    return ConvVect(e1.field, coords.dim, conv0, realization=coords, origin=("hom", e1, e2))


def internal_hom(e1: ConvVect, e2: ConvVect, method: str = "auto") -> ConvVect:
    """Continuous linear maps ``e1 -> e2`` under continuous convergence.

    ``method="generic"`` searches all matrices and computes the continuous
    convergence directly; ``"auto"`` uses linear algebra whenever the target
    is discrete or both sides satisfy the limit axiom.
    """
    out = _internal_hom(e1, e2, method)
    if not (method == "auto" and e2.is_discrete):
        _require_carrier(out.p, out.dim, "internal_hom")
    return out


@lru_cache(maxsize=4096)
def _internal_hom(e1: ConvVect, e2: ConvVect, method: str) -> ConvVect:
    if e1.p != e2.p:
        raise ValueError("spaces over different fields")
    if method == "auto":
        out = _hom_closed(e1, e2)
        if out is not None:
            return out
    elif method != "generic":
        raise ValueError(method)
    return _hom_generic(e1, e2)


def hom_pre(f: LinMap, e3: ConvVect) -> LinMap:
    """Precomposition ``internal_hom(f.cod, e3) -> internal_hom(f.dom, e3)``."""
    src, dst = internal_hom(f.cod, e3), internal_hom(f.dom, e3)
    rows = []
    for b in src.realization.basis:
        m = b.reshape(e3.dim, f.cod.dim)
        rows.append(dst.realization.coords(linalg.matmul(m, f.matrix, f.p).reshape(-1)))
    mat = np.array(rows, dtype=np.int64).reshape(src.dim, dst.dim).T
    return LinMap(src, dst, mat)


def hom_post(f: LinMap, e0: ConvVect) -> LinMap:
    """Postcomposition ``internal_hom(e0, f.dom) -> internal_hom(e0, f.cod)``."""
    src, dst = internal_hom(e0, f.dom), internal_hom(e0, f.cod)
    rows = []
    for b in src.realization.basis:
        m = b.reshape(f.dom.dim, e0.dim)
        rows.append(dst.realization.coords(linalg.matmul(f.matrix, m, f.p).reshape(-1)))
    mat = np.array(rows, dtype=np.int64).reshape(src.dim, dst.dim).T
    return LinMap(src, dst, mat)


def evaluation(e1: ConvVect, e2: ConvVect, hom: ConvVect | None = None) -> ContMap:
    """Evaluation ``G internal_hom(e1, e2) * G e1 -> G e2``."""
    hom = hom or internal_hom(e1, e2)
    dom = product(hom.space, e1.space)
    return ContMap(dom, e2.space, fn=lambda q: hom.linmap_at(q // e1.size)(q % e1.size))


def dual(e: ConvVect) -> ConvVect:
    return internal_hom(e, scalar_object(e.field))


def dual_map(f: LinMap) -> LinMap:
    """``dual(f.cod) -> dual(f.dom)`` by precomposition."""
    return hom_pre(f, scalar_object(f.dom.field))


def functional_value(phi_space: ConvVect, phi: int, u: int) -> int:
    """Value of the functional ``phi`` (a point of a dual) at ``u``."""
    return phi_space.linmap_at(phi)(u)


# cotensor ---------------------------------------------------------------------
def components(x: ConvSpace) -> list[list[int]]:
    """Classes of the equivalence generated by ``a ~ x`` for ``a`` in a set converging to ``x``."""
    parent = list(range(x.n))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    if not x.is_discrete:
        for pt in range(x.n):
            for g in x.conv(pt):
                for a in g:
                    ra, rb = find(a), find(pt)
                    if ra != rb:
                        parent[max(ra, rb)] = min(ra, rb)
    classes: dict[int, list[int]] = {}
    for pt in range(x.n):
        classes.setdefault(find(pt), []).append(pt)
    return sorted(classes.values())


def _cotensor_closed(x: ConvSpace, e: ConvVect) -> ConvVect:
    p, de = e.p, e.dim
    width = x.n * de
    _require_width(width)
    comps = components(x)
    rows = []
    pivots = []
    for comp in comps:
        for j in range(de):
            v = np.zeros(width, dtype=np.int64)
            for pt in comp:
                v[pt * de + j] = 1
            rows.append(v)
            pivots.append(comp[0] * de + j)
    basis = np.array(rows, dtype=np.int64).reshape(len(rows), width)
    return ConvVect(e.field, len(rows), realization=Coordinates(basis, tuple(pivots), p), origin=("cotensor", x, e))


def _cotensor_generic(x: ConvSpace, e: ConvVect) -> ConvVect:
    p, de = e.p, e.dim
    width = x.n * de
    fs = function_space(x, e.space, bound=limits.hom_search_bound)
    vecs = [
        np.concatenate([e.vec(v) for v in t]) if t else np.zeros(0, dtype=np.int64)
        for t in fs.elements
    ]
    coords = Coordinates.span(linalg.as_rows(vecs, width), p, width)
    if p**coords.dim != len(vecs):
        raise AssertionError("continuous functions do not form a subspace")
    _require_carrier(p, coords.dim, "cotensor")
    code = [linalg.encode(coords.coords(v), p) for v in vecs]
    zero = code.index(0)
    conv0 = [[code[i] for i in g] for g in fs.conv(fs.elements.index(fs.elements[zero]))]
    out = ConvVect(e.field, coords.dim, conv0, realization=coords, origin=("cotensor", x, e))
    for i, c in enumerate(code):
        mine = {frozenset(code[j] for j in g) for g in fs.conv(i)}
        want = {frozenset(add_codes(c, a, p) for a in g) for g in out.gens0()}
        if mine != want:
            raise AssertionError("function-space convergence is not translation invariant")
    return out


def cotensor(x: ConvSpace, e: ConvVect, method: str = "auto") -> ConvVect:
    """Continuous maps ``x -> G e`` with pointwise operations.

    For discrete ``e`` the continuous maps are exactly those constant on the
    classes of :func:`components`, and no search is needed.
    """
    closed = method == "auto" and e.is_discrete
    if closed:
        _require_width(x.n * e.dim)
    out = _cotensor(x, e, method)
    if not closed:
        _require_carrier(out.p, out.dim, "cotensor")
    return out


@lru_cache(maxsize=4096)
def _cotensor(x: ConvSpace, e: ConvVect, method: str) -> ConvVect:
    if method == "auto" and e.is_discrete:
        return _cotensor_closed(x, e)
    if method not in ("auto", "generic"):
        raise ValueError(method)
    return _cotensor_generic(x, e)


def cotensor_iso(x: ConvSpace, e: ConvVect) -> LinMap:
    """``cotensor(x, e) -> internal_hom(free(x), e)``, checked to be an isomorphism."""
    cot = cotensor(x, e)
    hom = internal_hom(free(x, e.field), e)
    rows = []
    for b in cot.realization.basis:
        m = b.reshape(x.n, e.dim).T
        rows.append(hom.realization.coords(m.reshape(-1)))
    mat = np.array(rows, dtype=np.int64).reshape(cot.dim, hom.dim).T
    f = LinMap(cot, hom, mat)
    ok, _ = f.is_isomorphism()
    if not ok:
        raise AssertionError("cotensor is not isomorphic to the hom out of the free space")
    return f


def restrict(h: ContMap, e: ConvVect) -> LinMap:
    """Precomposition ``cotensor(h.cod, e) -> cotensor(h.dom, e)``."""
    src, dst = cotensor(h.cod, e), cotensor(h.dom, e)
    rows = []
    for b in src.realization.basis:
        vals = b.reshape(h.cod.n, e.dim)
        moved = np.array([vals[h(i)] for i in range(h.dom.n)], dtype=np.int64).reshape(-1)
        rows.append(dst.realization.coords(moved))
    mat = np.array(rows, dtype=np.int64).reshape(src.dim, dst.dim).T
    return LinMap(src, dst, mat)


# quotients and images -------------------------------------------------------------
def image_initial(f: LinMap) -> tuple[ConvVect, LinMap, LinMap]:
    """Image of ``f`` with the structure induced from the codomain.

    Returns the image, the corestriction onto it and the inclusion.
    """
    p, cod = f.p, f.cod
    cols = f.matrix.T
    coords = Coordinates.span(cols, p, cod.dim)
    conv0 = None
    if not cod.is_discrete:
        conv0 = []
        for g in cod.gens0():
            inside = [coords.coords(cod.vec(u), check=False) for u in g if coords.contains(cod.vec(u))]
            conv0.append([linalg.encode(c, p) for c in inside])
    img = ConvVect(f.dom.field, coords.dim, conv0, origin=("image", f.dom, cod, f.matrix.tobytes()))
    inc = LinMap(img, cod, coords.basis.T)
    core_rows = [coords.coords(c) for c in cols]
    core = LinMap(f.dom, img, np.array(core_rows, dtype=np.int64).reshape(f.dom.dim, coords.dim).T)
    return img, core, inc


def quotient(e: ConvVect, sub: Coordinates) -> tuple[ConvVect, LinMap]:
    """``e / sub`` with the final structure, and the quotient map."""
    p, d = e.p, e.dim
    ann = _annihilator(sub, d) if sub.dim else np.eye(d, dtype=np.int64)
    qb, _ = linalg.row_basis(ann, p, d)
    k = qb.shape[0]
    conv0 = None
    if not e.is_discrete:
        conv0 = [[linalg.encode(linalg.matmul(qb, e.vec(u).reshape(-1, 1), p)[:, 0], p) for u in g] for g in e.gens0()]
    q = ConvVect(e.field, k, conv0, origin=("quotient", e, sub.basis.tobytes()))
    return q, LinMap(e, q, qb)


# enumeration ------------------------------------------------------------------
@lru_cache(maxsize=64)
def _families0(dim: int, p: int, axioms: str) -> tuple:
    n = p**dim
    subsets = [frozenset(i for i in range(n) if m >> i & 1) for m in range(1, 1 << n)]
    found = []
    if axioms == "limit":
        for s in subsets:
            if 0 not in s:
                continue
            if all(add_codes(a, b, p) in s for a in s for b in s) and all(
                smul_code(c, a, p) in s for a in s for c in range(p)
            ):
                found.append((s,))
        return tuple(found)
    for choice in range(1 << len(subsets)):
        fam = [s for i, s in enumerate(subsets) if choice >> i & 1]
        if frozenset((0,)) not in fam:
            continue
        fs = set(fam)
        if not all(s - {a} in fs for s in fam if len(s) > 1 for a in s):
            continue
        gens = normalize_family(fam)
        ok = all(
            any(sumset(a, b, p) <= g for g in gens) for a in gens for b in gens
        ) and all(
            any(frozenset(smul_code(c, x, p) for x in a) <= g for g in gens)
            for a in gens
            for c in range(p)
        )
        if ok:
            found.append(gens)
    return tuple(found)


def enumerate_convvects(max_points: int, field: Field, axioms: str = "limit") -> Iterator[ConvVect]:
    """Every vector-space convergence on ``F_p^d`` with ``p^d <= max_points``.

    Carriers are taken in coordinates, so each structure appears once per
    dimension rather than once per labelling of its points.
    """
    check_axioms(axioms)
    if max_points > 4:
        raise BoundExceeded("ConvVect enumeration is limited to carriers of at most 4 points")
    dim = 0
    while field.p**dim <= max_points:
        for fam in _families0(dim, field.p, axioms):
            yield ConvVect(field, dim, fam, origin=("plain",))
        dim += 1


def to_json(e: ConvVect) -> dict:
    from .convspace import to_json as space_json

    out = space_json(e.space)
    n, p = e.size, e.p
    out["zero"] = 0
    out["add"] = [[e.add(u, v) for v in range(n)] for u in range(n)]
    out["smul"] = [[e.smul(c, u) for u in range(n)] for c in range(p)]
    return out


def from_json(data: dict, field: Field) -> tuple[ConvVect, tuple[int, ...]]:
    """Decode and verify a ConvVect; also returns the relabelling of its points.

    The relabelling sends each point of the file to its coordinate code.
    """
    from .convspace import from_json as space_json

    sp = space_json(data)
    n, p = sp.n, field.p
    zero = int(data["zero"])
    add = [list(map(int, row)) for row in data["add"]]
    smul = [list(map(int, row)) for row in data["smul"]]
    if len(add) != n or any(len(r) != n for r in add) or len(smul) != p or any(len(r) != n for r in smul):
        raise ValueError("operation tables have the wrong shape")
    pts = range(n)
    ok = (
        all(add[u][zero] == u for u in pts)
        and all(add[u][v] == add[v][u] for u in pts for v in pts)
        and all(add[add[u][v]][w] == add[u][add[v][w]] for u in pts for v in pts for w in pts)
        and all(any(add[u][v] == zero for v in pts) for u in pts)
        and all(smul[1][u] == u for u in pts)
        and all(smul[field.mul[a][b]][u] == smul[a][smul[b][u]] for a in range(p) for b in range(p) for u in pts)
        and all(smul[field.add[a][b]][u] == add[smul[a][u]][smul[b][u]] for a in range(p) for b in range(p) for u in pts)
        and all(smul[a][add[u][v]] == add[smul[a][u]][smul[a][v]] for a in range(p) for u in pts for v in pts)
    )
    if not ok:
        raise AxiomViolation("tables do not define a vector space")
    basis: list[int] = []
    span = {zero: ()}
    for u in pts:
        if u in span:
            continue
        basis.append(u)
        new = {}
        for c in range(p):
            cu = smul[c][u]
            for s, coeffs in span.items():
                new[add[s][cu]] = coeffs + (c,)
        span = new
    dim = len(basis)
    if p**dim != n:
        raise AxiomViolation("carrier size is not a power of the characteristic")
    label = [0] * n
    for u, coeffs in span.items():
        coeffs = coeffs + (0,) * (dim - len(coeffs))
        label[u] = linalg.encode(coeffs, p)
    sq = product(sp, sp)
    if not ContMap(sq, sp, [add[u][v] for u in pts for v in pts], check=False).is_continuous():
        raise AxiomViolation("addition is not continuous")
    for c in range(p):
        if not ContMap(sp, sp, smul[c], check=False).is_continuous():
            raise AxiomViolation("scalar multiplication is not continuous")
    conv0 = [[label[u] for u in g] for g in sp.conv(zero)]
    e = ConvVect(field, dim, conv0)
    relabel = tuple(label)
    for u in pts:
        got = {frozenset(relabel[a] for a in g) for g in sp.conv(u)}
        want = {frozenset(add_codes(relabel[u], a, p) for a in g) for g in e.gens0()}
        if got != want:
            raise AxiomViolation("convergence is not translation invariant")
    return e, relabel
