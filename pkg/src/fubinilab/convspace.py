"""Finite convergence spaces and continuous maps.

On a finite set every filter is principal, so a convergence structure is a
relation between nonempty subsets and points.  Each point stores the antichain
of maximal subsets converging to it; a subset converges iff it is nonempty and
contained in one of them, which builds down-closure into the representation.

Points are the integers ``0..n-1``.  The product of ``X`` and ``Y`` numbers the
pair ``(x, y)`` as ``x * len(Y) + y``.
"""
from __future__ import annotations

import itertools
from typing import Callable, Iterable, Iterator, Sequence

from .errors import BoundExceeded, NotContinuous

AXIOMS = ("limit", "down")
DEFAULT_ENUMERATION_BOUND = 3
DEFAULT_SEARCH_BOUND = 4096
MATERIALIZE_BOUND = 1 << 17

Family = tuple  # tuple[frozenset[int], ...]


def normalize_family(sets: Iterable[Iterable[int]]) -> Family:
    """Maximal elements of a family of sets, in a canonical order."""
    uniq = {frozenset(s) for s in sets}
    uniq.discard(frozenset())
    maximal = [s for s in uniq if not any(s < t for t in uniq)]
    return tuple(sorted(maximal, key=lambda s: (len(s), sorted(s))))


def check_axioms(axioms: str) -> str:
    if axioms not in AXIOMS:
        raise ValueError(f"unknown axiom mode {axioms!r}; expected one of {AXIOMS}")
    return axioms


def maximal_hereditary(candidates: Sequence, good: Callable[[frozenset], bool]) -> list[frozenset]:
    """Maximal members of a down-closed family of subsets of ``candidates``.

    ``good`` must be hereditary.  When the union of all good singletons is good
    it is the only maximal member, which is always the case under the limit
    axiom; otherwise a backtracking search runs.
    """
    cands = [c for c in candidates if good(frozenset((c,)))]
    full = frozenset(cands)
    if not cands:
        return []
    if good(full):
        return [full]
    out: list[frozenset] = []

    def rec(i: int, cur: frozenset) -> None:
        if i == len(cands):
            if all(c in cur or not good(cur | {c}) for c in cands):
                out.append(cur)
            return
        nxt = cur | {cands[i]}
        if good(nxt):
            rec(i + 1, nxt)
        rec(i + 1, cur)

    rec(0, frozenset())
    return out


class ConvSpace:
    """A finite convergence space.

    Exactly one of ``conv``, ``conv_fn`` or ``discrete=True`` supplies the
    structure.  ``conv_fn`` is evaluated lazily per point, so carriers that are
    only ever probed pointwise (large discrete spaces of distributions) are
    never enumerated.
    """

    def __init__(
        self,
        n: int,
        conv: Sequence[Iterable[Iterable[int]]] | None = None,
        *,
        conv_fn: Callable[[int], Iterable[Iterable[int]]] | None = None,
        discrete: bool = False,
        elements: Sequence | None = None,
        factors: tuple["ConvSpace", "ConvSpace"] | None = None,
        exponent: tuple["ConvSpace", "ConvSpace"] | None = None,
        vect=None,
        check: bool = True,
    ):
        if n < 0:
            raise ValueError("negative carrier size")
        self.n = n
        self.elements = elements
        self.factors = factors
        self.exponent = exponent
        self.vect = vect
        self._conv: tuple | None = None
        self._conv_fn = conv_fn
        self._lazy: dict[int, Family] = {}
        self._key = None
        self._index = None
        if conv is not None:
            if len(conv) != n:
                raise ValueError("one family per point required")
            self._conv = tuple(normalize_family(f) for f in conv)
            self._discrete = all(f == (frozenset((x,)),) for x, f in enumerate(self._conv))
        elif discrete:
            self._discrete = True
        elif conv_fn is not None:
            self._discrete = False
        else:
            raise ValueError("no convergence structure given")
        if check and n <= MATERIALIZE_BOUND:
            self.validate()

    # structure -----------------------------------------------------------
    def conv(self, x: int) -> Family:
        if self._discrete:
            return (frozenset((x,)),)
        if self._conv is not None:
            return self._conv[x]
        fam = self._lazy.get(x)
        if fam is None:
            fam = normalize_family(self._conv_fn(x))
            self._lazy[x] = fam
        return fam

    def converges(self, subset: Iterable[int], x: int) -> bool:
        s = frozenset(subset)
        return bool(s) and any(s <= g for g in self.conv(x))

    @property
    def is_discrete(self) -> bool:
        return self._discrete

    @property
    def families(self) -> tuple[Family, ...]:
        if self.n > MATERIALIZE_BOUND:
            raise BoundExceeded(f"refusing to materialize {self.n} points")
        return tuple(self.conv(x) for x in range(self.n))

    def validate(self) -> None:
        from .errors import AxiomViolation

        for x in range(self.n):
            fam = self.conv(x)
            if not any(x in g for g in fam):
                raise AxiomViolation(f"point filter axiom fails at {x}")
            for g in fam:
                if not g or min(g) < 0 or max(g) >= self.n:
                    raise AxiomViolation(f"bad converging set {sorted(g)} at {x}")

    def satisfies(self, axioms: str) -> bool:
        check_axioms(axioms)
        if axioms == "down" or self._discrete:
            return True
        return all(len(self.conv(x)) == 1 for x in range(self.n))

    def members(self, x: int) -> frozenset[frozenset[int]]:
        """Every converging subset at ``x`` (exponential; small carriers only)."""
        out = set()
        for g in self.conv(x):
            items = sorted(g)
            for r in range(1, len(items) + 1):
                out.update(frozenset(c) for c in itertools.combinations(items, r))
        return frozenset(out)

    def membership_bitsets(self) -> tuple[int, ...]:
        return tuple(
            sum(1 << _mask(a) for a in self.members(x)) for x in range(self.n)
        )

    # identity ------------------------------------------------------------
    @property
    def key(self):
        if self._key is None:
            if self._discrete:
                self._key = ("discrete", self.n)
            else:
                self._key = (
                    "conv",
                    self.n,
                    tuple(tuple(tuple(sorted(g)) for g in fam) for fam in self.families),
                )
        return self._key

    def __eq__(self, other) -> bool:
        return isinstance(other, ConvSpace) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __len__(self) -> int:
        return self.n

    def __repr__(self) -> str:
        if self._discrete:
            return f"ConvSpace(discrete, n={self.n})"
        if self.n <= 16:
            fams = [[sorted(g) for g in fam] for fam in self.families]
            return f"ConvSpace(n={self.n}, conv={fams})"
        return f"ConvSpace(n={self.n})"

    def index_of(self, element) -> int:
        """Point number of an element of a function space or similar carrier."""
        if self._index is None:
            self._index = {e: i for i, e in enumerate(self.elements)}
        return self._index[element]

    def projections(self) -> tuple["ContMap", "ContMap"]:
        if self.factors is None:
            raise ValueError("not a product space")
        x, y = self.factors
        m = y.n
        return (
            ContMap(self, x, fn=lambda p: p // m, check=False),
            ContMap(self, y, fn=lambda p: p % m, check=False),
        )

    def pair(self, x: int, y: int) -> int:
        return x * self.factors[1].n + y

    def unpair(self, p: int) -> tuple[int, int]:
        return divmod(p, self.factors[1].n)


def _mask(s: Iterable[int]) -> int:
    m = 0
    for i in s:
        m |= 1 << i
    return m


def mask_to_set(m: int) -> frozenset[int]:
    return frozenset(i for i in range(m.bit_length()) if m >> i & 1)


class ContMap:
    """A map of convergence spaces.

    Backed by a point table, a point function (tabulated on demand), or a
    linear map whose carriers are ``dom`` and ``cod``.
    """

    def __init__(
        self,
        dom: ConvSpace,
        cod: ConvSpace,
        table: Sequence[int] | None = None,
        *,
        fn: Callable[[int], int] | None = None,
        linear=None,
        check: bool = True,
    ):
        self.dom = dom
        self.cod = cod
        self.linear = linear
        self._fn = fn
        self._table = tuple(table) if table is not None else None
        if self._table is not None and len(self._table) != dom.n:
            raise ValueError("table length differs from domain size")
        if self._table is None and fn is None and linear is None:
            raise ValueError("no map data given")
        if check:
            self.certify()

    def __call__(self, x: int) -> int:
        if self._table is not None:
            return self._table[x]
        if self.linear is not None:
            return self.linear(x)
        return self._fn(x)

    @property
    def table(self) -> tuple[int, ...]:
        if self._table is None:
            if self.dom.n > MATERIALIZE_BOUND:
                raise BoundExceeded(f"refusing to tabulate {self.dom.n} points")
            self._table = tuple(self(x) for x in range(self.dom.n))
        return self._table

    def image(self, subset: Iterable[int]) -> frozenset[int]:
        return frozenset(self(a) for a in subset)

    def continuity_witness(self) -> tuple[int, frozenset] | None:
        if self.linear is not None:
            return self.linear.continuity_witness()
        if self.dom.is_discrete:
            return None
        for x in range(self.dom.n):
            fx = self(x)
            for g in self.dom.conv(x):
                if not self.cod.converges(self.image(g), fx):
                    return x, g
        return None

    def is_continuous(self) -> bool:
        return self.continuity_witness() is None

    def certify(self) -> "ContMap":
        w = self.continuity_witness()
        if w is not None:
            x, g = w
            raise NotContinuous(f"{sorted(g)} converges to {x} but its image does not")
        return self

    def __eq__(self, other) -> bool:
        if not isinstance(other, ContMap):
            return NotImplemented
        if self.dom != other.dom or self.cod != other.cod:
            return False
        if self.linear is not None and other.linear is not None:
            return self.linear == other.linear
        return self.table == other.table

    def __hash__(self) -> int:
        return hash((self.dom, self.cod, self.table))

    def __repr__(self) -> str:
        if self.linear is not None:
            return f"ContMap(linear {self.linear!r})"
        if self.dom.n <= 32:
            return f"ContMap({self.table})"
        return f"ContMap(n={self.dom.n} -> {self.cod.n})"


def compose(*maps: ContMap) -> ContMap:
    """``compose(g, f)`` is ``g`` after ``f``."""
    if not maps:
        raise ValueError("nothing to compose")
    out = maps[-1]
    for g in reversed(maps[:-1]):
        if g.dom != out.cod:
            raise ValueError("maps are not composable")
        if g.linear is not None and out.linear is not None:
            lin = g.linear.compose(out.linear)
            out = ContMap(out.dom, g.cod, linear=lin, check=False)
        else:
            inner = out
            if inner.dom.n <= 4096:
                out = ContMap(inner.dom, g.cod, [g(inner(x)) for x in range(inner.dom.n)], check=False)
            else:
                out = ContMap(inner.dom, g.cod, fn=lambda x, g=g, f=inner: g(f(x)), check=False)
    return out


def identity(x: ConvSpace) -> ContMap:
    if x.vect is not None:
        from .convvect import LinMap

        return ContMap(x, x, linear=LinMap.identity(x.vect), check=False)
    return ContMap(x, x, range(x.n), check=False)


def discrete(n: int) -> ConvSpace:
    return ConvSpace(n, [[(x,)] for x in range(n)])


def indiscrete(n: int) -> ConvSpace:
    return ConvSpace(n, [[range(n)] for _ in range(n)])


_PRODUCTS: dict = {}


def product(x: ConvSpace, y: ConvSpace) -> ConvSpace:
    """Product space; ``projections()`` on the result gives the two projections."""
    # keyed by identity since factors may carry elements; the entry keeps both alive
    hit = _PRODUCTS.get((id(x), id(y)))
    if hit is not None and hit[0] is x and hit[1] is y:
        return hit[2]
    if len(_PRODUCTS) > 4096:
        _PRODUCTS.clear()
    out = _product(x, y)
    _PRODUCTS[(id(x), id(y))] = (x, y, out)
    return out


def _product(x: ConvSpace, y: ConvSpace) -> ConvSpace:
    m = y.n

    def conv_fn(p: int):
        a, b = divmod(p, m)
        return [
            [i * m + j for i in ga for j in gb]
            for ga in x.conv(a)
            for gb in y.conv(b)
        ]

    n = x.n * m
    if x.is_discrete and y.is_discrete:
        return ConvSpace(n, discrete=True, factors=(x, y))
    if n <= MATERIALIZE_BOUND:
        return ConvSpace(n, [conv_fn(p) for p in range(n)], factors=(x, y))
    return ConvSpace(n, conv_fn=conv_fn, factors=(x, y), check=False)


def product_map(f: ContMap, g: ContMap, dom: ConvSpace | None = None, cod: ConvSpace | None = None) -> ContMap:
    dom = dom or product(f.dom, g.dom)
    cod = cod or product(f.cod, g.cod)
    m_in, m_out = g.dom.n, g.cod.n
    return ContMap(
        dom,
        cod,
        fn=lambda p: f(p // m_in) * m_out + g(p % m_in),
        check=False,
    )


def pairing(f: ContMap, g: ContMap, cod: ConvSpace | None = None) -> ContMap:
    if f.dom != g.dom:
        raise ValueError("pairing needs a common domain")
    cod = cod or product(f.cod, g.cod)
    m = g.cod.n
    return ContMap(f.dom, cod, [f(z) * m + g(z) for z in range(f.dom.n)])


def swap(x: ConvSpace, y: ConvSpace) -> ContMap:
    xy, yx = product(x, y), product(y, x)
    return ContMap(xy, yx, [b * x.n + a for a in range(x.n) for b in range(y.n)], check=False)


def is_continuous_table(x: ConvSpace, y: ConvSpace, table: Sequence[int]) -> bool:
    if x.is_discrete:
        return True
    for p in range(x.n):
        fp = table[p]
        for g in x.conv(p):
            if not y.converges({table[a] for a in g}, fp):
                return False
    return True


def homset(x: ConvSpace, y: ConvSpace, bound: int = DEFAULT_SEARCH_BOUND) -> list[tuple[int, ...]]:
    """Point tables of every continuous map, in lexicographic order."""
    if y.n ** x.n > bound:
        raise BoundExceeded(f"{y.n}^{x.n} candidate maps exceed search bound {bound}")
    return [
        t
        for t in itertools.product(range(y.n), repeat=x.n)
        if is_continuous_table(x, y, t)
    ]


def homs(x: ConvSpace, y: ConvSpace, bound: int = DEFAULT_SEARCH_BOUND) -> list[ContMap]:
    return [ContMap(x, y, t, check=False) for t in homset(x, y, bound)]


def function_space(x: ConvSpace, y: ConvSpace, bound: int = DEFAULT_SEARCH_BOUND) -> ConvSpace:
    """Continuous maps ``x -> y`` under continuous convergence.

    ``elements`` of the result are the point tables of the maps.
    """
    maps = homset(x, y, bound)
    if y.is_discrete:
        return ConvSpace(len(maps), discrete=True, elements=maps, exponent=(x, y))
    gens = [(p, x.conv(p)) for p in range(x.n)]
    conv = []
    for f in maps:
        def good(a: frozenset, f=f) -> bool:
            return all(
                y.converges({maps[i][b] for i in a for b in g}, f[p])
                for p, fam in gens
                for g in fam
            )

        conv.append(maximal_hereditary(range(len(maps)), good))
    return ConvSpace(len(maps), conv, elements=maps, exponent=(x, y))


def eval_map(x: ConvSpace, y: ConvSpace, fs: ConvSpace | None = None) -> ContMap:
    """Evaluation ``function_space(x, y) * x -> y``."""
    fs = fs or function_space(x, y)
    dom = product(fs, x)
    return ContMap(dom, y, fn=lambda p: fs.elements[p // x.n][p % x.n])


def curry(f: ContMap) -> ContMap:
    """Transpose of ``f : A * B -> C`` to ``A -> function_space(B, C)``."""
    if f.dom.factors is None:
        raise ValueError("curry needs a map out of a product space")
    a, b = f.dom.factors
    fs = function_space(b, f.cod)
    table = []
    for i in range(a.n):
        row = tuple(f(i * b.n + j) for j in range(b.n))
        try:
            table.append(fs.index_of(row))
        except KeyError:
            raise NotContinuous(f"partial map at {i} is not continuous") from None
    return ContMap(a, fs, table)


def uncurry(g: ContMap) -> ContMap:
    """Inverse of :func:`curry`."""
    if g.cod.exponent is None:
        raise ValueError("uncurry needs a map into a function space")
    b, c = g.cod.exponent
    dom = product(g.dom, b)
    elems = g.cod.elements
    return ContMap(dom, c, [elems[g(i)][j] for i in range(g.dom.n) for j in range(b.n)])


def embed_initial(subset: Iterable[int], x: ConvSpace) -> tuple[ConvSpace, ContMap]:
    """Subspace with the initial structure, and its inclusion."""
    pts = sorted(set(subset))
    pos = {s: i for i, s in enumerate(pts)}
    conv = [
        [[pos[t] for t in g if t in pos] for g in x.conv(s)]
        for s in pts
    ]
    sub = ConvSpace(len(pts), conv)
    return sub, ContMap(sub, x, pts)


def pullback(f: ContMap, g: ContMap) -> tuple[ConvSpace, ContMap, ContMap]:
    if f.cod != g.cod:
        raise ValueError("pullback needs a common codomain")
    a, b = f.dom, g.dom
    ab = product(a, b)
    fa, gb = [f(i) for i in range(a.n)], [g(j) for j in range(b.n)]
    pts = [i * b.n + j for i in range(a.n) for j in range(b.n) if fa[i] == gb[j]]
    sub, inc = embed_initial(pts, ab)
    p1 = ContMap(sub, a, [pts[k] // b.n for k in range(sub.n)])
    p2 = ContMap(sub, b, [pts[k] % b.n for k in range(sub.n)])
    return sub, p1, p2


def is_isomorphism(f: ContMap) -> tuple[bool, ContMap | None]:
    """Whether ``f`` is a continuous bijection with continuous inverse; the inverse if so."""
    if f.linear is not None:
        ok, inv = f.linear.is_isomorphism()
        return ok, (inv.underlying if ok else None)
    if f.dom.n != f.cod.n:
        return False, None
    t = f.table
    if len(set(t)) != len(t):
        return False, None
    inv = [0] * len(t)
    for i, v in enumerate(t):
        inv[v] = i
    g = ContMap(f.cod, f.dom, inv, check=False)
    if not (g.is_continuous() and f.is_continuous()):
        return False, None
    return True, g


def _point_families(m: int, x: int, axioms: str) -> list[Family]:
    others = [i for i in range(m) if i != x]
    fams: list[Family] = []
    if axioms == "limit":
        for r in range(len(others) + 1):
            for extra in itertools.combinations(others, r):
                fams.append(normalize_family([(x,) + extra]))
    else:
        subsets = [mask_to_set(k) for k in range(1, 1 << m)]
        for choice in range(1 << len(subsets)):
            fam = [s for i, s in enumerate(subsets) if choice >> i & 1]
            fs = set(fam)
            if frozenset((x,)) not in fs:
                continue
            if all(frozenset(c) in fs for s in fam for r in range(1, len(s)) for c in itertools.combinations(s, r)):
                fams.append(normalize_family(fam))

    def bits(fam: Family) -> int:
        members = set()
        for g in fam:
            items = sorted(g)
            for r in range(1, len(items) + 1):
                members.update(frozenset(c) for c in itertools.combinations(items, r))
        return sum(1 << _mask(a) for a in members)

    return sorted(fams, key=bits)


def enumerate_spaces(
    n: int, axioms: str = "limit", bound: int = DEFAULT_ENUMERATION_BOUND
) -> Iterator[ConvSpace]:
    """Every convergence structure on ``0..m-1`` for ``m <= n``.

    Ordered by size, then lexicographically by the per-point membership bitsets.
    """
    check_axioms(axioms)
    if n > bound:
        raise BoundExceeded(f"enumeration size {n} exceeds bound {bound}")
    for m in range(n + 1):
        per_point = [_point_families(m, x, axioms) for x in range(m)]
        for choice in itertools.product(*per_point):
            yield ConvSpace(m, choice)


def to_json(x: ConvSpace) -> dict:
    return {"points": x.n, "conv": [[_mask(g) for g in x.conv(p)] for p in range(x.n)]}


def from_json(data: dict) -> ConvSpace:
    n = int(data["points"])
    conv = data["conv"]
    if len(conv) != n:
        raise ValueError("conv must list one family per point")
    return ConvSpace(n, [[mask_to_set(int(m)) for m in fam] for fam in conv])
