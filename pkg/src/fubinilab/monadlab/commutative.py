"""Strengths, the two Fubini composites, commutativity verdicts and the
enrichment recovered from the monoidal structure.

For the distribution monad the strengths are built twice: by pushing the
partial maps ``x -> (x, y)`` through the functor, and from the lambda formulas
in :mod:`.functionals`.  The two must agree exactly.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .. import convspace as cs
from ..convspace import ContMap, ConvSpace
from ..errors import EnrichmentMismatch, MismatchedConstructions
from . import functionals as fn
from .monads import DistributionMonad, MonadInstance, is_reflexive


def _partial_left(x: ConvSpace, xy: ConvSpace, y: int) -> ContMap:
    m = xy.factors[1].n
    return ContMap(x, xy, [i * m + y for i in range(x.n)])


def _partial_right(y: ConvSpace, xy: ConvSpace, x: int) -> ContMap:
    m = xy.factors[1].n
    return ContMap(y, xy, [x * m + j for j in range(y.n)])


def tprime_enriched(monad: MonadInstance, x: ConvSpace, y: ConvSpace) -> ContMap:
    """``T x * y -> T(x * y)``, ``(mu, b) -> T(a -> (a, b))(mu)``."""
    tx = monad.obj(x)
    xy = cs.product(x, y)
    pushed = [monad.fmap(_partial_left(x, xy, b)) for b in range(y.n)]
    dom = cs.product(tx, y)
    table = [pushed[b](mu) for mu in range(tx.n) for b in range(y.n)]
    return ContMap(dom, monad.obj(xy), table)


def tdoubleprime_enriched(monad: MonadInstance, x: ConvSpace, y: ConvSpace) -> ContMap:
    """``x * T y -> T(x * y)``, ``(a, nu) -> T(b -> (a, b))(nu)``."""
    ty = monad.obj(y)
    xy = cs.product(x, y)
    pushed = [monad.fmap(_partial_right(y, xy, a)) for a in range(x.n)]
    dom = cs.product(x, ty)
    table = [pushed[a](nu) for a in range(x.n) for nu in range(ty.n)]
    return ContMap(dom, monad.obj(xy), table)


def functional(d: DistributionMonad, x: ConvSpace, mu: int) -> fn.Functional:
    """``mu`` as a callable on functions of the points of ``x``."""
    return lambda f: d.evaluate(x, mu, [f(i) for i in range(x.n)])


def _basis_functions(d: DistributionMonad, xy: ConvSpace):
    m = xy.factors[1].n
    cot = d.cot(xy)
    out = []
    for row in cot.realization.basis:
        out.append(lambda pair, row=row: int(row[pair[0] * m + pair[1]]))
    return out


def _point_from_values(d: DistributionMonad, xy: ConvSpace, values) -> int:
    return d.vect(xy).point_of_ambient(np.array(values, dtype=np.int64).reshape(-1))


def tprime_lambda(d: DistributionMonad, x: ConvSpace, y: ConvSpace) -> ContMap:
    """``(mu, b) -> lambda f. mu(lambda a. f(a, b))`` in coordinates."""
    tx = d.obj(x)
    xy = cs.product(x, y)
    basis = _basis_functions(d, xy)
    table = []
    for mu in range(tx.n):
        mf = functional(d, x, mu)
        for b in range(y.n):
            t = fn.tprime(mf, b)
            table.append(_point_from_values(d, xy, [t(g) for g in basis]))
    return ContMap(cs.product(tx, y), d.obj(xy), table)


def tdoubleprime_lambda(d: DistributionMonad, x: ConvSpace, y: ConvSpace) -> ContMap:
    ty = d.obj(y)
    xy = cs.product(x, y)
    basis = _basis_functions(d, xy)
    table = []
    for a in range(x.n):
        for nu in range(ty.n):
            t = fn.tdoubleprime(a, functional(d, y, nu))
            table.append(_point_from_values(d, xy, [t(g) for g in basis]))
    return ContMap(cs.product(x, ty), d.obj(xy), table)


def tprime(x: ConvSpace, y: ConvSpace, monad: MonadInstance) -> ContMap:
    """Left strength; for the distribution monad both constructions are compared."""
    a = tprime_enriched(monad, x, y)
    if isinstance(monad, DistributionMonad):
        b = tprime_lambda(monad, x, y)
        if a.table != b.table:
            raise MismatchedConstructions("left strength: functor route and lambda route differ")
    return a


def tdoubleprime(x: ConvSpace, y: ConvSpace, monad: MonadInstance) -> ContMap:
    a = tdoubleprime_enriched(monad, x, y)
    if isinstance(monad, DistributionMonad):
        b = tdoubleprime_lambda(monad, x, y)
        if a.table != b.table:
            raise MismatchedConstructions("right strength: functor route and lambda route differ")
    return a


def fubini_pair(x: ConvSpace, y: ConvSpace, monad: MonadInstance, *, tilde: bool = True):
    """The two composites ``T x * T y -> T(x * y)``.

    ``otimes = mult . T(tprime[x, y]) . tdoubleprime[T x, y]`` and
    ``otimes_tilde = mult . T(tdoubleprime[x, y]) . tprime[x, T y]``.
    """
    tx, ty = monad.obj(x), monad.obj(y)
    xy = cs.product(x, y)
    mu = monad.mult(xy)
    otimes = cs.compose(mu, monad.fmap(tprime(x, y, monad)), tdoubleprime(tx, y, monad))
    if not tilde:
        return otimes, None
    other = cs.compose(mu, monad.fmap(tdoubleprime(x, y, monad)), tprime(x, ty, monad))
    return otimes, other


def identification_failures(d: DistributionMonad, x: ConvSpace, y: ConvSpace, pair=None) -> list[dict]:
    """Triples where the composites differ from the iterated expressions.

    ``otimes(mu, nu)(f)`` must equal ``nu(lambda y. mu(lambda x. f))`` and the
    pure lambda composite; ``otimes_tilde`` must equal the other order.
    """
    otimes, tilde = pair or fubini_pair(x, y, d)
    xy = cs.product(x, y)
    tx, ty = d.obj(x), d.obj(y)
    cot = d.cot(xy)
    m = y.n
    out = []
    for fpt in range(cot.size):
        vals = d.function_values(xy, fpt)
        f = lambda pr, vals=vals: vals[pr[0] * m + pr[1]]
        for a in range(tx.n):
            ma = functional(d, x, a)
            for b in range(ty.n):
                nb = functional(d, y, b)
                q = a * ty.n + b
                lhs = d.evaluate(xy, otimes(q), vals)
                rhs = d.evaluate(xy, tilde(q), vals)
                want_l = fn.iterated_inner_x(ma, nb, f)
                want_r = fn.iterated_inner_y(ma, nb, f)
                lam = fn.otimes(ma, nb)(f)
                lam_t = fn.otimes_tilde(ma, nb)(f)
                if lhs != want_l or lhs != lam or rhs != want_r or rhs != lam_t:
                    out.append({"mu": a, "nu": b, "f": list(vals), "otimes": lhs, "iterated": want_l,
                                "otimes_tilde": rhs, "iterated_other": want_r})
    return out


@dataclass
class FubiniVerdict:
    X: Any
    Y: Any
    reflexive: dict
    equal: bool
    witness: dict | None = None
    extra: dict = field(default_factory=dict)

    @property
    def hypotheses_hold(self) -> bool:
        return all(self.reflexive.values())

    @property
    def implication_holds(self) -> bool:
        return self.equal or not self.hypotheses_hold

    def to_json(self) -> dict:
        return {
            "X": self.X,
            "Y": self.Y,
            "reflexive": dict(self.reflexive),
            "equal": self.equal,
            "witness": self.witness,
        }


def compare_pair(x: ConvSpace, y: ConvSpace, monad: MonadInstance, pair=None) -> tuple[bool, dict | None]:
    otimes, tilde = pair or fubini_pair(x, y, monad)
    ty = monad.obj(y)
    for q in range(otimes.dom.n):
        if otimes(q) != tilde(q):
            a, b = divmod(q, ty.n)
            w = {"mu": a, "nu": b, "otimes": otimes(q), "otimes_tilde": tilde(q)}
            if isinstance(monad, DistributionMonad):
                xy = cs.product(x, y)
                w["mu_weights"] = list(monad.weights(x, a))
                w["nu_weights"] = list(monad.weights(y, b))
                for fpt in range(monad.cot(xy).size):
                    vals = monad.function_values(xy, fpt)
                    l, r = monad.evaluate(xy, otimes(q), vals), monad.evaluate(xy, tilde(q), vals)
                    if l != r:
                        w.update({"f": list(vals), "lhs": l, "rhs": r})
                        break
            return False, w
    return True, None


def check_commutative(d: DistributionMonad, x: ConvSpace, y: ConvSpace, pair=None) -> FubiniVerdict:
    """Commutativity at ``(x, y)`` with the reflexivity hypotheses recorded."""
    refl = {
        "cot_X": is_reflexive(d.cot(x)).reflexive,
        "cot_Y": is_reflexive(d.cot(y)).reflexive,
        "cot_XY": is_reflexive(d.cot(cs.product(x, y))).reflexive,
    }
    equal, witness = compare_pair(x, y, d, pair)
    return FubiniVerdict(cs.to_json(x), cs.to_json(y), refl, equal, witness)


@dataclass
class KockResult:
    X: ConvSpace
    Y: ConvSpace
    derived: dict
    direct: dict

    @property
    def matches(self) -> bool:
        return self.derived == self.direct


def kock_enrichment(monad: MonadInstance, x: ConvSpace, y: ConvSpace, *, strict: bool = True) -> KockResult:
    """Structure maps ``[x, y] -> [T x, T y]`` recovered from the monoidal structure.

    ``h`` goes to the transpose of ``T(ev) . otimes . (1 * unit)`` at ``h``; the
    result is compared with the functor's own action on ``h``.
    """
    fs = cs.function_space(x, y)
    xf = cs.product(x, fs)
    m = fs.n
    ev = ContMap(xf, y, [fs.elements[q % m][q // m] for q in range(xf.n)])
    otimes, _ = fubini_pair(x, fs, monad, tilde=False)
    eta = monad.unit(fs)
    tev = monad.fmap(ev)
    tx = monad.obj(x)
    tfs_n = monad.obj(fs).n
    derived, direct = {}, {}
    for h in range(fs.n):
        e = eta(h)
        derived[fs.elements[h]] = tuple(tev(otimes(mu * tfs_n + e)) for mu in range(tx.n))
        direct[fs.elements[h]] = monad.fmap(ContMap(x, y, fs.elements[h])).table
    out = KockResult(x, y, derived, direct)
    if strict and not out.matches:
        raise EnrichmentMismatch(f"recovered enrichment differs from the functor at {x!r}, {y!r}")
    return out
