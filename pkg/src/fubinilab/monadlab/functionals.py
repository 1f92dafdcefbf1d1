"""Distributions as plain higher-order functions.

A functional is a callable taking a scalar-valued function and returning a
scalar.  Nothing here knows about coordinates, so the same combinators serve
the prime-field monad and exact rational weights.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Callable, Hashable, Mapping, Sequence

Function = Callable[[Hashable], object]
Functional = Callable[[Function], object]


def dirac(point) -> Functional:
    return lambda f: f(point)


def weighted(weights: Mapping, modulus: int | None = None) -> Functional:
    """``f -> sum_x w[x] f(x)``, reduced modulo ``modulus`` if given."""
    items = list(weights.items())

    def mu(f):
        total = sum((w * f(x) for x, w in items), 0)
        return total % modulus if modulus is not None else total

    return mu


def tprime(mu: Functional, y) -> Functional:
    """``(mu, y) -> lambda f. mu(lambda x. f(x, y))``."""
    return lambda f: mu(lambda x: f((x, y)))


def tdoubleprime(x, nu: Functional) -> Functional:
    """``(x, nu) -> lambda f. nu(lambda y. f(x, y))``."""
    return lambda f: nu(lambda y: f((x, y)))


def pushforward(h: Callable, phi: Functional) -> Functional:
    return lambda g: phi(lambda a: g(h(a)))


def flatten(rho: Functional) -> Functional:
    """Multiplication: ``rho -> lambda f. rho(lambda m. m(f))``."""
    return lambda f: rho(lambda m: m(f))


def otimes(mu: Functional, nu: Functional) -> Functional:
    """Multiplication after the pushforward of ``tprime`` after ``tdoubleprime``."""
    inner = tdoubleprime(mu, nu)
    return flatten(pushforward(lambda pair: tprime(pair[0], pair[1]), inner))


def otimes_tilde(mu: Functional, nu: Functional) -> Functional:
    inner = tprime(mu, nu)
    return flatten(pushforward(lambda pair: tdoubleprime(pair[0], pair[1]), inner))


def iterated_inner_x(mu: Functional, nu: Functional, f: Function):
    """``nu(lambda y. mu(lambda x. f(x, y)))``."""
    return nu(lambda y: mu(lambda x: f((x, y))))


def iterated_inner_y(mu: Functional, nu: Functional, f: Function):
    """``mu(lambda x. nu(lambda y. f(x, y)))``."""
    return mu(lambda x: nu(lambda y: f((x, y))))


def rational_weights(values: Sequence) -> dict:
    return {i: Fraction(v) for i, v in enumerate(values)}
