"""Shared helpers: random exact polynomial maps and an independent symbolic
differentiation oracle (power rule only, no difference quotients)."""
from __future__ import annotations

import random
from fractions import Fraction

import pytest

from cubicalc.polymap import Poly, PolyMap
from cubicalc.rings import QQ


def rand_fraction(rng: random.Random, span: int = 5) -> Fraction:
    return Fraction(rng.randint(-span, span), rng.randint(1, 3))


def rand_unit(rng: random.Random, span: int = 5) -> Fraction:
    x = rand_fraction(rng, span)
    while x == 0:
        x = rand_fraction(rng, span)
    return x


def random_poly(rng: random.Random, arity: int, deg: int, terms: int = 4) -> Poly:
    """Random sparse polynomial with total degree <= deg."""
    table = {}
    for _ in range(terms):
        e = [0] * arity
        budget = rng.randint(0, deg)
        for _ in range(budget):
            e[rng.randrange(arity)] += 1
        table[tuple(e)] = rand_fraction(rng)
    return Poly(QQ, arity, table)


def random_polymap(rng: random.Random, in_arity: int, out_arity: int,
                   deg: int, terms: int = 4) -> PolyMap:
    labels = tuple(f"x{i}" for i in range(in_arity))
    comps = tuple(random_poly(rng, in_arity, deg, terms)
                  for _ in range(out_arity))
    return PolyMap(QQ, labels, comps)


# -- independent differentiation oracle (power rule, no slopes) --------------


def poly_partial(p: Poly, i: int) -> Poly:
    """d/dx_i by the exponent rule."""
    terms = {}
    r = p.ring
    for e, c in p.terms.items():
        if e[i] == 0:
            continue
        e2 = list(e)
        e2[i] -= 1
        terms[tuple(e2)] = r.mul(c, r.from_int(e[i]))
    return Poly(r, p.arity, terms)


def mixed_partial_map(f: PolyMap, n: int) -> PolyMap:
    """d/da_1 ... d/da_n of f(v0 + a_1 v_1 + ... + a_n v_n) at a = 0.

    Returns a map in string variables v0_c, v1_c, ..., vn_c (c < in_arity):
    the n-th multilinear differential of f, the oracle for Schwarz tests.
    """
    p = f.in_arity
    labels = tuple(f"v{k}_{c}" for k in range(n + 1) for c in range(p))
    big = labels + tuple(f"a{k}" for k in range(1, n + 1))
    nbig = len(big)

    def var(name):
        return Poly.var(QQ, nbig, big.index(name))

    images = []
    for c in range(p):
        acc = var(f"v0_{c}")
        for k in range(1, n + 1):
            acc = acc + var(f"a{k}") * var(f"v{k}_{c}")
        images.append(acc)
    at_zero = [Poly.var(QQ, len(labels), i) for i in range(len(labels))] \
        + [Poly.zero(QQ, len(labels))] * n
    comps = []
    for comp in f.comps:
        g = comp.subst(images, nbig)
        for k in range(1, n + 1):
            g = poly_partial(g, big.index(f"a{k}"))
        comps.append(g.subst(at_zero, len(labels)))
    return PolyMap(QQ, labels, tuple(comps))


@pytest.fixture
def rng():
    return random.Random(20260810)
