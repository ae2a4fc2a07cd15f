"""Difference-quotient operators on polynomial maps.

slope(f) is the exact difference factorizer f1 with
f(x + t v) - f(x) = t * f1(x, v, t); full_slope iterates it in all variables
(space and scale), sym_slope_iterated iterates it with each scale frozen.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .derive import CoordLabel, derive_polymap, tlab, vlab
from .polymap import Poly, PolyError, PolyMap
from .rings import RingError


def _fresh(name: str, taken) -> str:
    while name in taken:
        name += "'"
    return name


@dataclass
class SlopeResult:
    """Difference factorizer of a map, with its variable grouping.

    Invariant (checkable via factorizer_identity_holds): t * factorizer equals
    f(x + t v) - f(x) as a polynomial identity.
    """

    factorizer: PolyMap
    x_labels: tuple
    v_labels: tuple
    t_label: object


def factorizer_identity_holds(f: PolyMap, s: SlopeResult) -> bool:
    """Check t * f1(x,v,t) == f(x+tv) - f(x) symbolically."""
    fac = s.factorizer
    ring = f.ring
    n = fac.in_arity
    pos = {l: i for i, l in enumerate(fac.in_labels)}
    t = Poly.var(ring, n, pos[s.t_label])
    shift = [Poly.var(ring, n, pos[x]) + t * Poly.var(ring, n, pos[v])
             for x, v in zip(s.x_labels, s.v_labels)]
    value = [Poly.var(ring, n, pos[x]) for x in s.x_labels]
    for comp, fc in zip(f.comps, fac.comps):
        if t * fc != comp.subst(shift, n) - comp.subst(value, n):
            return False
    return True


def slope(f: PolyMap) -> SlopeResult:
    """First order difference quotient map of f, by exact division by t."""
    taken = set(f.in_labels)
    v_labels = []
    for idx, l in enumerate(f.in_labels):
        name = _fresh(f"{l}'" if isinstance(l, str) else f"d{idx}", taken)
        v_labels.append(name)
        taken.add(name)
    v_labels = tuple(v_labels)
    t_label = _fresh("t", taken)
    new_in = f.in_labels + v_labels + (t_label,)
    n = len(new_in)
    ring = f.ring
    t = Poly.var(ring, n, n - 1)
    images = [
        Poly.var(ring, n, i) + t * Poly.var(ring, n, len(f.in_labels) + i)
        for i in range(len(f.in_labels))
    ]
    value_images = [Poly.var(ring, n, i) for i in range(len(f.in_labels))]
    comps = []
    for c in f.comps:
        numer = c.subst(images, n) - c.subst(value_images, n)
        comps.append(numer.divide_by_var(n - 1))
    fac = PolyMap(ring, new_in, tuple(comps), f.out_labels)
    res = SlopeResult(fac, f.in_labels, v_labels, t_label)
    return res


def derive_map(f: PolyMap) -> PolyMap:
    """One-step derivation functor: x -> (f(x), f1(x,v,t), t).

    The result composes functorially: derive_map(g . f) = derive_map(g) . derive_map(f)
    provided f.out_labels equal g.in_labels.
    """
    if f.out_labels is None:
        f = PolyMap(f.ring, f.in_labels, f.comps,
                    tuple(f"y{i}" for i in range(f.out_arity)))
    s = slope(f)
    ring = f.ring
    new_in = s.factorizer.in_labels
    n = len(new_in)
    pos = {l: i for i, l in enumerate(new_in)}
    out_exprs = {}
    for idx, l in enumerate(f.out_labels):
        out_exprs[l] = f.comps[idx].subst(
            [Poly.var(ring, n, pos[x]) for x in f.in_labels], n)
        out_exprs[_partner_name(l)] = s.factorizer.comps[idx]
    out_exprs[s.t_label] = Poly.var(ring, n, pos[s.t_label])
    # rename domain partner labels the same way so that composition chains
    ren = dict(zip(s.v_labels, (_partner_name(l) for l in f.in_labels)))
    ren[s.t_label] = "t"
    out_ren = {s.t_label: "t"}
    m = PolyMap.from_label_exprs(ring, new_in, out_exprs)
    return m.rename(lambda l: ren.get(l, l),
                    lambda l: out_ren.get(l, l))


def _partner_name(l):
    return f"{l}'" if isinstance(l, str) else ("d", l)


def _cubic_base(f: PolyMap) -> PolyMap:
    """Relabel a parsed map into cubic coordinates v0 (with components)."""
    p, q = f.in_arity, f.out_arity
    return PolyMap(f.ring, tuple(vlab((), c) for c in range(p)), f.comps,
                   tuple(vlab((), c) for c in range(q)))


def full_slope(f: PolyMap, n: int) -> PolyMap:
    """The n-th full difference quotient f^[n] in cubic coordinates.

    Input labels are all v_beta (beta within {1..n}) and t_beta (beta nonempty);
    components are the top block (the iterated factorizer itself).
    """
    if n < 1:
        raise PolyError("full_slope needs n >= 1")
    m = _cubic_base(f)
    for j in range(1, n + 1):
        m = derive_polymap(m, j, with_s=False)
    top = frozenset(range(1, n + 1))
    keep = [l for l in m.out_labels
            if isinstance(l, CoordLabel) and l.kind == "v" and l.index == top]
    keep.sort(key=lambda l: l.comp)
    return m.restrict_outputs(keep)


def full_vertex_map(f: PolyMap, n: int) -> PolyMap:
    """The whole top-vertex map (all v-blocks and scale slots), cubic labels."""
    m = _cubic_base(f)
    for j in range(1, n + 1):
        m = derive_polymap(m, j, with_s=False)
    return m


def sym_slope_iterated(f: PolyMap, n: int) -> PolyMap:
    """f^[n]_{t_1..t_n}: iterate the slope with each scale frozen.

    A polynomial map in the variables v_beta (beta within {1..n}, vector) and
    t_1..t_n (scalars); only the space variables double at each step.
    """
    if n < 0:
        raise PolyError("sym_slope_iterated needs n >= 0")
    m = _cubic_base(f)
    ring = f.ring
    for k in range(1, n + 1):
        v_ins = [l for l in m.in_labels if l.kind == "v"]
        t_ins = [l for l in m.in_labels if l.kind == "t"]
        new_in = tuple(v_ins) + tuple(CoordLabel("v", l.index | {k}, l.comp) for l in v_ins) \
            + tuple(t_ins) + (tlab({k}),)
        nn = len(new_in)
        pos = {l: i for i, l in enumerate(new_in)}
        tvar = Poly.var(ring, nn, pos[tlab({k})])
        shift = []
        value = []
        for l in m.in_labels:
            value.append(Poly.var(ring, nn, pos[l]))
            if l.kind == "v":
                shift.append(Poly.var(ring, nn, pos[l])
                             + tvar * Poly.var(ring, nn, pos[CoordLabel("v", l.index | {k}, l.comp)]))
            else:
                shift.append(Poly.var(ring, nn, pos[l]))
        comps = []
        for c in m.comps:
            numer = c.subst(shift, nn) - c.subst(value, nn)
            comps.append(numer.divide_by_var(pos[tlab({k})]))
        m = PolyMap(ring, new_in, tuple(comps), m.out_labels)
    return m


def sym_slope_closed(f: PolyMap, n: int, t_values, v_values) -> list:
    """Closed cubic formula at invertible scales.

    (1 / prod t_i) * sum over alpha of (-1)^(n - |alpha|) *
    f( sum over beta within alpha of t_{beta_1}...t_{beta_l} * v_beta ).

    t_values: sequence of n units; v_values: mapping frozenset -> coordinate
    sequence of length f.in_arity.
    """
    ring = f.ring
    for t in t_values:
        if not ring.is_unit(t):
            raise RingError(f"sym_slope_closed needs invertible scales, got {t}")
    p = f.in_arity
    full = list(range(1, n + 1))

    def tprod(beta):
        acc = ring.one()
        for i in beta:
            acc = ring.mul(acc, t_values[i - 1])
        return acc

    acc = [ring.zero()] * f.out_arity
    for la in range(n + 1):
        for alpha in combinations(full, la):
            point = [ring.zero()] * p
            for lb in range(la + 1):
                for beta in combinations(alpha, lb):
                    w = tprod(beta)
                    vb = v_values[frozenset(beta)]
                    for c in range(p):
                        point[c] = ring.add(point[c], ring.mul(w, vb[c]))
            val = f.eval(point)
            if (n - la) % 2:
                val = [ring.neg(x) for x in val]
            acc = [ring.add(a, x) for a, x in zip(acc, val)]
    inv = ring.one()
    for t in t_values:
        inv = ring.mul(inv, ring.inv(t))
    return [ring.mul(inv, x) for x in acc]
