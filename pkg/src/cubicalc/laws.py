"""Laws: compatible families of n-fold groupoid morphisms over a base map.

derive_law_full builds the vertex maps of the full cubic law of a polynomial
map by the same selector iteration that builds the vertex sets;
derive_law_sym builds the symmetric law at fixed scales from the higher order
difference factorizers.  The check_* functions verify the morphism and
compatibility properties symbolically; finite_law_from_map drives an
arbitrary (black-box) base map through the finite part.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .checks import CheckReport, check_morphism
from .constructions import gfull, gsy, gsy_scalar_action, _subsets, _tprod
from .derive import (CoordLabel, derive_polymap, extend_polymap, schema_key,
                     tlab, vlab)
from .extension import ExtElement, eval_over_extension
from .polymap import Poly, PolyMap, PolyRing
from .presentation import NFoldPresentation, attach_generic_params
from .rings import QQ, Ring, RingError
from .slopes import sym_slope_iterated


class LawError(ValueError):
    pass


@dataclass
class Law:
    """A family of vertex maps between two presentations over one hypercube."""

    kind: str  # "full" | "sym"
    base: PolyMap
    src: NFoldPresentation
    dst: NFoldPresentation
    vertex_maps: dict
    t: tuple | None = None

    def vertex_map(self, alpha) -> PolyMap:
        return self.vertex_maps[frozenset(alpha)]


def _cubic_base(f: PolyMap) -> PolyMap:
    p, q = f.in_arity, f.out_arity
    return PolyMap(f.ring, tuple(vlab((), c) for c in range(p)), f.comps,
                   tuple(vlab((), c) for c in range(q)))


def derive_law_full(f: PolyMap, N) -> Law:
    """G^N f: vertex maps built by deriving at directions inside alpha and
    extending by the identity elsewhere; the bottom map is f x id."""
    if isinstance(N, int):
        N = tuple(range(1, N + 1))
    N = tuple(sorted(N))
    base = _cubic_base(f)
    src = gfull(N, vdim=f.in_arity)
    dst = gfull(N, vdim=f.out_arity)
    maps = {}
    for alpha in src.vertices:
        m = base
        for j in N:
            if j in alpha:
                m = derive_polymap(m, j, with_s=False)
            else:
                m = extend_polymap(m, j, with_s=False)
        maps[alpha] = m.extend_inputs(src.schemas[alpha].labels)
    return Law("full", f, src, dst, maps)


def _relabeled_factorizer(f: PolyMap, beta: tuple, t, ring: Ring) -> PolyMap:
    """f^[|beta|] with directions 1..k relabeled onto beta and scales fixed."""
    k = len(beta)
    m = sym_slope_iterated(f, k)
    table = {i + 1: beta[i] for i in range(k)}

    def relabel(l: CoordLabel) -> CoordLabel:
        return CoordLabel(l.kind, frozenset(table[e] for e in l.index), l.comp)

    m = m.rename(relabel, None)
    assign = {}
    new_in = tuple(l for l in m.in_labels if l.kind == "v")
    n = len(new_in)
    for l in m.in_labels:
        if l.kind == "t":
            assign[l] = Poly.const(ring, n, t[next(iter(l.index))])
        else:
            assign[l] = Poly.var(ring, n, new_in.index(l))
    return m.subst(assign, new_in)


def derive_law_sym(f: PolyMap, n: int, t, ring: Ring | None = None) -> Law:
    """Gsy^n_t f: the vertex map at alpha collects the higher order
    difference factorizers f^[|beta|]_{t_beta} over all beta within alpha."""
    ring = ring or f.ring
    t = {k + 1: tv for k, tv in enumerate(t)}
    if len(t) != n:
        raise LawError(f"need {n} scales, got {len(t)}")
    src = gsy(n, [t[k] for k in sorted(t)], vdim=f.in_arity, ring=ring)
    dst = gsy(n, [t[k] for k in sorted(t)], vdim=f.out_arity, ring=ring)
    maps = {}
    for alpha in src.vertices:
        in_labels = src.schemas[alpha].labels
        exprs = {}
        for beta in _subsets(alpha):
            fac = _relabeled_factorizer(f, tuple(sorted(beta)), t, ring)
            fac = fac.extend_inputs(in_labels)
            for c in range(f.out_arity):
                exprs[vlab(beta, c)] = fac.comps[c]
        maps[alpha] = PolyMap.from_label_exprs(ring, in_labels, exprs)
    return Law("sym", f, src, dst, maps,
               t=tuple(t[k] for k in sorted(t)))


# ---------------------------------------------------------------------------
# symbolic law checks
# ---------------------------------------------------------------------------


def _symbolic_morphism_reports(src: NFoldPresentation, dst: NFoldPresentation,
                               maps: dict, location_prefix: str = "") -> list:
    """Exact symbolic morphism check on every edge (source, target, unit and
    composition along the composable-pair parameterization)."""
    out = []
    for key in sorted(src.edges, key=lambda k: (len(k[1]), sorted(k[1]),
                                                sorted(k[0]))):
        e = attach_generic_params(src.edges[key])
        e2 = dst.edges[key]
        f_hi, f_lo = maps[e.hi], maps[e.lo]
        loc = location_prefix + f"edge {sorted(key[0])}>{sorted(key[1])}"
        ok_st = (e2.source.compose(f_hi).equals(f_lo.compose(e.source))
                 and e2.target.compose(f_hi).equals(f_lo.compose(e.target)))
        out.append(CheckReport("law-source-target", loc,
                               "pass" if ok_st else "fail", 0))
        ok_z = f_hi.compose(e.unit).equals(e2.unit.compose(f_lo))
        out.append(CheckReport("law-unit", loc, "pass" if ok_z else "fail", 0))
        phi = e.pair_param
        lhs = f_hi.compose(e.compose.compose(phi))
        f_pair = _tagwise(f_hi, ("a", "b")).compose(phi)
        rhs = e2.compose.compose(f_pair)
        out.append(CheckReport("law-compose", loc,
                               "pass" if lhs.equals(rhs) else "fail", 0))
    return out


def _tagwise(m: PolyMap, tags) -> PolyMap:
    """Apply one map to several tagged copies at once."""
    ring = m.ring
    in_labels = tuple((tg, l) for tg in tags for l in m.in_labels)
    n = len(in_labels)
    exprs = {}
    for tg in tags:
        sub = m.subst({l: Poly.var(ring, n, in_labels.index((tg, l)))
                       for l in m.in_labels}, in_labels)
        for out_l, c in zip(m.out_labels, sub.comps):
            exprs[(tg, out_l)] = c
    return PolyMap.from_label_exprs(ring, in_labels, exprs)


def check_law_compatibility(law: Law) -> list:
    """The compatibility diagram: every edge projection, unit and composition
    commutes with the vertex maps, and the bottom map is base x id."""
    reports = _symbolic_morphism_reports(law.src, law.dst, law.vertex_maps)
    bottom = law.vertex_maps[frozenset()]
    base = _cubic_base(law.base)
    ok = all(bottom.component(vlab((), c)) ==
             base.extend_inputs(bottom.in_labels).comps[c]
             for c in range(law.base.out_arity))
    if law.kind == "full":
        n0 = len(bottom.in_labels)
        for l in bottom.in_labels:
            if isinstance(l, CoordLabel) and l.kind == "t":
                ok = ok and bottom.component(l) == Poly.var(
                    law.base.ring, n0, bottom.in_labels.index(l))
    reports.append(CheckReport("law-bottom-is-base", "vertex 0",
                               "pass" if ok else "fail", 0))
    return reports


def check_homogeneity(law: Law, s) -> list:
    """Phi_s-equivariance of a symmetric law: F_t . Phi_s = Phi_s . F_{s t}."""
    if law.kind != "sym":
        raise LawError("homogeneity is a property of symmetric laws")
    ring = law.base.ring
    n = len(law.t)
    _, _, phi_p = gsy_scalar_action(n, s, law.t, vdim=law.base.in_arity, ring=ring)
    _, _, phi_q = gsy_scalar_action(n, s, law.t, vdim=law.base.out_arity, ring=ring)
    st = [ring.mul(sv, tv) for sv, tv in zip(s, law.t)]
    law_st = derive_law_sym(law.base, n, st, ring)
    out = []
    for alpha in law.src.vertices:
        lhs = law.vertex_maps[alpha].compose(phi_p[alpha])
        rhs = phi_q[alpha].compose(law_st.vertex_maps[alpha])
        out.append(CheckReport("law-homogeneity", f"vertex {sorted(alpha)}",
                               "pass" if lhs.equals(rhs) else "fail", 0))
    return out


def _relabel_maps(n: int, sigma: dict, vdim: int, ring: Ring,
                  vertices) -> dict:
    """Vertex maps of the S_n relabelling Gsy_t -> Gsy_{t sigma}: the slot at
    gamma reads the input at sigma^{-1}(gamma), landing at vertex sigma(alpha)."""
    inv = {v: k for k, v in sigma.items()}
    maps = {}
    for alpha in vertices:
        in_labels = tuple(sorted((vlab(g, c) for g in _subsets(alpha)
                                  for c in range(vdim)), key=schema_key))
        nl = len(in_labels)
        exprs = {}
        for g in _subsets(frozenset(sigma[e] for e in alpha)):
            for c in range(vdim):
                pre = frozenset(inv[e] for e in g)
                exprs[vlab(g, c)] = Poly.var(ring, nl, in_labels.index(vlab(pre, c)))
        maps[alpha] = PolyMap.from_label_exprs(ring, in_labels, exprs)
    return maps


def check_symmetry(law: Law, sigma: dict) -> list:
    """S_n-equivariance: the relabelling intertwines F_t with F_{t sigma}.

    The relabelling sends the slot at gamma to the input at sigma^{-1}(gamma),
    so the destination scales are t'_{sigma(j)} = t_j.
    """
    if law.kind != "sym":
        raise LawError("symmetry is a property of symmetric laws")
    ring = law.base.ring
    n = len(law.t)
    inv = {v: k for k, v in sigma.items()}
    t_perm = [law.t[inv[i + 1] - 1] for i in range(n)]
    law_perm = derive_law_sym(law.base, n, t_perm, ring)
    r_p = _relabel_maps(n, sigma, law.base.in_arity, ring, law.src.vertices)
    r_q = _relabel_maps(n, sigma, law.base.out_arity, ring, law.src.vertices)
    out = []
    for alpha in law.src.vertices:
        salpha = frozenset(sigma[e] for e in alpha)
        lhs = r_q[alpha].compose(law.vertex_maps[alpha])
        rhs = law_perm.vertex_maps[salpha].compose(r_p[alpha])
        out.append(CheckReport("law-symmetry", f"vertex {sorted(alpha)}",
                               "pass" if lhs.equals(rhs) else "fail", 0))
    return out


def flip_isomorphism_reports(n: int, t, vdim: int = 1, ring: Ring = QQ,
                             seed: int = 0, samples: int = 40) -> list:
    """The exchange map as a verified isomorphism Gsy_t -> Gsy_{t sigma}
    (checked as a morphism after transposing the destination)."""
    sigma = {i: i for i in range(1, n + 1)}
    sigma[1], sigma[2] = 2, 1
    src = gsy(n, list(t), vdim, ring)
    inv = {v: k for k, v in sigma.items()}
    t_perm = [t[inv[i + 1] - 1] for i in range(n)]
    dst = gsy(n, t_perm, vdim, ring).transpose(sigma)
    maps = _relabel_maps(n, sigma, vdim, ring, src.vertices)
    return check_morphism(src, dst, maps, seed=seed, samples=samples)


# ---------------------------------------------------------------------------
# finite-part laws from arbitrary set maps
# ---------------------------------------------------------------------------


@dataclass
class PartialLaw:
    """Law on the finite part, defined pointwise from a black-box base map."""

    f: object  # callable tuple -> tuple
    n: int
    t: tuple
    ring: Ring
    out_dim: int

    def factorizer_value(self, beta: tuple, values: dict) -> list:
        """F^[k]_{t_beta} at one point, by the closed difference formula."""
        r = self.ring
        k = len(beta)
        acc = [r.zero()] * self.out_dim
        for la in range(k + 1):
            for delta_idx in combinations(range(k), la):
                delta = frozenset(beta[i] for i in delta_idx)
                point = None
                for g in _subsets(delta):
                    w = _tprod(r, {e: self.t[e - 1] for e in g}, g)
                    vg = values[g]
                    if point is None:
                        point = [r.zero()] * len(vg)
                    point = [r.add(pc, r.mul(w, vc)) for pc, vc in zip(point, vg)]
                val = list(self.f(tuple(point)))
                if (k - la) % 2:
                    val = [r.neg(x) for x in val]
                acc = [r.add(a, x) for a, x in zip(acc, val)]
        inv = r.one()
        for e in beta:
            inv = r.mul(inv, r.inv(self.t[e - 1]))
        return [r.mul(inv, x) for x in acc]

    def vertex_value(self, alpha, point: dict) -> dict:
        """Image of a Gsy_t-point under the law, coordinate dict to dict."""
        groups: dict = {}
        for l, v in point.items():
            groups.setdefault(l.index, {})[l.comp] = v
        values = {g: [groups[g][c] for c in sorted(groups[g])] for g in groups}
        out = {}
        for beta in _subsets(frozenset(alpha)):
            vals = self.factorizer_value(tuple(sorted(beta)),
                                         {g: values[g] for g in values
                                          if g <= beta})
            for c, x in enumerate(vals):
                out[vlab(beta, c)] = x
        return out


def finite_law_from_map(f, n: int, t, ring: Ring = QQ,
                        out_dim: int = 1) -> PartialLaw:
    """Unique finite-part law of an arbitrary set map; all t_i must be units."""
    for tv in t:
        if not ring.is_unit(tv):
            raise RingError(f"finite part needs invertible scales, got {tv}")
    return PartialLaw(f, n, tuple(t), ring, out_dim)


def check_finite_law(plaw: PartialLaw, in_dim: int = 1, seed: int = 0,
                     samples: int = 30) -> list:
    """Morphism identities of a black-box finite-part law on sampled
    composable pairs (exact rational arithmetic)."""
    import random

    from .checks import (_ev, _ev_tagged, _fmt_point, _LawRun, _points_equal,
                         _sample_via_param)

    ring = plaw.ring
    src = gsy(plaw.n, list(plaw.t), vdim=in_dim, ring=ring)
    dst = gsy(plaw.n, list(plaw.t), vdim=plaw.out_dim, ring=ring)
    rng = random.Random(seed)
    out = []
    for key in sorted(src.edges, key=lambda k: (len(k[1]), sorted(k[1]),
                                                sorted(k[0]))):
        e = attach_generic_params(src.edges[key])
        e2 = dst.edges[key]
        loc = f"edge {sorted(key[0])}>{sorted(key[1])}"
        st_run = _LawRun("finite-law-source-target", loc, seed)
        c_run = _LawRun("finite-law-compose", loc, seed)
        for pair in _sample_via_param(e.pair_param, e.dom, rng, samples):
            a, b = pair["a"], pair["b"]
            fa = plaw.vertex_value(e.hi, a)
            fb = plaw.vertex_value(e.hi, b)
            st_run.check(
                _points_equal(_ev(e2.source, fa), plaw.vertex_value(e.lo, _ev(e.source, a)))
                and _points_equal(_ev(e2.target, fa), plaw.vertex_value(e.lo, _ev(e.target, a))),
                lambda a=a: {"element": _fmt_point(a, ring)})
            lhs = plaw.vertex_value(e.hi, _ev_tagged(e.compose, {"a": a, "b": b}))
            rhs = _ev_tagged(e2.compose, {"a": fa, "b": fb})
            c_run.check(_points_equal(lhs, rhs),
                        lambda a=a, b=b: {"left": _fmt_point(a, ring),
                                          "right": _fmt_point(b, ring)})
        out.extend((st_run.report, c_run.report))
    return out


# ---------------------------------------------------------------------------
# the derived ring structure (Goid_n rings) and the algebraic model
# ---------------------------------------------------------------------------


def ring_product_map(ring: Ring = QQ) -> PolyMap:
    """The base-ring multiplication K x K -> K as a polynomial map."""
    a = Poly.var(ring, 2, 0)
    b = Poly.var(ring, 2, 1)
    return PolyMap(ring, ("a", "b"), (a * b,))


def ring_goid_structure(n: int, t, ring: Ring = QQ) -> dict:
    """Derive the ring product through Gsy^n_t and compare the induced vertex
    products with the structure constants of the extension algebras A_t."""
    law = derive_law_sym(ring_product_map(ring), n, list(t), ring)
    results = {"law": law, "matches_ext_mul": True, "mismatches": []}
    t_by = {k + 1: tv for k, tv in enumerate(t)}
    for alpha in law.src.vertices:
        m = law.vertex_maps[alpha]
        nl = len(m.in_labels)
        for delta in _subsets(alpha):
            expected = Poly.zero(ring, nl)
            for beta in _subsets(alpha):
                for gamma in _subsets(alpha):
                    if beta | gamma != delta:
                        continue
                    term = Poly.var(ring, nl, m.in_labels.index(vlab(beta, 0))) \
                        * Poly.var(ring, nl, m.in_labels.index(vlab(gamma, 1)))
                    expected = expected + term.scale(
                        _tprod(ring, t_by, beta & gamma))
            if m.component(vlab(delta, 0)) != expected:
                results["matches_ext_mul"] = False
                results["mismatches"].append((alpha, delta))
    return results


def sym_law_via_extension(f: PolyMap, n: int, t, alpha,
                          ring: Ring = QQ) -> PolyMap:
    """The vertex map at alpha computed purely by scalar extension: evaluate
    f over A_t^{alpha} with symbolic coefficients and read off coefficients."""
    alpha = tuple(sorted(alpha))
    p = f.in_arity
    in_labels = tuple(sorted((vlab(g, c) for g in _subsets(frozenset(alpha))
                              for c in range(p)), key=schema_key))
    coeff_ring = PolyRing(ring, len(in_labels))
    t_vals = tuple(Poly.const(ring, len(in_labels), t[e - 1]) for e in alpha)
    base = []
    for c in range(p):
        table = {}
        for g in _subsets(frozenset(alpha)):
            table[frozenset(g)] = Poly.var(ring, len(in_labels),
                                           in_labels.index(vlab(g, c)))
        base.append(ExtElement.from_subset_coeffs(coeff_ring, alpha, t_vals, table))
    f_lifted = PolyMap(coeff_ring, f.in_labels, tuple(
        Poly(coeff_ring, f.in_arity,
             {e: Poly.const(ring, len(in_labels), c) for e, c in comp.terms.items()})
        for comp in f.comps))
    images = eval_over_extension(f_lifted, base)
    exprs = {}
    for c, img in enumerate(images):
        for g in _subsets(frozenset(alpha)):
            exprs[vlab(g, c)] = img.coeff(g)
    return PolyMap.from_label_exprs(ring, in_labels, exprs)
