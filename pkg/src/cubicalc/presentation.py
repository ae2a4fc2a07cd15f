"""Computable presentations of small n-fold categories and groupoids.

A presentation assigns a coordinate schema to every vertex of a hypercube and
an edge category (source, target, unit, composition, optional inverse) to
every edge.  Composition follows the global convention: compose(a, b) is
defined exactly when source(a) = target(b) ("b, then a").

Composable tuples are produced by polynomial parameterizations (pair_param /
triple_param / quad_param); samplers simply evaluate these at random points,
so every generated tuple is exactly composable.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

from .derive import tag_of, with_tag
from .polymap import Poly, PolyError, PolyMap
from .rings import Ring


class SamplingError(RuntimeError):
    pass


@dataclass(frozen=True)
class BoxConstraint:
    """Membership condition: every component of expr must land in [lo, hi]."""

    expr: PolyMap  # schema labels -> m components
    lo: object
    hi: object

    def holds(self, point: dict) -> bool:
        vals = self.expr.eval([point[l] for l in self.expr.in_labels])
        return all(self.lo <= v <= self.hi for v in vals)


@dataclass(frozen=True)
class CoordSchema:
    """Affine coordinate description of one vertex set."""

    ring: Ring
    labels: tuple
    constraints: tuple = ()
    unit_labels: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))

    def dim(self) -> int:
        return len(self.labels)

    def satisfies(self, point: dict) -> bool:
        return all(c.holds(point) for c in self.constraints)

    def sample(self, rng, count: int = 1, span: int = 2, max_tries: int = 5000) -> list[dict]:
        """Random exact points satisfying all constraints (rejection sampling)."""
        out = []
        tries = 0
        while len(out) < count:
            if tries > max_tries:
                raise SamplingError(
                    f"rejection sampling exhausted after {tries} tries on a "
                    f"{self.dim()}-coordinate schema with "
                    f"{len(self.constraints)} constraints")
            tries += 1
            point = {}
            for l in self.labels:
                if l in self.unit_labels:
                    point[l] = self.ring.rand_unit(rng, span)
                else:
                    point[l] = self.ring.rand(rng, span)
            if self.satisfies(point):
                out.append(point)
        return out


def sample(schema: CoordSchema, seed: int, count: int):
    """Deterministic constrained sampling entry point (fixed seed, fixed output)."""
    import random

    return schema.sample(random.Random(seed), count)


LEFT, RIGHT = "a", "b"  # compose(a, b): source(a) = target(b)


@dataclass
class EdgeCat:
    """Category structure carried by one oriented edge of the hypercube."""

    direction: object
    lo: object
    hi: object
    dom: CoordSchema  # morphism set (hi vertex)
    cod: CoordSchema  # object set (lo vertex)
    source: PolyMap
    target: PolyMap
    unit: PolyMap
    compose: PolyMap  # domain labels tagged "a" (left) and "b" (right)
    inverse: PolyMap | None = None
    pair_param: PolyMap | None = None
    pair_section: PolyMap | None = None
    triple_param: PolyMap | None = None

    def is_groupoid(self) -> bool:
        return self.inverse is not None


def tagged(tag, labels):
    return tuple(with_tag(tag, l) for l in labels)


def generic_pair_param(ring: Ring, dom_labels, cod_labels, target: PolyMap):
    """Composable-pair parameterization when the source map is the projection
    onto the object coordinates: the right element is free and the left
    element's base block is its target."""
    dom_labels = tuple(dom_labels)
    fiber = [l for l in dom_labels if l not in set(cod_labels)]
    params = tagged(RIGHT, dom_labels) + tagged(LEFT, fiber)
    n = len(params)
    pos = {l: i for i, l in enumerate(params)}
    b_assign = {l: Poly.var(ring, n, pos[(RIGHT, l)]) for l in dom_labels}
    tgt_b = target.subst(b_assign, params)
    exprs = {}
    for l in dom_labels:
        exprs[(RIGHT, l)] = Poly.var(ring, n, pos[(RIGHT, l)])
    for l, c in zip(tgt_b.out_labels, tgt_b.comps):
        exprs[(LEFT, l)] = c
    for l in fiber:
        exprs[(LEFT, l)] = Poly.var(ring, n, pos[(LEFT, l)])
    param = PolyMap.from_label_exprs(ring, params, exprs)
    section = PolyMap.projection(ring,
                                 tagged(LEFT, dom_labels) + tagged(RIGHT, dom_labels),
                                 params)
    return param, section


def generic_triple_param(ring: Ring, dom_labels, cod_labels, target: PolyMap):
    """Composable triples (a, b, c) with source(a)=target(b), source(b)=target(c)."""
    dom_labels = tuple(dom_labels)
    fiber = [l for l in dom_labels if l not in set(cod_labels)]
    params = tagged("c", dom_labels) + tagged(RIGHT, fiber) + tagged(LEFT, fiber)
    n = len(params)
    pos = {l: i for i, l in enumerate(params)}

    exprs = {}
    c_point = {l: Poly.var(ring, n, pos[("c", l)]) for l in dom_labels}
    for l in dom_labels:
        exprs[("c", l)] = c_point[l]
    tgt_c = target.subst(c_point, params)
    b_point = {}
    for l in dom_labels:
        if l in set(cod_labels):
            b_point[l] = tgt_c.component(l)
        else:
            b_point[l] = Poly.var(ring, n, pos[(RIGHT, l)])
        exprs[(RIGHT, l)] = b_point[l]
    tgt_b = target.subst(b_point, params)
    for l in dom_labels:
        if l in set(cod_labels):
            exprs[(LEFT, l)] = tgt_b.component(l)
        else:
            exprs[(LEFT, l)] = Poly.var(ring, n, pos[(LEFT, l)])
    return PolyMap.from_label_exprs(ring, params, exprs)


def source_is_projection(edge: EdgeCat) -> bool:
    idx = {l: i for i, l in enumerate(edge.dom.labels)}
    for out_l, comp in zip(edge.source.out_labels, edge.source.comps):
        want = Poly.var(edge.dom.ring, len(edge.dom.labels), idx[out_l])
        if edge.source.extend_inputs(edge.dom.labels).component(out_l) != want:
            return False
    return True


def attach_generic_params(edge: EdgeCat) -> EdgeCat:
    ring = edge.dom.ring
    if edge.pair_param is None or edge.triple_param is None:
        if not source_is_projection(edge):
            raise PolyError(
                f"edge {edge.lo}>{edge.hi}: generic composability sampling "
                "requires a projection source; attach explicit parameterizations")
    if edge.pair_param is None:
        edge.pair_param, edge.pair_section = generic_pair_param(
            ring, edge.dom.labels, edge.cod.labels, edge.target)
    if edge.triple_param is None:
        edge.triple_param = generic_triple_param(
            ring, edge.dom.labels, edge.cod.labels, edge.target)
    return edge


@dataclass
class NFoldPresentation:
    """An n-fold category presented by vertex schemas and edge categories."""

    name: str
    ring: Ring
    directions: tuple
    vertices: tuple
    schemas: dict
    edges: dict  # (lo, hi) -> EdgeCat
    faces: tuple = ()
    quad_params: dict = field(default_factory=dict)  # (lo, hi) -> PolyMap (tags a,b,c,d)

    def edge(self, lo, hi) -> EdgeCat:
        return self.edges[(lo, hi)]

    def schema(self, v) -> CoordSchema:
        return self.schemas[v]

    def is_groupoid(self) -> bool:
        return all(e.is_groupoid() for e in self.edges.values())

    def face_frame(self, face):
        """The four edges of a face (gamma, alpha): returns (i, j, e_i_bot,
        e_i_top, e_j_bot, e_j_top) with i, j the two added directions."""
        gamma, alpha = face
        i, j = sorted(self._added(gamma, alpha), key=self._dirkey)
        gi = self._join(gamma, i)
        gj = self._join(gamma, j)
        return (i, j,
                self.edges[(gamma, gi)], self.edges[(gj, alpha)],
                self.edges[(gamma, gj)], self.edges[(gi, alpha)])

    def _added(self, lo, hi):
        from .hypercube import TwoTypedVertex, elems_of

        if isinstance(lo, frozenset):
            return tuple(hi - lo)
        assert isinstance(lo, TwoTypedVertex)
        out = [d for d in elems_of(hi.plain & ~lo.plain)]
        out += [-d for d in elems_of(hi.primed & ~lo.primed)]
        return tuple(out)

    @staticmethod
    def _dirkey(d):
        return (abs(d), 0 if d > 0 else 1)

    def _join(self, v, d):
        from .hypercube import TwoTypedVertex

        if isinstance(v, frozenset):
            return v | {d}
        if d > 0:
            return TwoTypedVertex(v.plain | (1 << (d - 1)), v.primed, v.n)
        return TwoTypedVertex(v.plain, v.primed | (1 << (-d - 1)), v.n)

    # -- re-indexing operations ---------------------------------------------

    def transpose(self, tau: dict) -> "NFoldPresentation":
        """tau-transposed presentation (P(N) keys): vertex alpha carries the
        data of tau(alpha)."""
        inv_tau = {w: k for k, w in tau.items()}

        def back(v):
            return frozenset(inv_tau[x] for x in v)

        def fwd(v):
            return frozenset(tau[e] for e in v)

        schemas = {v: self.schemas[fwd(v)] for v in self.vertices}
        edges = {}
        for (lo, hi), e in self.edges.items():
            nlo, nhi = back(lo), back(hi)
            edges[(nlo, nhi)] = replace(e, lo=nlo, hi=nhi,
                                        direction=next(iter(nhi - nlo)))
        faces = tuple((back(lo), back(hi)) for lo, hi in self.faces)
        quads = {(back(lo), back(hi)): q for (lo, hi), q in self.quad_params.items()}
        return NFoldPresentation(f"{self.name}^tau", self.ring, self.directions,
                                 self.vertices, schemas, edges, faces, quads)

    def gamma_opposite(self, gamma) -> "NFoldPresentation":
        """Reverse source/target and composition order in the directions of gamma."""
        gamma = frozenset(gamma)
        edges = {}
        for key, e in self.edges.items():
            if e.direction in gamma:
                attach_generic_params(e)
                swap = {LEFT: RIGHT, RIGHT: LEFT}
                new_compose = _retag_inputs(e.compose, swap)
                pair_param = None
                pair_section = None
                if e.pair_param is not None:
                    pair_param = _retag_outputs(e.pair_param, swap)
                if e.pair_section is not None:
                    pair_section = _retag_inputs(e.pair_section, swap)
                triple = None
                if e.triple_param is not None:
                    triple = _retag_outputs(e.triple_param, {LEFT: "c", "c": LEFT})
                edges[key] = replace(e, source=e.target, target=e.source,
                                     compose=new_compose, pair_param=pair_param,
                                     pair_section=pair_section, triple_param=triple)
            else:
                edges[key] = e
        quads = {}
        for key, q in self.quad_params.items():
            lo, hi = key
            i, j = sorted(self._added(lo, hi), key=self._dirkey)
            perm = {t: t for t in "abcd"}
            if i in gamma:  # a *_i b reverses: (a b)(c d)
                perm = {k: {"a": "b", "b": "a", "c": "d", "d": "c"}[v]
                        for k, v in perm.items()}
            if j in gamma:  # outer composition reverses: (a c)(b d)
                perm = {k: {"a": "c", "c": "a", "b": "d", "d": "b"}[v]
                        for k, v in perm.items()}
            quads[key] = _retag_outputs(q, perm) if any(k != v for k, v in perm.items()) else q
        return NFoldPresentation(f"{self.name}^opp", self.ring, self.directions,
                                 self.vertices, dict(self.schemas), edges,
                                 self.faces, quads)

    def top_down_projection(self, vertex, gamma) -> PolyMap:
        """Compose edge projections from `vertex` down to the bottom vertex,
        choosing the target at directions in gamma and the source elsewhere."""
        gamma = frozenset(gamma)
        cur = vertex
        moves = sorted(self._added(self._bottom(), vertex), key=self._dirkey,
                       reverse=True)
        m = None
        for d in moves:
            lo = self._drop(cur, d)
            e = self.edges[(lo, cur)]
            step = e.target if d in gamma else e.source
            m = step if m is None else step.compose(m)
            cur = lo
        if m is None:
            m = PolyMap.identity(self.ring, self.schemas[vertex].labels)
        return m

    def _bottom(self):
        from .hypercube import TwoTypedVertex

        v0 = self.vertices[0]
        if isinstance(v0, frozenset):
            return frozenset()
        return TwoTypedVertex(0, 0, v0.n)

    def _drop(self, v, d):
        from .hypercube import TwoTypedVertex

        if isinstance(v, frozenset):
            return v - {d}
        if d > 0:
            return TwoTypedVertex(v.plain & ~(1 << (d - 1)), v.primed, v.n)
        return TwoTypedVertex(v.plain, v.primed & ~(1 << (-d - 1)), v.n)


def _retag_inputs(m: PolyMap, table: dict) -> PolyMap:
    def f(l):
        tg = tag_of(l)
        if tg in table:
            return (table[tg], l[1])
        return l

    return m.rename(f, None)


def _retag_outputs(m: PolyMap, table: dict) -> PolyMap:
    def f(l):
        tg = tag_of(l)
        if tg in table:
            return (table[tg], l[1])
        return l

    return m.rename(None, f)


def subsets_presentation_vertices(n: int) -> tuple:
    """All subsets of {1..n} as frozensets in lexicographic (bitmask) order."""
    out = []
    for b in range(1 << n):
        out.append(frozenset(i + 1 for i in range(n) if b & (1 << i)))
    return tuple(out)


def subset_faces(vertices) -> tuple:
    faces = []
    for lo in vertices:
        for hi in vertices:
            if lo <= hi and len(hi - lo) == 2:
                faces.append((lo, hi))
    return tuple(faces)


def subset_edges(vertices) -> tuple:
    out = []
    for lo in vertices:
        for hi in vertices:
            if lo <= hi and len(hi - lo) == 1:
                out.append((lo, hi))
    return tuple(out)
