"""Exact sparse multivariate polynomials and polynomial maps.

A Poly is a map from exponent vectors to nonzero ring coefficients.  A PolyMap
bundles several components over a common labelled variable list; all structure
maps, laws and difference quotients in the package are PolyMaps.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Iterable, Mapping, Sequence

from .rings import Ring, RingError

Label = Any  # hashable; str for parsed maps, CoordLabel for constructions


class PolyError(ValueError):
    pass


class ExactDivisionError(PolyError):
    """Division left a remainder; for slope computations this is a hard bug."""


class Poly:
    """Sparse polynomial: {exponent tuple: coefficient}, zero coeffs never stored."""

    __slots__ = ("ring", "arity", "terms", "_compiled")

    def __init__(self, ring: Ring, arity: int, terms: dict | None = None):
        self.ring = ring
        self.arity = arity
        self.terms = {}
        self._compiled = None
        if terms:
            for exps, c in terms.items():
                if len(exps) != arity:
                    raise PolyError(f"exponent vector {exps} has wrong length")
                if not ring.is_zero(c):
                    self.terms[tuple(exps)] = c

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, ring: Ring, arity: int) -> "Poly":
        return cls(ring, arity)

    @classmethod
    def const(cls, ring: Ring, arity: int, c) -> "Poly":
        return cls(ring, arity, {(0,) * arity: c})

    @classmethod
    def var(cls, ring: Ring, arity: int, i: int) -> "Poly":
        e = [0] * arity
        e[i] = 1
        return cls(ring, arity, {tuple(e): ring.one()})

    # -- basic algebra -----------------------------------------------------

    def __add__(self, other: "Poly") -> "Poly":
        self._compat(other)
        terms = dict(self.terms)
        r = self.ring
        for e, c in other.terms.items():
            s = r.add(terms.get(e, r.zero()), c)
            if r.is_zero(s):
                terms.pop(e, None)
            else:
                terms[e] = s
        out = Poly(r, self.arity)
        out.terms = terms
        return out

    def __neg__(self) -> "Poly":
        out = Poly(self.ring, self.arity)
        out.terms = {e: self.ring.neg(c) for e, c in self.terms.items()}
        return out

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        self._compat(other)
        r = self.ring
        terms: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                p = r.mul(c1, c2)
                s = r.add(terms.get(e, r.zero()), p)
                if r.is_zero(s):
                    terms.pop(e, None)
                else:
                    terms[e] = s
        out = Poly(r, self.arity)
        out.terms = terms
        return out

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise PolyError("negative power of a polynomial")
        result = Poly.const(self.ring, self.arity, self.ring.one())
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def scale(self, c) -> "Poly":
        r = self.ring
        if r.is_zero(c):
            return Poly.zero(r, self.arity)
        out = Poly(r, self.arity)
        out.terms = {e: r.mul(c, v) for e, v in self.terms.items()}
        return out

    def _compat(self, other: "Poly") -> None:
        if self.ring != other.ring or self.arity != other.arity:
            raise PolyError("polynomials over different rings or arities")

    # -- queries -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Total degree over all variables; degree(0) = 0 by convention."""
        if not self.terms:
            return 0
        return max(sum(e) for e in self.terms)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Poly)
            and self.ring == other.ring
            and self.arity == other.arity
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.arity, frozenset(self.terms.items())))

    # -- evaluation and substitution ----------------------------------------

    def eval(self, values: Sequence) -> Any:
        r = self.ring
        if self._compiled is None:
            maxe = [0] * self.arity
            for e in self.terms:
                for i, k in enumerate(e):
                    if k > maxe[i]:
                        maxe[i] = k
            compiled = tuple(
                (c, tuple((i, k) for i, k in enumerate(e) if k))
                for e, c in self.terms.items())
            self._compiled = (maxe, compiled)
        maxe, compiled = self._compiled
        powers = []
        for i in range(self.arity):
            row = [r.one()]
            for _ in range(maxe[i]):
                row.append(r.mul(row[-1], values[i]))
            powers.append(row)
        acc = r.zero()
        for c, factors in compiled:
            m = c
            for i, k in factors:
                m = r.mul(m, powers[i][k])
            acc = r.add(acc, m)
        return acc

    def subst(self, images: Sequence["Poly"], arity: int) -> "Poly":
        """Substitute images[i] (all over a common new variable list) for x_i."""
        r = self.ring
        if len(images) != self.arity:
            raise PolyError("substitution image count mismatch")
        cache: list[list[Poly]] = [[Poly.const(r, arity, r.one())] for _ in range(self.arity)]
        acc = Poly.zero(r, arity)
        for e, c in self.terms.items():
            m = Poly.const(r, arity, c)
            for i, k in enumerate(e):
                if not k:
                    continue
                row = cache[i]
                while len(row) <= k:
                    row.append(row[-1] * images[i])
                m = m * row[k]
            acc = acc + m
        return acc

    def divide_by_var(self, i: int, allow_remainder: bool = False) -> "Poly":
        """Exact division by x_i: every monomial must carry x_i."""
        terms = {}
        for e, c in self.terms.items():
            if e[i] == 0:
                if allow_remainder:
                    continue
                raise ExactDivisionError(
                    f"monomial {e} not divisible by variable {i}; "
                    "slope division must be exact"
                )
            e2 = list(e)
            e2[i] -= 1
            terms[tuple(e2)] = c
        out = Poly(self.ring, self.arity)
        out.terms = terms
        return out

    def drop_vars(self, keep: Sequence[int]) -> "Poly":
        """Restrict to a sub-variable list; dropped variables must not occur."""
        pos = {old: new for new, old in enumerate(keep)}
        terms = {}
        for e, c in self.terms.items():
            ne = [0] * len(keep)
            for i, k in enumerate(e):
                if k == 0:
                    continue
                if i not in pos:
                    raise PolyError(f"variable {i} occurs but is being dropped")
                ne[pos[i]] = k
            terms[tuple(ne)] = c
        out = Poly(self.ring, len(keep))
        out.terms = terms
        return out

    def used_vars(self) -> set[int]:
        used = set()
        for e in self.terms:
            for i, k in enumerate(e):
                if k:
                    used.add(i)
        return used

    # -- printing ------------------------------------------------------------

    def fmt(self, names: Sequence[str], order: Sequence[int] | None = None) -> str:
        """Render with terms sorted by (total degree, reverse-lex exponents).

        `order` optionally reorders the variables inside each monomial.
        """
        if not self.terms:
            return "0"
        r = self.ring
        var_order = list(order) if order is not None else list(range(self.arity))

        def key(item):
            e, _ = item
            return (sum(e), tuple(-e[i] for i in var_order))

        parts = []
        for e, c in sorted(self.terms.items(), key=key):
            factors = []
            for i in var_order:
                k = e[i]
                if k == 1:
                    factors.append(names[i])
                elif k > 1:
                    factors.append(f"{names[i]}^{k}")
            cs = r.fmt(c)
            if not factors:
                body = cs
            elif cs == "1":
                body = "*".join(factors)
            elif cs == "-1":
                body = "-" + "*".join(factors)
            else:
                body = "*".join([cs] + factors)
            parts.append(body)
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out


class PolyRing(Ring):
    """Polynomials over a base ring as a coefficient ring (for symbolic checks)."""

    kind = "polynomial-ring"

    def __init__(self, base: Ring, arity: int):
        self.base = base
        self.arity = arity

    def zero(self):
        return Poly.zero(self.base, self.arity)

    def one(self):
        return Poly.const(self.base, self.arity, self.base.one())

    def from_int(self, k):
        return Poly.const(self.base, self.arity, self.base.from_int(k))

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def is_zero(self, a):
        return a.is_zero()

    def is_unit(self, a):
        return len(a.terms) == 1 and set(a.terms) == {(0,) * self.arity}

    def inv(self, a):
        if not self.is_unit(a):
            raise RingError("only nonzero constants are units in a polynomial ring")
        c = a.terms[(0,) * self.arity]
        return Poly.const(self.base, self.arity, self.base.inv(c))

    def __eq__(self, other):
        return (
            isinstance(other, PolyRing)
            and other.base == self.base
            and other.arity == self.arity
        )

    def __hash__(self):
        return hash((self.kind, self.base, self.arity))


@dataclass
class PolyMap:
    """Polynomial map between labelled coordinate spaces (exact, immutable)."""

    ring: Ring
    in_labels: tuple
    comps: tuple
    out_labels: tuple | None = None

    def __post_init__(self):
        self.in_labels = tuple(self.in_labels)
        self.comps = tuple(self.comps)
        if self.out_labels is not None:
            self.out_labels = tuple(self.out_labels)
            if len(self.out_labels) != len(self.comps):
                raise PolyError("out_labels / components length mismatch")
        if len(set(self.in_labels)) != len(self.in_labels):
            raise PolyError(f"duplicate input labels: {self.in_labels}")
        for c in self.comps:
            if c.arity != len(self.in_labels):
                raise PolyError("component arity does not match input labels")

    # -- constructors ------------------------------------------------------

    @classmethod
    def identity(cls, ring: Ring, labels: Iterable[Label]) -> "PolyMap":
        labels = tuple(labels)
        n = len(labels)
        return cls(ring, labels, tuple(Poly.var(ring, n, i) for i in range(n)), labels)

    @classmethod
    def projection(cls, ring: Ring, in_labels, keep) -> "PolyMap":
        in_labels = tuple(in_labels)
        keep = tuple(keep)
        idx = {l: i for i, l in enumerate(in_labels)}
        n = len(in_labels)
        comps = tuple(Poly.var(ring, n, idx[l]) for l in keep)
        return cls(ring, in_labels, comps, keep)

    @classmethod
    def from_label_exprs(cls, ring: Ring, in_labels, exprs: Mapping[Label, Poly]) -> "PolyMap":
        out_labels = tuple(exprs.keys())
        return cls(ring, tuple(in_labels), tuple(exprs[l] for l in out_labels), out_labels)

    # -- core operations -----------------------------------------------------

    @property
    def in_arity(self) -> int:
        return len(self.in_labels)

    @property
    def out_arity(self) -> int:
        return len(self.comps)

    def var(self, label: Label) -> Poly:
        return Poly.var(self.ring, self.in_arity, self.in_labels.index(label))

    def eval(self, values: Sequence) -> list:
        if len(values) != self.in_arity:
            raise PolyError(f"expected {self.in_arity} values, got {len(values)}")
        return [c.eval(values) for c in self.comps]

    def eval_labeled(self, values: Mapping[Label, Any]) -> dict:
        vals = [values[l] for l in self.in_labels]
        if self.out_labels is None:
            raise PolyError("map has no output labels")
        return dict(zip(self.out_labels, self.eval(vals)))

    def subst(self, assign: Mapping[Label, Poly], new_in_labels) -> "PolyMap":
        """Substitute a polynomial (over new_in_labels) for every input label."""
        new_in_labels = tuple(new_in_labels)
        images = []
        for l in self.in_labels:
            if l not in assign:
                raise PolyError(f"no substitution image for input {l}")
            images.append(assign[l])
        n = len(new_in_labels)
        comps = tuple(c.subst(images, n) for c in self.comps)
        return PolyMap(self.ring, new_in_labels, comps, self.out_labels)

    def compose(self, g: "PolyMap") -> "PolyMap":
        """self after g; g's outputs feed self's inputs, matched by label."""
        if g.out_labels is None:
            if g.out_arity != self.in_arity:
                raise PolyError("composition arity mismatch")
            assign = dict(zip(self.in_labels, g.comps))
        else:
            have = dict(zip(g.out_labels, g.comps))
            missing = [l for l in self.in_labels if l not in have]
            if missing:
                raise PolyError(f"composition missing outputs for {missing}")
            assign = {l: have[l] for l in self.in_labels}
        return PolyMap(self.ring, g.in_labels, tuple(
            c.subst([assign[l] for l in self.in_labels], g.in_arity) for c in self.comps
        ), self.out_labels)

    def reorder_inputs(self, new_order) -> "PolyMap":
        new_order = tuple(new_order)
        if set(new_order) != set(self.in_labels):
            raise PolyError("reorder must permute the existing labels")
        assign = {l: Poly.var(self.ring, len(new_order), new_order.index(l))
                  for l in self.in_labels}
        return self.subst(assign, new_order)

    def extend_inputs(self, bigger) -> "PolyMap":
        """View over a larger domain containing all current labels."""
        bigger = tuple(bigger)
        assign = {l: Poly.var(self.ring, len(bigger), bigger.index(l))
                  for l in self.in_labels}
        return self.subst(assign, bigger)

    def restrict_outputs(self, keep) -> "PolyMap":
        keep = tuple(keep)
        pos = {l: i for i, l in enumerate(self.out_labels)}
        return PolyMap(self.ring, self.in_labels,
                       tuple(self.comps[pos[l]] for l in keep), keep)

    def component(self, label: Label) -> Poly:
        return self.comps[self.out_labels.index(label)]

    def rename(self, in_map: Callable[[Label], Label] | None = None,
               out_map: Callable[[Label], Label] | None = None) -> "PolyMap":
        ins = tuple(in_map(l) for l in self.in_labels) if in_map else self.in_labels
        outs = None
        if self.out_labels is not None:
            outs = tuple(out_map(l) for l in self.out_labels) if out_map else self.out_labels
        return PolyMap(self.ring, ins, self.comps, outs)

    def stack(self, other: "PolyMap") -> "PolyMap":
        """Juxtapose outputs of two maps over the same input labels."""
        if other.in_labels != self.in_labels:
            other = other.extend_inputs(self.in_labels) \
                if set(other.in_labels) <= set(self.in_labels) else other
        if other.in_labels != self.in_labels:
            raise PolyError("stack requires a common domain")
        return PolyMap(self.ring, self.in_labels, self.comps + other.comps,
                       None if self.out_labels is None or other.out_labels is None
                       else self.out_labels + other.out_labels)

    def add(self, other: "PolyMap") -> "PolyMap":
        if other.in_labels != self.in_labels:
            other = other.reorder_inputs(self.in_labels)
        if self.out_arity != other.out_arity:
            raise PolyError("sum of maps needs equal output arity")
        return PolyMap(self.ring, self.in_labels,
                       tuple(a + b for a, b in zip(self.comps, other.comps)),
                       self.out_labels)

    def scale(self, c) -> "PolyMap":
        return PolyMap(self.ring, self.in_labels,
                       tuple(p.scale(c) for p in self.comps), self.out_labels)

    def degree(self) -> int:
        return max((c.degree() for c in self.comps), default=0)

    def equals(self, other: "PolyMap") -> bool:
        """Symbolic equality: same in/out label sets, equal components."""
        if set(self.in_labels) != set(other.in_labels):
            return False
        aligned = other.reorder_inputs(self.in_labels)
        if self.out_labels is not None and aligned.out_labels is not None:
            if set(self.out_labels) != set(aligned.out_labels):
                return False
            return all(self.component(l) == aligned.component(l) for l in self.out_labels)
        return self.comps == aligned.comps

    def fmt(self, labeler: Callable[[Label], str] | None = None,
            monomial_order: Callable[[Label], Any] | None = None) -> str:
        labeler = labeler or _default_labeler
        names = [labeler(l) for l in self.in_labels]
        order = None
        if monomial_order is not None:
            order = sorted(range(self.in_arity), key=lambda i: monomial_order(self.in_labels[i]))
        bodies = [c.fmt(names, order) for c in self.comps]
        return "(" + ", ".join(bodies) + ")"


def _default_labeler(l: Label) -> str:
    if isinstance(l, str):
        return l
    disp = getattr(l, "display", None)
    if callable(disp):
        return disp()
    if isinstance(l, tuple) and len(l) == 2:
        return f"{l[0]}.{_default_labeler(l[1])}"
    return str(l)
