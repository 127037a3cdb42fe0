"""Derivations on presented algebras and the G_a-actions they generate.

A :class:`Derivation` is determined by the images of the ring variables and
extended by the Leibniz rule.  Local nilpotency is certified generator by
generator, which suffices for a finitely generated algebra.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Iterable, Mapping

from .errors import CapExceeded, NotCertifiedNilpotent, ZeroDenominator
from .ideals import Ideal, groebner, jacobian_smooth_along, normal_form
from .polycore import (
    Polynomial,
    RingDescriptor,
    iter_monomials,
    partial_derivative,
    substitute,
)
from .verdict import Verdict, failed, passed

DEFAULT_CAP = 64


@dataclass(frozen=True)
class PresentedAlgebra:
    """ring / relations, e.g. ``PresentedAlgebra.make("x y u v", ["x*v - y*u - 1"])``."""

    ring: RingDescriptor
    relations: Ideal
    name: str = ""

    @classmethod
    def make(cls, variables: str | Iterable[str], relations: Iterable[str | Polynomial] = (),
             inverted: str | Iterable[str] = (), name: str = "") -> "PresentedAlgebra":
        ring = RingDescriptor.make(variables, inverted)
        gens = tuple(ring.parse(r) if isinstance(r, str) else r for r in relations)
        return cls(ring, Ideal(ring, gens), name)

    @property
    def cached_gb(self):
        return groebner(self.relations)

    def parse(self, text: str) -> Polynomial:
        return self.ring.parse(text)

    def var(self, name: str) -> Polynomial:
        return self.ring.var(name)

    def reduce(self, f: Polynomial) -> Polynomial:
        return normal_form(f, self.cached_gb)

    def is_zero(self, f: Polynomial) -> bool:
        return not self.reduce(f)

    def equal(self, f: Polynomial, g: Polynomial) -> bool:
        return self.is_zero(f - g)

    def is_empty(self) -> bool:
        return self.cached_gb.is_unit()

    def with_relations(self, more: Iterable[Polynomial | str], name: str = "") -> "PresentedAlgebra":
        extra = [self.ring.parse(r) if isinstance(r, str) else r for r in more]
        return PresentedAlgebra(self.ring, self.relations + extra, name or self.name)

    def extended(self, names: Iterable[str]) -> "PresentedAlgebra":
        """Same relations in the ring with extra free variables."""
        ring = self.ring.extend(names)
        gens = tuple(g.change_ring(ring) for g in self.relations.generators)
        return PresentedAlgebra(ring, Ideal(ring, gens), self.name)

    @property
    def relation_list(self) -> list[Polynomial]:
        return [g for g in self.relations.generators if g]

    def smooth_along(self, F: Ideal, codim: int):
        return jacobian_smooth_along(self, F, codim)


@dataclass(frozen=True)
class Derivation:
    algebra: PresentedAlgebra
    images: Mapping[str, Polynomial] = field(default_factory=dict)

    @classmethod
    def make(cls, algebra: PresentedAlgebra, images: Mapping[str, str | Polynomial]) -> "Derivation":
        imgs = {v: algebra.parse(p) if isinstance(p, str) else p for v, p in images.items()}
        for v in imgs:
            algebra.ring.index(v)
        return cls(algebra, imgs)

    def image(self, v: str) -> Polynomial:
        return self.images.get(v, self.algebra.ring.zero())

    def __call__(self, f: Polynomial) -> Polynomial:
        out = self.algebra.ring.zero()
        for v in f.support():
            img = self.images.get(v)
            if img:
                out = out + partial_derivative(f, v) * img
        return out

    def power(self, f: Polynomial, k: int) -> Polynomial:
        for _ in range(k):
            f = self(f)
        return f

    def __str__(self) -> str:
        parts = [f"({self.images[v]})*d/d{v}" for v in self.algebra.ring.variables
                 if self.images.get(v)]
        return " + ".join(parts) or "0"


@dataclass(frozen=True)
class RingMorphism:
    """Co-morphism source -> target given by images of source variables."""

    source: PresentedAlgebra
    target: PresentedAlgebra
    images: Mapping[str, Polynomial]

    @classmethod
    def make(cls, source: PresentedAlgebra, target: PresentedAlgebra,
             images: Mapping[str, str | Polynomial]) -> "RingMorphism":
        imgs = {v: target.parse(p) if isinstance(p, str) else p for v, p in images.items()}
        return cls(source, target, imgs)

    def __call__(self, f: Polynomial) -> Polynomial:
        return substitute(f, self.images, self.target.ring)

    def check_well_defined(self) -> Verdict:
        for g in self.source.relation_list:
            r = self.target.reduce(self(g))
            if r:
                return failed(f"relation {g} maps to {r} outside the target relations")
        return passed("all source relations map into the target relations")

    def compose(self, other: "RingMorphism") -> "RingMorphism":
        """self ∘ other (apply other first, then self)."""
        return RingMorphism(other.source, self.target,
                            {v: self(other.images.get(v, other.target.var(v)))
                             for v in other.source.ring.variables})


@dataclass(frozen=True)
class CoAction:
    algebra: PresentedAlgebra
    parameter: str
    images: Mapping[str, Polynomial]  # polynomials in ring ∪ {parameter}

    @property
    def ext_ring(self) -> RingDescriptor:
        return self.algebra.ring.extend([self.parameter])

    def __call__(self, f: Polynomial) -> Polynomial:
        return substitute(f, self.images, self.ext_ring)


def check_well_defined(D: Derivation) -> Verdict:
    A = D.algebra
    for g in A.relation_list:
        r = A.reduce(D(g))
        if r:
            return failed(f"D({g}) reduces to {r}, not in the relations")
    return passed("D maps every relation into the relations")


def check_locally_nilpotent(D: Derivation, cap: int = DEFAULT_CAP) -> dict[str, int]:
    """Least n with D^n(x) = 0 modulo relations, for every generator x."""
    A = D.algebra
    out = {}
    for v in A.ring.variables:
        g = A.ring.var(v)
        for n in range(1, cap + 1):
            g = A.reduce(D(g))
            if not g:
                out[v] = n
                break
        else:
            raise CapExceeded(f"D^{cap}({v}) is still nonzero", v)
    return out


def exponential(D: Derivation, indices: Mapping[str, int] | None = None,
                parameter: str = "t") -> CoAction:
    """x ↦ Σ_{k<n_x} D^k(x) t^k / k!."""
    A = D.algebra
    if indices is None:
        try:
            indices = check_locally_nilpotent(D)
        except CapExceeded as e:
            raise NotCertifiedNilpotent(str(e)) from e
    t = A.ring.fresh(parameter)
    R = A.ring.extend([t])
    tv = R.var(t)
    images = {}
    for v in A.ring.variables:
        if v not in indices:
            raise NotCertifiedNilpotent(f"no nilpotency index for {v}")
        term = A.ring.var(v)
        acc = R.zero()
        for k in range(indices[v]):
            acc = acc + term.change_ring(R) * tv ** k * Fraction(1, factorial(k))
            term = A.reduce(D(term))
        if term:
            raise NotCertifiedNilpotent(f"D^{indices[v]}({v}) = {term} is not zero")
        images[v] = acc
    return CoAction(A, t, images)


def check_coaction_axioms(c: CoAction) -> Verdict:
    A = c.algebra
    t = c.parameter
    Rt = c.ext_ring
    At = A.extended([t])
    for v in A.ring.variables:
        at0 = substitute(c.images[v], {t: 0}, Rt).change_ring(A.ring)
        if not A.equal(at0, A.var(v)):
            return failed(f"counit fails: {v} at t=0 is {at0}")
    s = Rt.fresh("s")
    Rts = Rt.extend([s])
    Ats = A.extended([t, s])
    # c_s applied to the coefficients of c_t
    cs = {v: substitute(c.images[v], {t: Rts.var(s)}, Rts) for v in A.ring.variables}
    for v in A.ring.variables:
        lhs = substitute(c.images[v].change_ring(Rts), cs, Rts)
        rhs = substitute(c.images[v], {t: Rts.var(t) + Rts.var(s)}, Rts)
        d = Ats.reduce(lhs - rhs)
        if d:
            return failed(f"co-associativity fails on {v}: difference {d}")
    for g in A.relation_list:
        r = At.reduce(c(g))
        if r:
            return failed(f"relation {g} is not preserved: image reduces to {r}")
    return passed("counit, co-associativity and relations hold")


def check_equivariant(phi: RingMorphism, D_src: Derivation, D_tgt: Derivation) -> Verdict:
    """D_tgt(φ(a)) ≡ φ(D_src(a)) modulo target relations for source generators a."""
    for v in phi.source.ring.variables:
        a = phi.source.var(v)
        lhs = D_tgt(phi(a))
        rhs = phi(D_src(a))
        d = phi.target.reduce(lhs - rhs)
        if d:
            return failed(f"generator {v}: D_tgt(phi({v})) - phi(D_src({v})) = {d}")
    return passed("derivations intertwined on all source generators")


def check_invariant(num: Polynomial, D: Derivation, den: Polynomial | None = None) -> Verdict:
    """Is num/den killed by D?  (den defaults to 1.)"""
    A = D.algebra
    if den is None:
        den = A.ring.one()
    if A.is_zero(den):
        raise ZeroDenominator(f"{den} vanishes in the algebra")
    expr = D(num) * den - num * D(den)
    r = A.reduce(expr)
    if r:
        return failed(f"D(num)*den - num*D(den) reduces to {r}")
    return passed(f"D(num)*den - num*D(den) = {expr} lies in the relations")


class _NotFound:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self) -> str:
        return "NotFound"

    def __bool__(self) -> bool:
        return False


NotFound = _NotFound()


def _slice_basis(ring: RingDescriptor, cap: int) -> list[Polynomial]:
    """Monomials of degree ≤ cap in the variables and inverses of inverted ones."""
    names = list(ring.variables) + [v for v in ring.variables if v in ring.inverted]
    inv_pos = {len(ring.variables) + k: ring.index(v)
               for k, v in enumerate(v for v in ring.variables if v in ring.inverted)}
    seen = set()
    out = []
    for d in range(cap + 1):
        for m in iter_monomials(len(names), d):
            e = list(m[:ring.nvars])
            for j, i in inv_pos.items():
                e[i] -= m[j]
            e = tuple(e)
            if e not in seen:
                seen.add(e)
                out.append(ring.monomial(e))
    return out


def solve_linear(rows: list[dict], rhs: dict, ncols: int) -> list[Fraction] | None:
    """Solve Σ_j x_j * rows[j] = rhs for sparse vectors keyed by monomials.

    ``rows[j]`` is the image of unknown j.  Free unknowns are set to zero and
    pivots are taken left to right, so earlier unknowns are preferred.
    """
    keys = sorted({k for r in rows for k in r} | set(rhs))
    # matrix with one row per key, augmented with rhs
    mat = [[r.get(k, Fraction(0)) for r in rows] + [rhs.get(k, Fraction(0))] for k in keys]
    piv_cols = []
    rix = 0
    for col in range(ncols):
        p = next((i for i in range(rix, len(mat)) if mat[i][col]), None)
        if p is None:
            continue
        mat[rix], mat[p] = mat[p], mat[rix]
        pv = mat[rix][col]
        mat[rix] = [a / pv for a in mat[rix]]
        for i in range(len(mat)):
            if i != rix and mat[i][col]:
                f = mat[i][col]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[rix])]
        piv_cols.append(col)
        rix += 1
    for i in range(rix, len(mat)):
        if mat[i][ncols]:
            return None
    x = [Fraction(0)] * ncols
    for i, col in enumerate(piv_cols):
        x[col] = mat[i][ncols]
    return x


def find_local_slice(D: Derivation, degree_cap: int = 2):
    """s with D(s) = 1 modulo relations, searched among degree ≤ cap, else NotFound."""
    A = D.algebra
    basis = _slice_basis(A.ring, degree_cap)
    images = [A.reduce(D(m)).terms for m in basis]
    target = A.reduce(A.ring.one()).terms
    sol = solve_linear(images, target, len(basis))
    if sol is None:
        return NotFound
    s = A.ring.zero()
    for c, m in zip(sol, basis):
        if c:
            s = s + m * c
    return s


def rectify(D: Derivation, s: Polynomial, f: Polynomial, indices: Mapping[str, int] | None = None
            ) -> Polynomial:
    """exp(tD)(f) evaluated at t = -s; D-invariant whenever D(s) = 1."""
    c = exponential(D, indices)
    R = c.ext_ring
    ft = c(f)
    return substitute(ft, {c.parameter: -s.change_ring(R)}, R).change_ring(D.algebra.ring)
