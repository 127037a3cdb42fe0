"""Affine modifications A[I/f] and the line-bundle normal form.

``modify_presentation`` computes A[I/f] as the kernel of
ℚ[old, T] -> A_f, T_i -> g_i/f, i.e. the f-saturation of
relations + (f*T_i - g_i).  ``bundle_modify`` builds the explicit
presentation A[x][v]/(a0 + a1*x - f*v) of a modification of the trivial
A¹-bundle together with its two trivializing charts.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .errors import FNotInCenter, UnitIdealCheckFailed
from .ideals import Ideal, ideal_membership, saturate
from .lnd import (
    CoAction,
    Derivation,
    PresentedAlgebra,
    RingMorphism,
    check_equivariant,
    check_well_defined,
)
from .polycore import Polynomial, RingDescriptor
from .verdict import Verdict, all_of, failed, passed


@dataclass(frozen=True)
class ModificationCenter:
    algebra: PresentedAlgebra
    f: Polynomial
    center_generators: tuple[Polynomial, ...]

    def __post_init__(self) -> None:
        A = self.algebra
        object.__setattr__(self, "center_generators", tuple(self.center_generators))
        if A.is_zero(self.f):
            raise FNotInCenter(f"divisor element {self.f} is zero in the algebra")
        I = A.relations + self.center_generators
        if not ideal_membership(self.f, I):
            raise FNotInCenter(f"{self.f} is not in the center ideal {Ideal(A.ring, self.center_generators)}")

    @classmethod
    def make(cls, algebra: PresentedAlgebra, f: str | Polynomial,
             gens: Sequence[str | Polynomial]) -> "ModificationCenter":
        p = algebra.parse
        return cls(algebra, p(f) if isinstance(f, str) else f,
                   tuple(p(g) if isinstance(g, str) else g for g in gens))


@dataclass(frozen=True)
class ModifiedPresentation:
    algebra: PresentedAlgebra
    sigma: RingMorphism           # old algebra -> new algebra (inclusion)
    center: ModificationCenter
    t_names: tuple[str, ...]      # T_i <-> g_i / f
    t_numerators: tuple[Polynomial, ...] = field(default=())


def _default_names(ring: RingDescriptor, k: int) -> list[str]:
    if k == 1:
        return [ring.fresh("T")]
    names = []
    for i in range(1, k + 1):
        names.append(ring.extend(names).fresh(f"T{i}"))
    return names


def modify_presentation(c: ModificationCenter, names: Sequence[str] | None = None
                        ) -> ModifiedPresentation:
    """Presentation of A[I/f]; generators that are scalar multiples of f are skipped."""
    A = c.algebra
    gens = []
    for g in c.center_generators:
        if not g:
            continue
        ratio = g.leading_coeff() / c.f.leading_coeff()
        if g == c.f * ratio:
            continue
        gens.append(g)
    names = list(names) if names is not None else _default_names(A.ring, len(gens))
    if len(names) != len(gens):
        raise ValueError(f"need {len(gens)} names, got {len(names)}")
    R = A.ring.extend(names)
    f = c.f.change_ring(R)
    rels = [r.change_ring(R) for r in A.relation_list]
    rels += [f * R.var(t) - g.change_ring(R) for t, g in zip(names, gens)]
    sat = saturate(Ideal(R, tuple(rels)), f)
    new = PresentedAlgebra(R, sat, (A.name + "'") if A.name else "")
    sigma = RingMorphism(A, new, {v: R.var(v) for v in A.ring.variables})
    return ModifiedPresentation(new, sigma, c, tuple(names), tuple(gens))


# -- localization helpers -----------------------------------------------------

def localize(A: PresentedAlgebra, f: Polynomial, name: str | None = None
             ) -> tuple[PresentedAlgebra, str]:
    """A_f presented by adjoining a variable h with f*h - 1."""
    h = A.ring.fresh(name or _inv_name(f))
    R = A.ring.extend([h])
    rels = [r.change_ring(R) for r in A.relation_list]
    rels.append(f.change_ring(R) * R.var(h) - 1)
    return PresentedAlgebra(R, Ideal(R, tuple(rels)), A.name), h


def _inv_name(f: Polynomial) -> str:
    s = f.support()
    if len(f.terms) == 1 and len(s) == 1:
        return f"{next(iter(s))}_hat"
    return "f_hat"


def verify_localized_iso(sigma: RingMorphism, f: Polynomial,
                         inverse_images: Mapping[str, str | Polynomial]) -> Verdict:
    """σ♯ becomes an isomorphism after inverting f, with the given inverse.

    ``inverse_images`` sends target variables to elements of the source
    localized at f; the inverse of f is available under the name reported
    by :func:`localize` (``<var>_hat`` for a variable, else ``f_hat``).
    """
    src_f, hs = localize(sigma.source, f)
    sf = sigma(f)
    tgt_f, ht = localize(sigma.target, sf)
    fwd_imgs = {v: p.change_ring(tgt_f.ring) for v, p in sigma.images.items()}
    fwd_imgs[hs] = tgt_f.var(ht)
    fwd = RingMorphism(src_f, tgt_f, fwd_imgs)
    back_imgs = {v: src_f.parse(p) if isinstance(p, str) else p.change_ring(src_f.ring)
                 for v, p in inverse_images.items()}
    back_imgs[ht] = src_f.var(hs)
    for v in sigma.target.ring.variables:
        back_imgs.setdefault(v, src_f.var(v) if v in src_f.ring.variables else src_f.ring.zero())
    back = RingMorphism(tgt_f, src_f, back_imgs)
    checks = [fwd.check_well_defined(), back.check_well_defined()]
    for v in src_f.ring.variables:
        d = src_f.reduce(back(fwd(src_f.var(v))) - src_f.var(v))
        if d:
            checks.append(failed(f"back∘sigma moves {v} by {d}"))
    for v in tgt_f.ring.variables:
        d = tgt_f.reduce(fwd(back(tgt_f.var(v))) - tgt_f.var(v))
        if d:
            checks.append(failed(f"sigma∘back moves {v} by {d}"))
    v = all_of(checks)
    return v if not v else passed(f"isomorphism after inverting {f}")


def verify_restriction_iso(m: ModifiedPresentation, f: Polynomial | None = None) -> Verdict:
    f = m.center.f if f is None else f
    src_f, hs = localize(m.sigma.source, f)
    hat = src_f.var(hs)
    inv = {t: g.change_ring(src_f.ring) * hat for t, g in zip(m.t_names, m.t_numerators)}
    return verify_localized_iso(m.sigma, f, inv)


def verify_equivariant_modification(m: ModifiedPresentation | RingMorphism,
                                    D_old: Derivation, D_new: Derivation) -> Verdict:
    sigma = m.sigma if isinstance(m, ModifiedPresentation) else m
    return all_of([check_well_defined(D_new), check_equivariant(sigma, D_old, D_new)])


def verify_mutual_iso(phi: RingMorphism, psi: RingMorphism) -> Verdict:
    """phi: A -> B and psi: B -> A well defined and inverse to each other."""
    checks = [phi.check_well_defined(), psi.check_well_defined()]
    A, B = phi.source, phi.target
    for v in A.ring.variables:
        d = A.reduce(psi(phi(A.var(v))) - A.var(v))
        if d:
            checks.append(failed(f"psi∘phi moves {v} by {d}"))
    for v in B.ring.variables:
        d = B.reduce(phi(psi(B.var(v))) - B.var(v))
        if d:
            checks.append(failed(f"phi∘psi moves {v} by {d}"))
    res = all_of(checks)
    return res if not res else passed("mutually inverse isomorphisms")


# -- bundle modification normal form -------------------------------------------

@dataclass(frozen=True)
class BundleModification:
    base: PresentedAlgebra
    f: Polynomial
    a0: Polynomial
    a1: Polynomial
    R: Polynomial
    presentation: PresentedAlgebra      # A[x][v]/(a0 + a1 x - f v)
    chart_a1: PresentedAlgebra          # W'_{a1} = Spec A_{a1}[v]
    chart_f: PresentedAlgebra           # W'_f = Spec A_f[x]
    to_chart_a1: RingMorphism
    to_chart_f: RingMorphism
    transition: RingMorphism            # overlap: chart_f coords -> chart_a1 coords
    transition_inverse: RingMorphism
    removed: Ideal                      # F = V(f, a1) in the base
    x: str
    v: str

    def derivation(self) -> Derivation:
        """Lifted action x -> x + f*tau, v -> v + a1*tau (tau = t/f)."""
        P = self.presentation
        lift = lambda p: p.change_ring(P.ring)
        return Derivation(P, {self.x: lift(self.f), self.v: lift(self.a1)})

    def coaction(self, parameter: str = "tau") -> CoAction:
        P = self.presentation
        tau = P.ring.fresh(parameter)
        Rt = P.ring.extend([tau])
        lift = lambda p: p.change_ring(Rt)
        imgs = {v: Rt.var(v) for v in P.ring.variables}
        imgs[self.x] = Rt.var(self.x) + lift(self.f) * Rt.var(tau)
        imgs[self.v] = Rt.var(self.v) + lift(self.a1) * Rt.var(tau)
        return CoAction(P, tau, imgs)

    def u_relation(self) -> Polynomial:
        """g - f*u with u = v + x^2 R(x), the presentation before the change of variable."""
        P = self.presentation
        x = P.var(self.x)
        g = self.a0.change_ring(P.ring) + self.a1.change_ring(P.ring) * x \
            + x ** 2 * self.f.change_ring(P.ring) * self.R.change_ring(P.ring)
        u = P.var(self.v) + x ** 2 * self.R.change_ring(P.ring)
        return g - self.f.change_ring(P.ring) * u

    def verify_charts(self) -> Verdict:
        checks = [self.to_chart_a1.check_well_defined(), self.to_chart_f.check_well_defined(),
                  verify_mutual_iso(self.transition, self.transition_inverse)]
        # the relation written with u = v + x^2 R agrees with a0 + a1 x - f v
        P = self.presentation
        if P.reduce(self.u_relation()):
            checks.append(failed("g - f*u does not match the presentation"))
        return all_of(checks)


def bundle_modify(A: PresentedAlgebra, f: Polynomial, a0: Polynomial, a1: Polynomial,
                  R: Polynomial | None = None, x: str = "x", v: str = "v") -> BundleModification:
    ring = A.ring
    R = ring.zero() if R is None else R
    unit = A.relations + [f, a0, a1]
    if not unit.is_unit():
        raise UnitIdealCheckFailed(f"({f}, {a0}, {a1}) is not the unit ideal modulo the relations")
    x = ring.fresh(x)
    v = ring.extend([x]).fresh(v)
    P = A.extended([x, v])
    L = lambda p, r: p.change_ring(r)
    P = P.with_relations([L(a0, P.ring) + L(a1, P.ring) * P.var(x) - L(f, P.ring) * P.var(v)])
    # chart W'_{a1}: coordinates (base, v), x = (f v - a0)/a1
    Ca, ha = localize(A.extended([v]), a1.change_ring(ring.extend([v])), "a1_hat")
    Cf, hf = localize(A.extended([x]), f.change_ring(ring.extend([x])), "f_hat")
    Pa, pha = localize(P, L(a1, P.ring), "a1_hat")
    Pf, phf = localize(P, L(f, P.ring), "f_hat")
    to_a = RingMorphism(Pa, Ca, {
        **{w: Ca.var(w) for w in ring.variables},
        v: Ca.var(v), pha: Ca.var(ha),
        x: (L(f, Ca.ring) * Ca.var(v) - L(a0, Ca.ring)) * Ca.var(ha)})
    to_f = RingMorphism(Pf, Cf, {
        **{w: Cf.var(w) for w in ring.variables},
        x: Cf.var(x), phf: Cf.var(hf),
        v: (L(a0, Cf.ring) + L(a1, Cf.ring) * Cf.var(x)) * Cf.var(hf)})
    # overlap rings invert both a1 and f
    Oa, oa = localize(Ca, L(f, Ca.ring), "f_hat")
    Of, of_ = localize(Cf, L(a1, Cf.ring), "a1_hat")
    trans = RingMorphism(Of, Oa, {
        **{w: Oa.var(w) for w in ring.variables},
        hf: Oa.var(oa), of_: Oa.var(ha),
        x: (L(f, Oa.ring) * Oa.var(v) - L(a0, Oa.ring)) * Oa.var(ha)})
    trans_inv = RingMorphism(Oa, Of, {
        **{w: Of.var(w) for w in ring.variables},
        ha: Of.var(of_), oa: Of.var(hf),
        v: (L(a0, Of.ring) + L(a1, Of.ring) * Of.var(x)) * Of.var(hf)})
    removed = A.relations + [f, a1]
    return BundleModification(A, f, a0, a1, R, P, Ca, Cf, to_a, to_f, trans, trans_inv,
                              removed, x, v)
