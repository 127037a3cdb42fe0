"""Synthesis of affine G_a-extensions over S_n from a cocycle and a blow-up tower.

The atlas has three charts:

* ``L``  over the chart of the tower containing E_n ∩ S_n, coordinates (e, c)
  with E_n = {e = 0}, plus a fiber coordinate;
* ``Px`` and ``Py`` over A²_x and A²_y, with slices σ_x, σ_y normalized so
  that σ_y - σ_x is the canonical class of the input cocycle.

On ``L`` one of the base coordinates, g, equals e^k h with h ≡ κ ≠ 0 along
E_n; ``L`` is localized at h when h is not constant.  The pulled-back torsor
is u_0 = g^ℓ₀ σ_g with action g^ℓ₀ ∂_{u_0}; each modification with divisor
E_n and center the zero section replaces u_i by u_{i+1} = u_i / e and lowers
the level by one, until the action is h^ℓ₀ ∂_u and admits a slice.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .affinemod import (BundleModification, bundle_modify, localize, verify_equivariant_modification,
                        verify_mutual_iso)
from .blowup import (OpenSurface, Tower, open_surface, order_of_vanishing,
                     total_transform_multiplicity)
from .cech import (BASE, Cocycle, ExtensionClassification, class_cocycle, classify_extension,
                   reduce_bundle_cocycle, split_coboundary, torsor_datum)
from .errors import CapExceeded, GextError, SynthesisStuck
from .ideals import Ideal, ideal_equality, jacobian_smooth_along, radical_membership
from .lnd import (DEFAULT_CAP, Derivation, PresentedAlgebra, RingMorphism, check_equivariant,
                  find_local_slice)
from .polycore import Polynomial, RingDescriptor, substitute
from .verdict import CheckResult, Verdict, all_of, failed, passed

CHECK_NAMES = ("transitions_equivariant", "local_slices", "restriction_matches_input",
               "fiber_over_o", "smooth_along_fiber")


@dataclass(frozen=True)
class AtlasChart:
    name: str
    algebra: PresentedAlgebra
    derivation: Derivation
    slice_hint: Polynomial | None = None    # candidate s with D(s) = 1, re-verified


@dataclass(frozen=True)
class Transition:
    """Co-morphism from the overlap ring of ``source`` to that of ``target``."""

    source: str
    target: str
    morphism: RingMorphism
    source_derivation: Derivation
    target_derivation: Derivation


@dataclass(frozen=True)
class ModificationStep:
    level_before: int
    level_after: int
    modification: BundleModification
    equivariant: Verdict
    chart_iso: Verdict
    level_from_action: int
    level_from_gluing: int


@dataclass(frozen=True)
class Certification:
    checks: tuple[CheckResult, ...]
    level_trace: tuple[int, ...]

    @property
    def passed(self) -> bool:
        return all(c.ok for c in self.checks)

    def statuses(self) -> dict[str, str]:
        return {c.name: c.status for c in self.checks}

    def to_json(self) -> dict:
        return {"checks": [c.to_json() for c in self.checks], "level_trace": list(self.level_trace)}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, ensure_ascii=False)


@dataclass(frozen=True)
class ExtensionResult:
    cocycle: Cocycle
    classification: ExtensionClassification
    surface: OpenSurface
    charts: Mapping[str, AtlasChart]
    transitions: tuple[Transition, ...]
    steps: tuple[ModificationStep, ...]
    level_trace: tuple[int, ...]
    g_name: str              # base coordinate equal to κ e^k on L
    kappa: Fraction          # value of g / e^k along E_n
    k: int                   # order of g along E_n
    line_coordinate: str     # e
    certification: Certification | None = None

    @property
    def quotient(self) -> OpenSurface:
        return self.surface

    @property
    def tower(self) -> Tower:
        return self.surface.tower

    @property
    def level(self) -> int:
        return self.k * self.classification.l0


def _split_power(p: Polynomial, var: str) -> tuple[int, Polynomial] | None:
    """(k, h) with p = var^k h and h ≡ nonzero constant modulo var, else None."""
    if not p:
        return None
    i = p.ring.index(var)
    k = _min_order(p, var)
    shift = [0] * p.ring.nvars
    shift[i] = -k
    h = p.shift(tuple(shift))
    h0 = substitute(h, {var: p.ring.zero()}, p.ring)
    if not h0.is_constant() or not h0:
        return None
    return k, h


def _min_order(p: Polynomial, var: str) -> int:
    i = p.ring.index(var)
    return min(m[i] for m in p.terms)


def _algebra(ring: RingDescriptor, name: str) -> PresentedAlgebra:
    return PresentedAlgebra(ring, Ideal(ring, ()), name)


def _p_chart(which: str) -> AtlasChart:
    s = f"s{which}"
    ring = RingDescriptor(("x", "y", s), frozenset([which]))
    A = _algebra(ring, f"P{which}")
    return AtlasChart(f"P{which}", A, Derivation(A, {s: ring.one()}))


def _on(D: Derivation, A: PresentedAlgebra) -> Derivation:
    return Derivation(A, {v: p.change_ring(A.ring) for v, p in D.images.items()})


def synthesize_extension(c: Cocycle, tower: Tower, removed_point=None,
                         certify: bool = True) -> ExtensionResult:
    cls = classify_extension(c)
    l0 = cls.l0
    if tower.n == 1 and removed_point is None:
        removed_point = ("U1", (0, 0))      # o_1 = [1:0]
    S = open_surface(tower, removed_point)
    if not S.certificate:
        raise SynthesisStuck(f"open surface not certified: {S.certificate.detail}")
    ch = tower.charts[S.line_chart]
    (e,) = S.line_equation.support()
    X, Y = ch.map_to_base.images["x"], ch.map_to_base.images["y"]

    pick = None
    for name, G, O in (("x", X, Y), ("y", Y, X)):
        kh = _split_power(G, e)
        if kh and (not O or _min_order(O, e) >= kh[0]):
            pick = (name, *kh)
            break
    if pick is None:
        raise SynthesisStuck(f"neither x = {X} nor y = {Y} has the form {e}^k * (unit near E) "
                             f"dividing the other on chart {S.line_chart}")
    g_name, k, h = pick
    m = k * l0
    kappa = substitute(h, {e: h.ring.zero()}, h.ring).constant_coeff()

    base = ch.algebra
    h_inv = None
    if not h.is_constant():
        base, h_inv = localize(base, h, "h_inv")
    weight = (h ** l0).change_ring(base.ring)       # g^ℓ₀ = e^m * weight
    ev = base.var(e)

    def chart(i: int) -> tuple[PresentedAlgebra, Derivation]:
        A = base.extended([f"u{i}"])
        return A, Derivation(A, {f"u{i}": (weight * ev ** (m - i)).change_ring(A.ring)})

    steps = []
    trace = [m]
    W, D = chart(0)
    for i in range(m):
        u_old, u_new = f"u{i}", f"u{i + 1}"
        bm = bundle_modify(base, ev, base.ring.zero(), base.ring.one(), x=u_old, v=u_new)
        P = bm.presentation
        lift = lambda p: p.change_ring(P.ring)
        scale = lift(weight * ev ** (m - i - 1))
        D_mod = Derivation(P, {v: scale * p for v, p in bm.derivation().images.items()})
        sigma = RingMorphism(W, P, {v: P.var(v) for v in W.ring.variables})
        eq = all_of([verify_equivariant_modification(sigma, D, D_mod), bm.verify_charts()])
        W2, D2 = chart(i + 1)
        to_new = RingMorphism(P, W2, {**{v: W2.var(v) for v in base.ring.variables},
                                      u_old: W2.var(e) * W2.var(u_new), u_new: W2.var(u_new)})
        to_pres = RingMorphism(W2, P, {v: P.var(v) for v in W2.ring.variables})
        iso = verify_mutual_iso(to_new, to_pres)
        lvl_action = order_of_vanishing(D2(W2.var(u_new)), W2.var(e), W2.relations)
        # gluing σ_g = μ u_{i+1} h^-ℓ₀ with μ = e^{i+1} / e^m: level = -ord_e(μ)
        R_e = RingDescriptor((e,), frozenset([e]))
        mu = R_e.var(e) ** (i + 1) * R_e.var(e) ** -m
        lvl_gluing = -mu.leading_monomial()[0]
        if lvl_action != lvl_gluing:
            raise SynthesisStuck(f"level mismatch after step {i + 1}: {lvl_action} vs {lvl_gluing}")
        steps.append(ModificationStep(m - i, m - i - 1, bm, eq, iso, lvl_action, lvl_gluing))
        trace.append(lvl_action)
        W, D = W2, D2

    u = f"u{m}"
    hint = W.var(u) * (W.var(h_inv) ** l0 if h_inv else W.ring.one() / kappa ** l0)
    L = AtlasChart("L", W, D, hint)
    Px, Py = _p_chart("x"), _p_chart("y")
    charts = {"L": L, "Px": Px, "Py": Py}

    # Py -> Px on A²_x ∩ A²_y
    R_o = RingDescriptor(("x", "y", "sx"), frozenset(("x", "y")))
    R_oy = RingDescriptor(("x", "y", "sy"), frozenset(("x", "y")))
    Ao, Aoy = _algebra(R_o, "Pxy"), _algebra(R_oy, "Pyx")
    kappa_cls = class_cocycle(cls.canonical_monomials).value
    t_yx = RingMorphism(Aoy, Ao, {"x": R_o.var("x"), "y": R_o.var("y"),
                                  "sy": R_o.var("sx") + kappa_cls.change_ring(R_o)})
    # P_g -> L on L \ E_n; P_g is presented with g_hat so that g^-1 maps to e^-k h^-1
    Pg = Px if g_name == "x" else Py
    s_g = f"s{g_name}"
    R_g = RingDescriptor(("x", "y", s_g, "g_hat"))
    A_g = PresentedAlgebra(R_g, Ideal(R_g, (R_g.var(g_name) * R_g.var("g_hat") - 1,)), f"P{g_name}")
    R_Le = RingDescriptor(W.ring.variables, frozenset([e]))
    A_Le = PresentedAlgebra(R_Le, Ideal(R_Le, tuple(r.change_ring(R_Le) for r in W.relation_list)), "L_e")
    h_recip = R_Le.var(h_inv) if h_inv else R_Le.one() / kappa
    t_gL = RingMorphism(A_g, A_Le, {"x": X.change_ring(R_Le), "y": Y.change_ring(R_Le),
                                    s_g: R_Le.var(u) * h_recip ** l0,
                                    "g_hat": R_Le.var(e) ** -k * h_recip})
    transitions = (
        Transition("Py", "Px", t_yx, _on(Py.derivation, Aoy), _on(Px.derivation, Ao)),
        Transition(Pg.name, "L", t_gL, Derivation(A_g, {s_g: R_g.one()}), _on(L.derivation, A_Le)),
    )
    res = ExtensionResult(c, cls, S, charts, transitions, tuple(steps), tuple(trace),
                          g_name, kappa, k, e)
    if certify:
        from dataclasses import replace
        res = replace(res, certification=certify_extension(res, c))
    return res


# -- certification ---------------------------------------------------------------

def _check_transitions(e: ExtensionResult) -> Verdict:
    for t in e.transitions:
        try:
            v = all_of([t.morphism.check_well_defined(),
                        check_equivariant(t.morphism, t.source_derivation, t.target_derivation)])
        except GextError as exc:
            v = failed(str(exc))
        if not v:
            return failed(f"transition {t.source} -> {t.target}: {v.detail}")
    steps = [s for s in e.steps if not (s.equivariant and s.chart_iso)]
    if steps:
        s = steps[0]
        return failed(f"modification step {s.level_before} -> {s.level_after}: "
                      f"{(s.equivariant if not s.equivariant else s.chart_iso).detail}")
    pairs = ", ".join(f"{t.source}->{t.target}" for t in e.transitions)
    return passed(f"equivariant transitions {pairs} and {len(e.steps)} equivariant modifications")


def _check_slices(e: ExtensionResult) -> Verdict:
    found = []
    for name, ch in e.charts.items():
        s = ch.slice_hint
        if s is None or not ch.algebra.is_zero(ch.derivation(s) - 1):
            s = find_local_slice(ch.derivation, degree_cap=1)
        if not s:
            return failed(f"no local slice on chart {name}")
        found.append(f"{name}: {s}")
    return passed("; ".join(found))


def _check_restriction(e: ExtensionResult, original: Cocycle) -> Verdict:
    t_yx = next(t for t in e.transitions if (t.source, t.target) == ("Py", "Px"))
    R = t_yx.morphism.target.ring
    glued = t_yx.morphism(t_yx.morphism.source.var("sy")) - R.var("sx")
    if "sx" in glued.support():
        return failed(f"Py -> Px is not a translation: {glued}")
    kappa_A = substitute(glued, {"x": BASE.var("x"), "y": BASE.var("y"), "sx": BASE.zero()}, BASE)
    delta = original.value - kappa_A
    split = split_coboundary(delta)
    if split is None:
        return failed(f"difference cocycle {delta} is not a coboundary")
    l0 = e.classification.l0
    try:
        gdiff = torsor_datum(original, l0).gluing - torsor_datum(Cocycle(kappa_A), l0).gluing
        w = reduce_bundle_cocycle(gdiff, torsor_datum(original, l0))
    except GextError as exc:
        return failed(f"bundle-level difference did not reduce: {exc}")
    ax, ay = split
    return passed(f"c - (sy - sx) = ({ay}) - ({ax}); level-{l0} gluing difference reduces "
                  f"with witness b0 = {w.b0}, b_inf = {w.binf}")


def fiber_over_origin(e: ExtensionResult) -> tuple[Ideal, Verdict, int | None]:
    L = e.charts["L"].algebra
    tower = e.tower
    ch = tower.charts[e.surface.line_chart]
    X = ch.map_to_base.images["x"].change_ring(L.ring)
    Y = ch.map_to_base.images["y"].change_ring(L.ring)
    I = L.relations + [X, Y]
    ev = L.var(e.line_coordinate)
    if not radical_membership(ev, I) or not (L.relations + [ev]).contains(X) \
            or not (L.relations + [ev]).contains(Y):
        return I, failed(f"fiber ideal {I} is not supported on {ev} = 0"), None
    mult = 1
    while not I.contains(ev ** mult):
        mult += 1
        if mult > DEFAULT_CAP:
            raise CapExceeded(f"{ev}^{DEFAULT_CAP} is not in the fiber ideal", e.line_coordinate)
    if not ideal_equality(I, L.relations + [ev ** mult]):
        return I, failed(f"fiber ideal {I} is not principal modulo the chart relations"), None
    others = [v for v in L.ring.variables if v not in (e.line_coordinate, "h_inv")]
    for name in ("Px", "Py"):
        A = e.charts[name].algebra
        if not Ideal(A.ring, (A.var("x"), A.var("y"))).is_unit():
            return I, failed(f"chart {name} meets the fiber over o"), mult
    return I, passed(f"fiber = ({ev}^{mult}) with reduced support Spec Q[{', '.join(others)}]; "
                     f"multiplicity {mult}"), mult


def certify_extension(e: ExtensionResult, original: Cocycle) -> Certification:
    checks = []

    def run(name, fn):
        try:
            v = fn()
        except CapExceeded as exc:
            checks.append(CheckResult(name, "inconclusive", str(exc)))
            return
        except GextError as exc:
            v = failed(f"{type(exc).__name__}: {exc}")
        checks.append(CheckResult.from_verdict(name, v))

    run("transitions_equivariant", lambda: _check_transitions(e))
    run("local_slices", lambda: _check_slices(e))
    run("restriction_matches_input", lambda: _check_restriction(e, original))

    def fiber():
        _, v, mult = fiber_over_origin(e)
        if v:
            expected = total_transform_multiplicity(e.tower)[e.surface.kept_exceptional]
            if mult != expected:
                return failed(f"multiplicity {mult} differs from the tower value {expected}")
        return v
    run("fiber_over_o", fiber)

    def smooth():
        L = e.charts["L"].algebra
        I, _, _ = fiber_over_origin(e)
        r = jacobian_smooth_along(L, I, len(L.relation_list))
        return passed(f"Jacobian criterion holds along the fiber ({r.minors_used} minors)") if r \
            else failed(f"singular along the fiber: {r.witness}")
    run("smooth_along_fiber", smooth)
    return Certification(tuple(checks), e.level_trace)
