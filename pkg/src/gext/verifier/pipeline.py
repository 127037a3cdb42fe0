"""Run a case file through the checks its kind calls for."""
from __future__ import annotations

import random
import time
from fractions import Fraction
from typing import Callable

from ..affext import certify_extension, synthesize_extension
from ..affinemod import (ModificationCenter, localize, modify_presentation, verify_localized_iso,
                         verify_mutual_iso)
from ..blowup import (build_tower, check_transition_coherence, dual_graph, open_surface,
                      order_of_vanishing, total_transform_multiplicity, verify_custom_gluing)
from ..cech import (Cocycle, OVERLAP, classify_extension, h1_dimension_P1,
                    homogeneous_torsor, reduce_bundle_cocycle, restrict_to_E, torsor_datum)
from ..errors import CapExceeded, GextError, NotCertifiedNilpotent, ResourceBudgetExceeded
from ..ideals import (DEFAULT_BUDGET, Ideal, eliminate, ideal_equality, ideal_membership,
                      jacobian_smooth_along, radical_membership, reduction_budget)
from ..lnd import (DEFAULT_CAP, Derivation, NotFound, PresentedAlgebra, RingMorphism,
                   check_coaction_axioms, check_equivariant, check_invariant,
                   check_locally_nilpotent, check_well_defined, exponential, find_local_slice)
from ..polycore import RingDescriptor, univariate_squarefree
from ..verdict import CheckResult, Verdict, all_of, failed, passed
from .cases import CaseFile, Report

INCONCLUSIVE = (CapExceeded, ResourceBudgetExceeded, NotCertifiedNilpotent)


class _Runner:
    def __init__(self, report: Report):
        self.report = report

    def __call__(self, name: str, fn: Callable[[], Verdict]) -> Verdict | None:
        try:
            v = fn()
        except INCONCLUSIVE as exc:
            self.report.add(CheckResult(name, "inconclusive", f"{type(exc).__name__}: {exc}"))
            return None
        except (GextError, ValueError, ArithmeticError) as exc:
            v = failed(f"{type(exc).__name__}: {exc}")
        self.report.add(CheckResult.from_verdict(name, v))
        return v


# -- payload helpers ---------------------------------------------------------------

def algebra_from(spec: dict, name: str = "", extra_inverted=()) -> PresentedAlgebra:
    inv = list(spec.get("inverted", ())) + [v for v in extra_inverted]
    return PresentedAlgebra.make(spec["variables"], spec.get("relations", ()), inv, name)


def point_ideal(A: PresentedAlgebra, point: dict, base_images: dict | None = None) -> Ideal:
    """Relations plus the equations of the base point (through base_images if given)."""
    gens = []
    for v, c in point.items():
        img = A.parse(base_images[v]) if base_images else A.var(v)
        gens.append(img - Fraction(c))
    return A.relations + gens


def presents_polynomial_ring(ring: RingDescriptor, gens, free) -> Verdict:
    """Is ring/(gens) ≅ ℚ[free] via the free variables?"""
    others = [v for v in ring.variables if v not in free]
    R = RingDescriptor.make(others + list(free), order="lex")
    J = Ideal(R, tuple(g.change_ring(R) for g in gens))
    if J.is_unit():
        return failed("the ideal is the unit ideal")
    if not eliminate(J, free).is_zero():
        return failed(f"the variables {list(free)} satisfy a relation")
    G = J.groebner()
    for v in others:
        nf = G.reduce(R.var(v))
        if not nf.support() <= set(free):
            return failed(f"{v} is not a polynomial in {list(free)} (normal form {nf})")
    return passed(f"≅ ℚ[{', '.join(free)}]")


def _included(I: Ideal, J: Ideal) -> str | None:
    for g in I.generators:
        if not ideal_membership(g, J):
            return str(g)
    return None


def check_fiber(A: PresentedAlgebra, F: Ideal, spec: dict) -> Verdict:
    """Compare the fiber ideal F with one of the supported expectations."""
    rels = A.relations
    if spec.get("empty"):
        return passed("fiber is empty") if F.is_unit() else failed("fiber is nonempty")
    if F.is_unit():
        return failed("fiber is empty")
    if "reduced" in spec:
        J = rels + [A.parse(g) for g in spec["reduced"]]
        if not ideal_equality(F, J):
            return failed(f"fiber ideal differs from {spec['reduced']}")
        checks = [passed(f"fiber ideal equals {spec['reduced']}")]
        if "free" in spec:
            checks.append(presents_polynomial_ring(A.ring, list(J.generators), spec["free"]))
        return all_of(checks)
    if "radical" in spec:
        rad = [A.parse(g) for g in spec["radical"]]
        J = rels + rad
        bad = _included(F, J)
        if bad:
            return failed(f"{bad} is not in the expected radical")
        for g in rad:
            if not radical_membership(g, F):
                return failed(f"{g} is not nilpotent on the fiber")
        r = rad[-1]
        rest = rels + rad[:-1]
        want = int(spec["multiplicity"])
        mult = None
        for k in range(1, want + 2):
            if ideal_equality(F, rest + [r ** k]):
                mult = k
                break
        if mult is None:
            return failed(f"fiber is not ({r})^k near its support for k ≤ {want + 1}")
        if mult != want:
            return failed(f"multiplicity {mult}, expected {want}")
        checks = [passed(f"fiber = ({r})^{mult} on a reduced support; multiplicity {mult}")]
        if "free" in spec:
            checks.append(presents_polynomial_ring(A.ring, list(J.generators), spec["free"]))
        return all_of(checks)
    if "components" in spec:
        comps = [[A.parse(g) for g in c["ideal"]] for c in spec["components"]]
        checks = []
        for i, c in enumerate(comps):
            bad = _included(F, rels + c)
            if bad:
                return failed(f"component {i} does not lie in the fiber ({bad} ∉ it)")
            if "free" in spec["components"][i]:
                v = presents_polynomial_ring(A.ring, list((rels + c).generators),
                                             spec["components"][i]["free"])
                if not v:
                    return failed(f"component {i}: {v.detail}")
        # product of the components is nilpotent on the fiber
        prods = [A.ring.one()]
        for c in comps:
            prods = [p * g for p in prods for g in c]
        for p in prods:
            if not radical_membership(p, F):
                return failed(f"{p} is not nilpotent on the fiber; components miss a piece")
        for i in range(len(comps)):
            for j in range(i + 1, len(comps)):
                if not (rels + comps[i] + comps[j]).is_unit():
                    return failed(f"components {i} and {j} meet")
        checks.append(passed(f"{len(comps)} disjoint components cover the fiber"))
        if "squarefree" in spec:
            var = spec["squarefree"]
            E = eliminate(F, [var])
            gens = [g for g in E.generators if g]
            if len(gens) != 1:
                return failed(f"fiber does not cut out a single polynomial in {var}")
            uni = gens[0].change_ring(RingDescriptor.make([var]))
            if not univariate_squarefree(uni, var):
                return failed(f"{uni} is not squarefree")
            checks.append(passed(f"{uni} is squarefree"))
        return all_of(checks)
    raise ValueError(f"unsupported fiber expectation {sorted(spec)}")


# -- variety extensions ------------------------------------------------------------

def _variety(case: CaseFile, run: _Runner, cap: int) -> None:
    p = case.payload
    A = algebra_from(p["ring"], case.id)
    D = Derivation.make(A, p["derivation"])
    run("well_defined", lambda: check_well_defined(D))

    indices: dict = {}

    def nilpotent():
        indices.update(check_locally_nilpotent(D, cap))
        bound = p.get("nilpotency_bound")
        worst = max(indices.values())
        if bound is not None and worst > bound:
            return failed(f"index {worst} exceeds {bound}: {indices}")
        return passed(f"indices {indices}")
    nil = run("locally_nilpotent", nilpotent)
    if nil:
        run("coaction_axioms", lambda: check_coaction_axioms(exponential(D, indices)))

    for mem in p.get("memberships", ()):
        f = A.parse(mem["poly"])
        run(f"membership:{mem['label']}",
            lambda f=f: passed(f"{f} ∈ I") if ideal_membership(f, A.relations)
            else failed(f"{f} ∉ I"))

    if "torsor" in p:
        T = algebra_from(p["torsor"]["ring"], "torsor")
        DT = Derivation.make(T, p["torsor"]["derivation"])
        j = RingMorphism.make(A, T, p["embedding"])
        run("embedding_well_defined", j.check_well_defined)
        run("embedding_equivariant", lambda: check_equivariant(j, D, DT))

    base = p.get("base", ("x", "y"))
    comps_for: dict[str, list] = {}
    for fib in p.get("fibers", ()):
        F = point_ideal(A, dict(zip(base, fib["point"])))
        run(f"fiber:{fib['name']}", lambda F=F, fib=fib: check_fiber(A, F, fib["expect"]))
        if "components" in fib["expect"]:
            comps_for[fib["name"]] = fib["expect"]["components"]
        if "smooth_codim" in fib:
            def smooth(F=F, k=fib["smooth_codim"]):
                r = jacobian_smooth_along(A, F, k)
                return passed(f"Jacobian rank {k} along the fiber ({r.minors_used} minors)") if r \
                    else failed(f"singular along the fiber: {r.witness}")
            run(f"smooth:{fib['name']}", smooth)

    for inv in p.get("invariants", ()):
        num = A.parse(inv["num"])
        den = A.parse(inv["den"]) if inv.get("den") else None
        run(f"invariant:{inv['label']}", lambda num=num, den=den: check_invariant(num, D, den))

    for name in p.get("trivial_action_on", ()):
        def trivial(comps=comps_for[name]):
            for i, c in enumerate(comps):
                C = A.relations + [A.parse(g) for g in c["ideal"]]
                for v in A.ring.variables:
                    if not ideal_membership(D.image(v), C):
                        return failed(f"D({v}) = {D.image(v)} is nonzero on component {i}")
            return passed("D vanishes on every component")
        run(f"trivial_action:{name}", trivial)

    if "quotient_tower" in p:
        qt = p["quotient_tower"]

        def quotient_tower():
            t = tower_from(qt["steps"])
            got = t.self_intersections()
            if got != qt["self_intersections"]:
                return failed(f"self-intersections {got}, expected {qt['self_intersections']}")
            mult = total_transform_multiplicity(t)[t.curves[-1].name]
            if mult != qt["multiplicity"]:
                return failed(f"multiplicity {mult} along the last curve, expected {qt['multiplicity']}")
            return passed(f"{got}; multiplicity {mult}")
        run("quotient_tower", quotient_tower)

    if "modification" in p:
        _modification(p["modification"], A, D, run)


def _modification(m: dict, A: PresentedAlgebra, D: Derivation, run: _Runner) -> None:
    """A morphism from a source variety to A that is an isomorphism off a divisor."""
    S = algebra_from(m["source"], "source")
    DS = Derivation.make(S, m["source_derivation"])
    run("source_well_defined", lambda: check_well_defined(DS))
    sigma = RingMorphism.make(S, A, m["morphism"])
    run("morphism_well_defined", sigma.check_well_defined)
    run("morphism_equivariant", lambda: check_equivariant(sigma, DS, D))
    f = S.parse(m["localize_at"])
    run("restriction_iso", lambda: verify_localized_iso(sigma, f, m["inverse"]))
    if "center" in m:
        def center():
            c = ModificationCenter.make(S, m["center"]["f"], m["center"]["generators"])
            mp = modify_presentation(c, m["center"].get("names"))
            phi = RingMorphism.make(mp.algebra, A, m["center"]["to_target"])
            psi = RingMorphism.make(A, mp.algebra, m["center"]["from_target"])
            return verify_mutual_iso(phi, psi)
        run("center_presentation", center)


# -- cocycles ------------------------------------------------------------------------

def _cocycle_of(p: dict) -> Cocycle:
    if "cocycle" in p:
        return Cocycle.parse(p["cocycle"])
    return Cocycle.from_mnp(p["m"], p["n"], p["p"])


def _cocycle(case: CaseFile, run: _Runner, cap: int) -> None:
    p = case.payload
    c = _cocycle_of(p)
    cls = None

    def classify():
        nonlocal cls
        cls = classify_extension(c)
        want = p.get("l0")
        if want is not None and cls.l0 != want:
            return failed(f"ℓ₀ = {cls.l0}, expected {want}")
        return passed(f"ℓ₀ = {cls.l0}, d = {cls.d}")
    run("classification", classify)

    for lv, nonzero in sorted(p.get("restriction", {}).items(), key=lambda kv: int(kv[0])):
        def restr(lv=int(lv), nonzero=nonzero):
            coeffs = restrict_to_E(torsor_datum(c, lv))
            got = any(coeffs)
            if got != nonzero:
                return failed(f"restriction at level {lv} is {coeffs}")
            return passed(f"restriction at level {lv}: {[str(x) for x in coeffs]}")
        run(f"restriction:l={lv}", restr)

    if "h1_dims" in p:
        def h1():
            for s, want in p["h1_dims"].items():
                got = h1_dimension_P1(-int(s))
                if got != want:
                    return failed(f"dim H¹(P¹, O({-int(s)})) = {got}, expected {want}")
            return passed(f"dims {p['h1_dims']}")
        run("h1_P1", h1)

    if {"m", "n", "p"} <= set(p) and p.get("homogeneous", False):
        def hom():
            t = homogeneous_torsor(p["m"], p["n"], p["p"])
            return all_of([check_well_defined(t.derivation),
                           passed(f"torsor of degree {t.d}")])
        run("homogeneous_torsor", hom)

    if "random_reduction" in p:
        rr = p["random_reduction"]

        def reduce_random():
            d = torsor_datum(c, rr["level"])
            rng = random.Random(rr.get("seed", 0))
            lo, hi = rr["z_range"]
            for _ in range(rr["count"]):
                g = OVERLAP.zero()
                for _ in range(rng.randint(1, 4)):
                    exps = (rng.randint(0, 2), rng.randint(lo, hi), rng.randint(0, rr["u_degree"]))
                    g = g + OVERLAP.monomial(exps, rng.randint(-3, 3))
                reduce_bundle_cocycle(g, d, degree_cap=cap)
            return passed(f"{rr['count']} random cocycles reduced with verified witnesses")
        run("random_reduction", reduce_random)


# -- towers ----------------------------------------------------------------------------

def tower_from(spec):
    """Steps as [chart, [a, b]] pairs or {"chart": ..., "point": [a, b]} objects."""
    steps = []
    for s in spec:
        ch, pt = (s["chart"], s["point"]) if isinstance(s, dict) else s
        steps.append((ch, tuple(pt)))
    return build_tower(steps)


def _tower(case: CaseFile, run: _Runner, cap: int) -> None:
    p = case.payload
    holder = {}

    def built():
        holder["t"] = tower_from(p["steps"])
        return passed(f"{holder['t'].n} blow-ups")
    if not run("tower_built", built):
        return
    t = holder["t"]
    if "self_intersections" in p:
        def si():
            got = t.self_intersections()
            return passed(str(got)) if got == p["self_intersections"] else \
                failed(f"self-intersections {got}, expected {p['self_intersections']}")
        run("self_intersections", si)
    if "edges" in p:
        def edges():
            got = sorted(tuple(sorted(e)) for e in t.edges())
            want = sorted(tuple(sorted(e)) for e in p["edges"])
            return passed(f"edges {got}") if got == want else failed(f"edges {got}, expected {want}")
        run("dual_graph_edges", edges)
    run("tree", lambda: passed("dual graph is a tree") if t.is_tree() else failed("not a tree"))
    run("transition_coherence",
        lambda: all_of(check_transition_coherence(t, k) for k in range(1, t.n + 1)))
    if "multiplicity" in p:
        def mult():
            got = total_transform_multiplicity(t)
            return passed(str(got)) if got == p["multiplicity"] else \
                failed(f"multiplicities {got}, expected {p['multiplicity']}")
        run("multiplicity", mult)
    if p.get("open_surface"):
        rp = p.get("removed_point")
        rp = (rp[0], tuple(rp[1])) if rp else None
        run("open_surface", lambda: open_surface(t, rp).certificate)
    run("dot_output", lambda: passed() if dual_graph(t).lstrip().startswith(("graph", "strict"))
        else failed("dual graph output is not a DOT graph"))


# -- custom gluings -----------------------------------------------------------------------

def _gluing(case: CaseFile, run: _Runner, cap: int) -> None:
    p = case.payload
    charts = {k: algebra_from(s, k) for k, s in p["charts"].items()}
    ders = {k: Derivation.make(charts[k], s["derivation"]) for k, s in p["charts"].items()}
    over = {k: algebra_from(s, k, p["overlaps"][k]) for k, s in p["charts"].items()}
    oders = {k: Derivation.make(over[k], s["derivation"]) for k, s in p["charts"].items()}
    tr = p["transition"]
    fwd = RingMorphism.make(over[tr["source"]], over[tr["target"]], tr["images"])
    back = RingMorphism.make(over[tr["target"]], over[tr["source"]], p["inverse"])

    run("gluing_iso", lambda: verify_custom_gluing(fwd, back))
    run("gluing_equivariant", lambda: all_of([
        check_equivariant(fwd, oders[tr["source"]], oders[tr["target"]]),
        check_equivariant(back, oders[tr["target"]], oders[tr["source"]])]))

    def base_ok():
        bs, bt = p["charts"][tr["source"]]["base"], p["charts"][tr["target"]]["base"]
        T = over[tr["target"]]
        for v in bs:
            d = T.reduce(fwd(over[tr["source"]].parse(bs[v])) - T.parse(bt[v]))
            if d:
                return failed(f"the gluing moves the base coordinate {v} by {d}")
        return passed("the gluing commutes with the maps to A²")
    run("base_compatible", base_ok)

    for k in charts:
        def sl(k=k):
            s = find_local_slice(ders[k], p.get("slice_degree", 2))
            return failed("no slice found") if s is NotFound else passed(f"slice {s}")
        run(f"slice:{k}", sl)

    fb = p.get("fiber")
    if fb:
        A = charts[fb["chart"]]
        base = p["charts"][fb["chart"]]["base"]
        F = A.relations + [A.parse(base[v]) for v in base]

        def multiplicity():
            L, _ = localize(A, A.parse(fb["localize"]))
            z = L.parse(fb["uniformizer"])
            orders = [order_of_vanishing(L.parse(base[v]), z, L.relations) for v in base]
            got = min(orders)
            return passed(f"orders {orders}; multiplicity {got}") if got == fb["multiplicity"] \
                else failed(f"multiplicity {got}, expected {fb['multiplicity']}")
        run("fiber_multiplicity", multiplicity)
        if "support" in fb:
            def reduced():
                rad = [A.parse(g) for g in fb["support"]]
                for g in rad:
                    if not radical_membership(g, F):
                        return failed(f"{g} does not vanish on the fiber")
                return presents_polynomial_ring(A.ring, list((A.relations + rad).generators),
                                                fb["free"])
            run("fiber_support", reduced)
        for k in fb.get("avoids", ()):
            B = charts[k]
            bb = p["charts"][k]["base"]
            run(f"fiber_avoids:{k}", lambda B=B, bb=bb: passed("disjoint from the fiber")
                if (B.relations + [B.parse(bb[v]) for v in bb]).is_unit()
                else failed("meets the fiber"))
        if "smooth_codim" in fb:
            def smooth():
                r = jacobian_smooth_along(A, F, fb["smooth_codim"])
                return passed(f"smooth along the fiber ({r.minors_used} minors)") if r \
                    else failed(f"singular along the fiber: {r.witness}")
            run(f"smooth:{fb['chart']}", smooth)

    if "bundle" in p:
        _bundle(p, p["bundle"], over, fwd, run)


def _bundle(p: dict, b: dict, over: dict, fwd: RingMorphism, run: _Runner) -> None:
    """A line-bundle chart pair with a map β into the glued charts."""
    wch = {k: algebra_from(s, k) for k, s in b["charts"].items()}
    wover = {k: algebra_from(s, k, b["overlaps"][k]) for k, s in b["charts"].items()}
    wd = {k: Derivation.make(wch[k], s["derivation"]) for k, s in b["charts"].items()}
    tr = b["transition"]
    wf = RingMorphism.make(wover[tr["source"]], wover[tr["target"]], tr["images"])
    wb = RingMorphism.make(wover[tr["target"]], wover[tr["source"]], b["inverse"])
    run("bundle_gluing_iso", lambda: verify_custom_gluing(wf, wb))
    charts = {k: algebra_from(s, k) for k, s in p["charts"].items()}
    cd = {k: Derivation.make(charts[k], s["derivation"]) for k, s in p["charts"].items()}
    beta = {}
    for wk, spec in b["beta"].items():
        beta[wk] = RingMorphism.make(wch[wk], charts[spec["target"]], spec["images"])
        run(f"beta_equivariant:{wk}", lambda wk=wk, spec=spec: all_of([
            beta[wk].check_well_defined(),
            check_equivariant(beta[wk], wd[wk], cd[spec["target"]])]))

    def compatible():
        src, tgt = tr["source"], tr["target"]
        S, T = over[b["beta"][src]["target"]], over[b["beta"][tgt]["target"]]
        bs = RingMorphism.make(wover[src], S, b["beta"][src]["images"])
        bt = RingMorphism.make(wover[tgt], T, b["beta"][tgt]["images"])
        for v in wover[src].ring.variables:
            d = T.reduce(fwd(bs(wover[src].var(v))) - bt(wf(wover[src].var(v))))
            if d:
                return failed(f"β does not intertwine the gluings at {v} (difference {d})")
        return passed("β intertwines the two gluings")
    run("beta_compatible", compatible)


# -- synthesis --------------------------------------------------------------------------

def _synthesis(case: CaseFile, run: _Runner, cap: int) -> None:
    p = case.payload
    c = _cocycle_of(p)
    rp = p.get("removed_point")
    rp = (rp[0], tuple(rp[1])) if rp else None
    holder = {}

    def synth():
        e = synthesize_extension(c, tower_from(p["tower"]), rp, certify=False)
        holder["e"] = e
        if e.level_trace[-1] != 0:
            return failed(f"level trace {e.level_trace} does not end at 0")
        return passed(f"level trace {e.level_trace}")
    if not run("level_trace", synth):
        return
    cert = certify_extension(holder["e"], c)
    for ch in cert.checks:
        run.report.add(ch)


HANDLERS = {"variety-extension": _variety, "cocycle": _cocycle, "tower": _tower,
            "gluing": _gluing, "synthesis": _synthesis}


def run_case(case: CaseFile, budget: int = DEFAULT_BUDGET, cap: int = DEFAULT_CAP) -> Report:
    """Evaluate every check for the case; budget exhaustion gives 'inconclusive'."""
    report = Report(case.id, expected=dict(case.expected.get("checks", {})), budget=budget,
                    flags=case.flags)
    start = time.perf_counter()
    with reduction_budget(budget):
        HANDLERS[case.kind](case, _Runner(report), cap)
    report.seconds = time.perf_counter() - start
    return report


verify_extension_case = run_case
