"""Towers of point blow-ups over A² = Spec ℚ[x, y].

Every chart of an iterated point blow-up of A² is again an affine plane.
Blowing up the point (p, q) of a chart with coordinates (a, b) creates

* ``U<k>`` with coordinates (s, w_k):  (a, b) = (p + s, q + s*w_k),  E_k = {s = 0}
* ``V<k>`` with coordinates (w, v_k):  (a, b) = (p + w*v_k, q + w),  E_k = {w = 0}

(the first coordinate keeps the old name when the corresponding translation
is zero).  Each exceptional curve stores its local equation in every chart
it meets; self-intersections follow the blow-up ledger rule.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .affinemod import localize, verify_mutual_iso
from .errors import PointNotOnRequiredCurve, RuleCViolated
from .ideals import Ideal, ideal_membership, radical_membership
from .lnd import PresentedAlgebra, RingMorphism
from .polycore import Polynomial, RingDescriptor, substitute
from .verdict import Verdict, all_of, failed, passed

BASE_CHART = "A2"


@dataclass(frozen=True)
class Chart:
    id: str
    algebra: PresentedAlgebra
    map_to_base: RingMorphism          # co-morphism ℚ[x, y] -> chart ring
    parent: str | None = None
    from_parent: RingMorphism | None = None   # co-morphism parent ring -> chart ring

    @property
    def coords(self) -> tuple[str, ...]:
        return self.algebra.ring.variables


@dataclass(frozen=True)
class ExceptionalCurve:
    name: str
    self_intersection: int
    locus: Mapping[str, Polynomial]    # chart id -> local equation


def _base() -> PresentedAlgebra:
    return PresentedAlgebra.make("x y", name="A2")


@dataclass(frozen=True)
class Tower:
    base: PresentedAlgebra = field(default_factory=_base)
    steps: tuple[tuple[str, tuple[Fraction, Fraction]], ...] = ()
    charts: Mapping[str, Chart] = field(default_factory=dict)      # current atlas
    all_charts: Mapping[str, Chart] = field(default_factory=dict)
    curves: tuple[ExceptionalCurve, ...] = ()
    adjacency: frozenset = frozenset()

    @classmethod
    def empty(cls) -> "Tower":
        base = _base()
        ident = RingMorphism(base, base, {v: base.var(v) for v in base.ring.variables})
        c = Chart(BASE_CHART, base, ident)
        return cls(base, (), {BASE_CHART: c}, {BASE_CHART: c}, (), frozenset())

    def curve(self, name: str) -> ExceptionalCurve:
        for c in self.curves:
            if c.name == name:
                return c
        raise KeyError(name)

    @property
    def n(self) -> int:
        return len(self.curves)

    def self_intersections(self) -> dict[str, int]:
        return {c.name: c.self_intersection for c in self.curves}

    def edges(self) -> list[tuple[str, str]]:
        order = {c.name: i for i, c in enumerate(self.curves)}
        out = [tuple(sorted(e, key=order.get)) for e in self.adjacency]
        return sorted(out, key=lambda e: (order[e[0]], order[e[1]]))

    def is_tree(self) -> bool:
        names = [c.name for c in self.curves]
        if not names:
            return True
        if len(self.adjacency) != len(names) - 1:
            return False
        seen, stack = {names[0]}, [names[0]]
        while stack:
            a = stack.pop()
            for e in self.adjacency:
                if a in e:
                    (b,) = e - {a}
                    if b not in seen:
                        seen.add(b)
                        stack.append(b)
        return len(seen) == len(names)


def _strict(h: Polynomial, img: Mapping[str, Polynomial], ring: RingDescriptor, e: str
            ) -> Polynomial:
    """Pull h back and divide out the exceptional coordinate e."""
    g = substitute(h, img, ring)
    i = ring.index(e)
    k = g.monomial_content()[i]
    if k:
        shift = [0] * ring.nvars
        shift[i] = -k
        g = g.shift(tuple(shift))
    return g


def blowup_point(t: Tower, chart: str, point: Sequence) -> Tower:
    if chart not in t.charts:
        raise KeyError(f"chart {chart!r} is not in the current atlas {sorted(t.charts)}")
    C = t.charts[chart]
    p, q = (Fraction(c) for c in point)
    a, b = C.coords
    at = {a: p, b: q}
    if t.curves:
        newest = t.curves[-1]
        h = newest.locus.get(chart)
        if h is None or h.evaluate(at) != 0:
            raise PointNotOnRequiredCurve(
                f"({p}, {q}) in chart {chart} is not on the newest curve {newest.name}")
    through = [c.name for c in t.curves
               if chart in c.locus and c.locus[chart].evaluate(at) == 0]
    k = t.n + 1
    used = set()
    for ch in t.all_charts.values():
        used.update(ch.coords)

    def fresh(base: str) -> str:
        name, j = base, 0
        while name in used:
            j += 1
            name = f"{base}_{j}"
        used.add(name)
        return name

    s = a if p == 0 else fresh(f"s{k}")
    w = fresh(f"w{k}")
    e2 = b if q == 0 else fresh(f"t{k}")
    v = fresh(f"v{k}")
    RU = RingDescriptor((s, w))
    RV = RingDescriptor((e2, v))
    imgU = {a: RU.var(s) + p, b: RU.var(s) * RU.var(w) + q}
    imgV = {a: RV.var(e2) * RV.var(v) + p, b: RV.var(e2) + q}
    AU = PresentedAlgebra(RU, Ideal(RU, ()), f"U{k}")
    AV = PresentedAlgebra(RV, Ideal(RV, ()), f"V{k}")
    fromU = RingMorphism(C.algebra, AU, imgU)
    fromV = RingMorphism(C.algebra, AV, imgV)
    mbU = RingMorphism(t.base, AU, {x: fromU(f) for x, f in C.map_to_base.images.items()})
    mbV = RingMorphism(t.base, AV, {x: fromV(f) for x, f in C.map_to_base.images.items()})
    U = Chart(f"U{k}", AU, mbU, chart, fromU)
    V = Chart(f"V{k}", AV, mbV, chart, fromV)

    curves = []
    for c in t.curves:
        locus = dict(c.locus)
        if chart in locus:
            h = locus.pop(chart)
            for ch, img, e in ((U, imgU, s), (V, imgV, e2)):
                g = _strict(h, img, ch.algebra.ring, e)
                if not g.is_constant():
                    locus[ch.id] = g
        si = c.self_intersection - (1 if c.name in through else 0)
        curves.append(ExceptionalCurve(c.name, si, locus))
    name = f"E{k}"
    curves.append(ExceptionalCurve(name, -1, {U.id: RU.var(s), V.id: RV.var(e2)}))

    adj = set(t.adjacency)
    for i, c1 in enumerate(through):
        adj.add(frozenset((c1, name)))
        for c2 in through[i + 1:]:
            adj.discard(frozenset((c1, c2)))
    charts = {cid: ch for cid, ch in t.charts.items() if cid != chart}
    charts[U.id] = U
    charts[V.id] = V
    all_charts = dict(t.all_charts)
    all_charts[U.id] = U
    all_charts[V.id] = V
    return Tower(t.base, t.steps + ((chart, (p, q)),), charts, all_charts, tuple(curves),
                 frozenset(adj))


def build_tower(steps: Iterable[tuple[str, Sequence]]) -> Tower:
    t = Tower.empty()
    for chart, pt in steps:
        t = blowup_point(t, chart, pt)
    return t


def dual_graph(t: Tower, name: str = "dual") -> str:
    """DOT text: one vertex per curve labeled with its self-intersection."""
    lines = [f"graph {name} {{"]
    for c in t.curves:
        lines.append(f'  {c.name} [label="{c.name} ({c.self_intersection})"];')
    for a, b in t.edges():
        lines.append(f"  {a} -- {b};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def order_of_vanishing(f: Polynomial, h: Polynomial, relations: Ideal | None = None,
                       limit: int | None = None) -> int:
    """Largest k with f ∈ (h^k) + relations (f must be nonzero)."""
    ring = f.ring
    rels = relations if relations is not None else Ideal(ring, ())
    if ideal_membership(f, rels):
        raise ValueError("order of vanishing of the zero function is infinite")
    limit = limit if limit is not None else max(f.total_degree(), 0) + 1
    k = 0
    hk = h
    while k < limit * 4 + 4:
        if not ideal_membership(f, rels + [hk]):
            return k
        k += 1
        hk = hk * h
    raise ValueError("order of vanishing did not stabilize")


def total_transform_multiplicity(t: Tower, funcs: Sequence[Polynomial | str] = ("x", "y")
                                 ) -> dict[str, int]:
    """For each curve, min over funcs of the order of the pullback along it."""
    fs = [t.base.parse(f) if isinstance(f, str) else f for f in funcs]
    out = {}
    for c in t.curves:
        cid = next(cid for cid in t.charts if cid in c.locus)
        ch = t.charts[cid]
        h = c.locus[cid]
        orders = []
        for f in fs:
            g = ch.map_to_base(f)
            if g:
                orders.append(order_of_vanishing(g, h))
        out[c.name] = min(orders)
    return out


@dataclass(frozen=True)
class OpenSurface:
    tower: Tower
    removed: tuple[str, ...]
    kept_exceptional: str
    retained: Mapping[str, PresentedAlgebra]      # chart id -> localized chart algebra
    line_chart: str                               # chart covering E_n ∩ S_n
    line_algebra: PresentedAlgebra                # coordinate ring of E_n ∩ S_n
    line_equation: Polynomial
    certificate: Verdict
    removed_point: tuple[str, tuple[Fraction, Fraction]] | None = None


def _other_coord(ch: Chart, h: Polynomial) -> str:
    (e,) = h.support()
    (o,) = [c for c in ch.coords if c != e]
    return o


def open_surface(t: Tower, removed_point: tuple[str, Sequence] | None = None) -> OpenSurface:
    """S_n: remove E_1..E_{n-1} (n ≥ 2), or a point o_1 of E_1 (n = 1)."""
    n = t.n
    if n == 0:
        raise ValueError("empty tower has no exceptional curve")
    last = t.curves[-1]
    U, V = f"U{n}", f"V{n}"
    checks = []
    if n == 1:
        if removed_point is None:
            raise ValueError("S_1 needs the removed point o_1 on E_1")
        pc, pt = removed_point[0], tuple(Fraction(c) for c in removed_point[1])
        if pc not in (U, V) or pt != (0, 0):
            raise ValueError("o_1 must be given as the origin of chart U1 or V1")
        good = V if pc == U else U
        retained = {good: t.charts[good].algebra}
        A, hname = localize(t.charts[pc].algebra, last.locus[pc], f"{last.locus[pc]}_hat")
        retained[pc] = A
        eq = last.locus[good]
        checks.append(passed(f"o_1 is the point of E1 missing from chart {good}"))
        removed = ()
        rp = (pc, pt)
    else:
        removed = tuple(c.name for c in t.curves[:-1])
        meets = [e for e in t.adjacency if last.name in e]
        if len(meets) != 1:
            others = sorted(next(iter(e - {last.name})) for e in meets)
            raise RuleCViolated(f"{last.name} meets the removed curves {others} in "
                                f"{len(meets)} points")
        (nbr,) = (next(iter(e - {last.name})) for e in meets)
        retained = {}
        for cid, ch in t.charts.items():
            hs = [c.locus[cid] for c in t.curves[:-1] if cid in c.locus]
            if hs:
                prod = hs[0]
                for h in hs[1:]:
                    prod = prod * h
                A, _ = localize(ch.algebra, prod, "h_inv")
                retained[cid] = A
            else:
                retained[cid] = ch.algebra
        good = None
        for cid in (U, V):
            ring = t.charts[cid].algebra.ring
            hs = [c.locus[cid] for c in t.curves[:-1] if cid in c.locus]
            if all(Ideal(ring, (last.locus[cid], h)).is_unit() for h in hs):
                good = cid
                break
        if good is None:
            raise RuleCViolated(f"no chart of step {n} sees {last.name} away from the removed curves")
        other = V if good == U else U
        oc = t.charts[other]
        h_n = last.locus[other]
        along = oc.algebra.var(_other_coord(oc, h_n))
        nb = t.curve(nbr).locus.get(other)
        if nb is None or not radical_membership(along, Ideal(oc.algebra.ring, (h_n, nb))):
            checks.append(failed(f"{last.name} ∩ {nbr} is not the point missing from {good}"))
        else:
            checks.append(passed(f"{last.name} ∩ {nbr} is the point of {last.name} missing from {good}"))
        eq = last.locus[good]
        rp = None
    gch = t.charts[good]
    line = PresentedAlgebra(gch.algebra.ring, Ideal(gch.algebra.ring, (eq,)), f"{last.name}")
    coord = _other_coord(gch, eq)
    # ℚ[a, b]/(a) ≅ ℚ[b]: the reduced basis is the coordinate itself
    if not (len(line.cached_gb.polys) == 1 and line.cached_gb.basis[0].support() == eq.support()):
        checks.append(failed(f"{last.name} is not a coordinate line in {good}"))
    else:
        checks.append(passed(f"{last.name} ∩ S_{n} = Spec ℚ[{coord}]"))
    return OpenSurface(t, removed, last.name, retained, good, line, eq, all_of(checks), rp)


def chart_transition(t: Tower, k: int) -> tuple[RingMorphism, RingMorphism]:
    """Overlap isomorphisms between U<k> (w_k inverted) and V<k> (v_k inverted)."""
    U, V = t.all_charts[f"U{k}"], t.all_charts[f"V{k}"]
    s, w = U.coords
    e, v = V.coords
    RU = RingDescriptor((s, w), frozenset([w]))
    RV = RingDescriptor((e, v), frozenset([v]))
    AU = PresentedAlgebra(RU, Ideal(RU, ()))
    AV = PresentedAlgebra(RV, Ideal(RV, ()))
    v_to_u = RingMorphism(AV, AU, {e: RU.var(s) * RU.var(w), v: RU.var(w) ** -1})
    u_to_v = RingMorphism(AU, AV, {s: RV.var(e) * RV.var(v), w: RV.var(v) ** -1})
    return v_to_u, u_to_v


def check_transition_coherence(t: Tower, k: int) -> Verdict:
    """Overlap maps are inverse and commute with the maps to the base."""
    v_to_u, u_to_v = chart_transition(t, k)
    checks = [verify_mutual_iso(v_to_u, u_to_v)]
    U, V = t.all_charts[f"U{k}"], t.all_charts[f"V{k}"]
    for x in t.base.ring.variables:
        fu = U.map_to_base.images[x].change_ring(v_to_u.target.ring)
        fv = V.map_to_base.images[x].change_ring(v_to_u.source.ring)
        if v_to_u(fv) != fu:
            checks.append(failed(f"base coordinate {x} disagrees on the overlap of U{k}, V{k}"))
    return all_of(checks)


def verify_custom_gluing(transition: RingMorphism, inverse_hint: RingMorphism,
                         charts: tuple[PresentedAlgebra, PresentedAlgebra] | None = None) -> Verdict:
    """transition and inverse_hint are mutually inverse isomorphisms of overlap rings."""
    if charts is not None:
        a, b = charts
        if {transition.source.ring, transition.target.ring} != {a.ring, b.ring}:
            return failed("transition does not connect the given charts")
    return verify_mutual_iso(transition, inverse_hint)


# -- corpus towers ---------------------------------------------------------------

def chain_tower(n: int) -> Tower:
    """n blow-ups, each at the origin of the newest U-chart (all points free)."""
    steps = [(BASE_CHART, (0, 0))] + [(f"U{k}", (0, 0)) for k in range(1, n)]
    return build_tower(steps)


def five_step_tower() -> Tower:
    return build_tower([(BASE_CHART, (0, 0)), ("U1", (0, 0)), ("U2", (0, 0)),
                        ("V3", (0, 0)), ("U4", (0, 1))])


def fork_tower(n: int) -> Tower:
    """o, then o_1 ∈ E_1, o_2 = E_1 ∩ E_2, o_3 free on E_3, then free points up to o_{2n+2}."""
    steps = [(BASE_CHART, (0, 0)), ("U1", (0, 0)), ("V2", (0, 0)), ("U3", (0, 1))]
    steps += [(f"U{k}", (0, 0)) for k in range(4, 2 * n + 3)]
    return build_tower(steps)
