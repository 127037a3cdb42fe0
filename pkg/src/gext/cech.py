"""Čech data for G_a-torsors over the punctured plane and their extensions.

A torsor over A² minus the origin is given by a 1-cocycle c = s_y - s_x on the
cover {A²_x, A²_y}, where s_x, s_y are local slices.  After blowing up the
origin (charts ℚ[y, z] with x = y*z and ℚ[x, z'] with y = x*z'), an M(ℓ)-torsor
is glued by u' = z^ℓ u + p̃ with p̃ in the overlap ring ℚ[y, z^{±1}].

Conventions: u = -y^ℓ s_y and u' = -x^ℓ s_x, so p̃ = x^ℓ c rewritten
with x = y z.  The G_a-action is y^ℓ ∂_u on chart 0 and x^ℓ ∂_{u'} on chart ∞.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .errors import CapExceeded, DegreeTooHigh, LevelBelowL0, TrivialNearO
from .lnd import Derivation, PresentedAlgebra
from .polycore import Polynomial, RingDescriptor, homogeneous_decompose, substitute

BASE = RingDescriptor(("x", "y"), frozenset(("x", "y")))
OVERLAP = RingDescriptor(("y", "z", "u"), frozenset(("z",)))   # chart-0 side of the overlap
CHART0 = RingDescriptor(("y", "z", "u"))
CHART_INF = RingDescriptor(("x", "zp", "up"))


@dataclass(frozen=True)
class Cocycle:
    value: Polynomial        # Laurent polynomial in x, y

    @classmethod
    def from_mnp(cls, m: int, n: int, p: Polynomial | str) -> "Cocycle":
        if isinstance(p, str):
            p = BASE.parse(p)
        p = p.change_ring(BASE) if p.ring != BASE else p
        return cls(p * BASE.monomial((-m, -n)))

    @classmethod
    def parse(cls, text: str) -> "Cocycle":
        return cls(BASE.parse(text))

    def normalized(self) -> tuple[int, int, Polynomial]:
        """(m, n, p) with value = x^-m y^-n p and p a polynomial, m, n minimal."""
        if not self.value:
            return 0, 0, BASE.zero()
        lo = self.value.monomial_content()
        m, n = max(0, -lo[0]), max(0, -lo[1])
        return m, n, self.value.shift((m, n))

    def __str__(self) -> str:
        return str(self.value)


def canonical_class(c: Cocycle) -> dict[tuple[int, int], Fraction]:
    """Coefficients of x^-i y^-j (i, j ≥ 1); all other monomials are chart-regular."""
    out = {}
    for (a, b), coef in c.value.terms.items():
        if a <= -1 and b <= -1:
            out[(-a, -b)] = coef
    return dict(sorted(out.items()))


def class_cocycle(cls_map: Mapping[tuple[int, int], Fraction]) -> Cocycle:
    return Cocycle(Polynomial(BASE, {(-i, -j): c for (i, j), c in cls_map.items()}))


@dataclass(frozen=True)
class ExtensionClassification:
    l0: int
    canonical_monomials: dict
    restriction_class_nonzero: bool
    d: int                   # lowest degree of p with a surviving component
    d_unreduced: int         # lowest degree of p before dropping chart-regular monomials
    m: int
    n: int

    @property
    def degree_flag(self) -> bool:
        """True when dropping chart-regular monomials changed the lowest degree."""
        return self.d != self.d_unreduced

    def to_json(self) -> dict:
        return {
            "m": self.m, "n": self.n, "d": self.d, "d_unreduced": self.d_unreduced,
            "degree_flag": self.degree_flag, "l0": self.l0,
            "canonical_class": [{"i": i, "j": j, "coeff": str(c)}
                                for (i, j), c in self.canonical_monomials.items()],
            "restriction_class_nonzero": self.restriction_class_nonzero,
        }


def classify_extension(c: Cocycle) -> ExtensionClassification:
    cls_map = canonical_class(c)
    if not cls_map:
        raise TrivialNearO(f"{c} is a coboundary near the origin; no affine extension exists")
    m, n, p = c.normalized()
    l0 = max(i + j for i, j in cls_map)
    d = m + n - l0
    parts = homogeneous_decompose(p)
    d_raw = min(parts) if parts else d
    nonzero = any(restrict_to_E(torsor_datum(c, l0)))
    return ExtensionClassification(l0, cls_map, nonzero, d, d_raw, m, n)


@dataclass(frozen=True)
class TorsorDatum:
    level: int
    gluing: Polynomial       # p̃ in ℚ[y, z^{±1}] (ring OVERLAP, u-free)
    cocycle: Cocycle

    @classmethod
    def from_gluing(cls, level: int, gluing: Polynomial | str) -> "TorsorDatum":
        """Datum with an explicit p̃; the cocycle is recovered off E."""
        if isinstance(gluing, str):
            gluing = OVERLAP.parse(gluing)
        gluing = gluing.change_ring(OVERLAP)
        if "u" in gluing.support():
            raise ValueError("gluing must not involve u")
        d = cls(level, gluing, Cocycle(BASE.zero()))
        return cls(level, gluing, d.restricted_cocycle())

    def transition_images(self) -> dict[str, Polynomial]:
        """Chart ∞ coordinates on the overlap, in chart-0 terms."""
        y, z, u = OVERLAP.gens()
        return {"x": y * z, "zp": z ** -1, "up": z ** self.level * u + self.gluing}

    def restricted_cocycle(self) -> Cocycle:
        """p̃ / x^ℓ with z = x/y: the class off E."""
        img = {"y": BASE.var("y"), "z": BASE.var("x") * BASE.var("y") ** -1, "u": BASE.zero()}
        g = substitute(self.gluing, img, BASE)
        return Cocycle(g * BASE.var("x") ** -self.level)


def torsor_datum(c: Cocycle, level: int) -> TorsorDatum:
    cls_map = canonical_class(c)
    l0 = max((i + j for i, j in cls_map), default=0)
    if level < max(l0, 0) or level < 0:
        raise LevelBelowL0(f"level {level} is below l0 = {l0}")
    terms = {}
    for (i, j), coef in cls_map.items():
        # x^-i y^-j * x^l with x = y z  ->  z^(l-i) y^(l-i-j)
        terms[(level - i - j, level - i, 0)] = coef
    return TorsorDatum(level, Polynomial(OVERLAP, terms), class_cocycle(cls_map))


def restrict_to_E(d: TorsorDatum) -> list[Fraction]:
    """Coordinates of the class of W|_E in H¹(P¹, O(-ℓ)) on the basis z^-1 .. z^-(ℓ-1)."""
    ell = d.level
    vec = [Fraction(0)] * max(ell - 1, 0)
    for (e, r, s), coef in d.gluing.terms.items():
        if e == 0 and s == 0:
            k = r - ell          # divide by z^ℓ
            if -ell < k < 0:
                vec[-k - 1] += coef
    return vec


def h1_dimension_P1(s: int, window: int = 12) -> int:
    """dim H¹(P¹, O(s)) by brute-force Čech reduction of Laurent monomials.

    Cochains are z^k with |k| ≤ window on U₀ ∩ U∞.  Chart 0 contributes the
    coboundaries z^k with k ≥ 0 and chart ∞ those with k ≤ s.
    """
    window = max(window, abs(s) + 2)
    cochains = set(range(-window, window + 1))
    coboundaries = {k for k in cochains if k >= 0} | {k for k in cochains if k <= s}
    return len(cochains - coboundaries)


# -- homogeneous torsors ---------------------------------------------------------

@dataclass(frozen=True)
class HomogeneousTorsor:
    m: int
    n: int
    p: Polynomial
    algebra: PresentedAlgebra
    derivation: Derivation
    d: int

    def cocycle(self) -> Cocycle:
        return Cocycle.from_mnp(self.m, self.n, self.p)


def homogeneous_torsor(m: int, n: int, p: Polynomial | str) -> HomogeneousTorsor:
    R = RingDescriptor(("x", "y", "u", "v"))
    if isinstance(p, str):
        p = R.parse(p)
    else:
        p = p.change_ring(R)
    if not p:
        raise ValueError("p must be nonzero")
    parts = homogeneous_decompose(p)
    if len(parts) != 1 or p.support() - {"x", "y"}:
        raise ValueError(f"{p} is not a homogeneous polynomial in x, y")
    (r,) = parts
    if r > m + n - 2:
        raise DegreeTooHigh(f"deg p = {r} > m + n - 2 = {m + n - 2}")
    x, y, u, v = R.gens()
    rel = x ** m * v - y ** n * u - p
    A = PresentedAlgebra.make("x y u v", [rel], name=f"P_{m},{n}")
    D = Derivation(A, {"u": x ** m, "v": y ** n})
    return HomogeneousTorsor(m, n, p, A, D, m + n - r)


# -- coboundary reduction on the bundle ------------------------------------------

@dataclass(frozen=True)
class CoboundaryWitness:
    b0: Polynomial           # in CHART0
    binf: Polynomial         # in CHART_INF
    steps: int


def to_overlap(g: Polynomial) -> Polynomial:
    """Rewrite an element of ℚ[x,y][z^{±1}][u] into ℚ[y, z^{±1}, u] via x = y z."""
    if g.ring == OVERLAP:
        return g
    y, z, u = OVERLAP.gens()
    img = {}
    for v in g.ring.variables:
        if v == "x":
            img[v] = y * z
        elif v in ("y", "z", "u"):
            img[v] = OVERLAP.var(v)
        else:
            raise ValueError(f"unexpected variable {v}")
    return substitute(g, img, OVERLAP)


def reduce_bundle_cocycle(g: Polynomial, d: TorsorDatum, degree_cap: int = 64,
                          max_steps: int = 100_000) -> CoboundaryWitness:
    """b0, b∞ with g = b∞(transition) - b0, by recursion on the u-degree.

    Terms z^r u^s with r < 0 and s > 0 are lifted through u = z^-ℓ (u' - p̃);
    the remainder has lower u-degree.  CapExceeded if a z-exponent leaves
    [-degree_cap, degree_cap] or the step count passes max_steps.
    """
    ell = d.level
    y, z, u = OVERLAP.gens()
    up = z ** ell * u + d.gluing
    up_pows = {0: OVERLAP.one()}
    work = to_overlap(g)
    b0: dict = {}
    binf: dict = {}
    steps = 0
    while work:
        steps += 1
        if steps > max_steps:
            raise CapExceeded(f"coboundary recursion exceeded {max_steps} steps", "u")
        # pick the term of highest u-degree, then lowest z-exponent
        (e, r, s), coef = max(work.terms.items(), key=lambda t: (t[0][2], -t[0][1], t[0][0]))
        if abs(r) > degree_cap:
            raise CapExceeded(f"z-exponent {r} exceeds degree cap {degree_cap}", "z")
        term = OVERLAP.monomial((e, r, s), coef)
        if r >= 0:
            b0[(e, r, s)] = b0.get((e, r, s), 0) - coef
            work = work - term
            continue
        # y^e z^r u^s = y^e z^(r - l s) (u')^s - y^e z^r R(u)
        if s not in up_pows:
            up_pows[s] = up ** s
        lifted = OVERLAP.monomial((e, r - ell * s, 0), coef) * up_pows[s]
        # chart ∞ monomial: y^e z^(r-ls) up^s = x^e zp^(e - r + l s) up^s
        key = (e, e - r + ell * s, s)
        binf[key] = binf.get(key, 0) + coef
        work = work - lifted
    B0 = Polynomial(CHART0, {k: c for k, c in b0.items() if c})
    Binf = Polynomial(CHART_INF, {k: c for k, c in binf.items() if c})
    w = CoboundaryWitness(B0, Binf, steps)
    if not verify_witness(g, d, w):
        raise AssertionError("coboundary witness failed re-verification")
    return w


def verify_witness(g: Polynomial, d: TorsorDatum, w: CoboundaryWitness) -> bool:
    lhs = substitute(w.binf, d.transition_images(), OVERLAP)
    b0 = w.b0.change_ring(OVERLAP)
    return lhs - b0 == to_overlap(g)


def sl2_datum() -> TorsorDatum:
    return torsor_datum(Cocycle.from_mnp(1, 1, "1"), 2)


def split_coboundary(delta: Polynomial) -> tuple[Polynomial, Polynomial] | None:
    """(α_x, α_y) regular on A²_x and A²_y with delta = α_y - α_x, or None."""
    delta = delta.change_ring(BASE)
    ax, ay = {}, {}
    for (a, b), coef in delta.terms.items():
        if a >= 0:
            ay[(a, b)] = coef
        elif b >= 0:
            ax[(a, b)] = -coef
        else:
            return None
    alpha_x, alpha_y = Polynomial(BASE, ax), Polynomial(BASE, ay)
    assert alpha_y - alpha_x == delta
    return alpha_x, alpha_y
