from __future__ import annotations

from fractions import Fraction

import sympy
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from gext.polycore import Polynomial, RingDescriptor

settings.register_profile("default", deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def sym(f: Polynomial):
    """Our polynomial as a sympy expression (independent oracle)."""
    gens = sympy.symbols(f.ring.variables)
    out = sympy.Integer(0)
    for m, c in f.terms.items():
        t = sympy.Rational(c.numerator, c.denominator)
        for g, e in zip(gens, m):
            t *= g ** e
        out += t
    return sympy.expand(out)


def from_sym(expr, ring: RingDescriptor) -> Polynomial:
    gens = sympy.symbols(ring.variables)
    p = sympy.Poly(sympy.expand(expr), *gens)
    out = ring.zero()
    for exps, c in p.terms():
        c = sympy.Rational(c)
        out = out + ring.monomial(tuple(exps), Fraction(int(c.p), int(c.q)))
    return out


def polys(ring: RingDescriptor, max_terms: int = 4, max_exp: int = 3, coeff: int = 5):
    """Strategy for small polynomials with integer coefficients."""
    term = st.tuples(st.tuples(*[st.integers(0, max_exp) for _ in ring.variables]),
                     st.integers(-coeff, coeff))
    return st.lists(term, max_size=max_terms).map(
        lambda ts: sum((ring.monomial(m, c) for m, c in ts), ring.zero()))
