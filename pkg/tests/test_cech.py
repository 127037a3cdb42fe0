from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from conftest import sym
from gext.errors import CapExceeded, DegreeTooHigh, LevelBelowL0, TrivialNearO
from gext.cech import (OVERLAP, Cocycle, TorsorDatum, canonical_class, classify_extension,
                       h1_dimension_P1, homogeneous_torsor, reduce_bundle_cocycle, restrict_to_E,
                       sl2_datum, split_coboundary, torsor_datum)
from gext.lnd import check_locally_nilpotent, check_well_defined


def sympy_witness_ok(g, d, w):
    """g = b_inf(x = y z, zp = 1/z, up = z^l u + p) - b0, checked in sympy."""
    y, z, u, x, zp, up = sympy.symbols("y z u x zp up")
    binf = sym(w.binf).subs({x: y * z, zp: 1 / z, up: z ** d.level * u + sym(d.gluing)},
                            simultaneous=True)
    return sympy.simplify(binf - sym(w.b0) - sym(g)) == 0


def test_sl2_classification():
    cls = classify_extension(Cocycle.parse("x^-1*y^-1"))
    assert cls.l0 == 2
    assert cls.d == 0
    assert cls.restriction_class_nonzero


def test_sl2_restriction_levels():
    c = Cocycle.parse("x^-1*y^-1")
    assert any(restrict_to_E(torsor_datum(c, 2)))
    for level in (3, 4, 5):
        assert not any(restrict_to_E(torsor_datum(c, level)))
    with pytest.raises(LevelBelowL0):
        torsor_datum(c, 1)


def test_sl2_datum_gluing():
    # u' = z^2 u + z on the overlap
    assert sl2_datum().transition_images()["up"] == OVERLAP.parse("z^2*u + z")


@pytest.mark.parametrize("ell", range(1, 7))
def test_h1_of_negative_twists(ell):
    assert h1_dimension_P1(-ell) == ell - 1


@pytest.mark.parametrize("s", [-1, 0, 1, 3])
def test_h1_vanishes_for_s_at_least_minus_one(s):
    assert h1_dimension_P1(s) == 0


@pytest.mark.parametrize("m,n,p,l0", [(1, 1, "1", 2), (2, 2, "x+y", 3), (3, 1, "y+x^2", 2),
                                      (2, 3, "x*y", 3), (3, 3, "1 + x*y^2", 6)])
def test_l0_values(m, n, p, l0):
    assert classify_extension(Cocycle.from_mnp(m, n, p)).l0 == l0


def test_degree_flag_when_reduction_changes_degree():
    # (y + x^2)/(x^3 y) = x^-1 y^-1 + x^-3 and the second term is chart-regular
    cls = classify_extension(Cocycle.from_mnp(3, 1, "y+x^2"))
    assert (cls.d, cls.d_unreduced) == (2, 1)
    assert cls.degree_flag
    assert not classify_extension(Cocycle.from_mnp(2, 2, "x+y")).degree_flag


def test_trivial_near_origin():
    with pytest.raises(TrivialNearO):
        classify_extension(Cocycle.from_mnp(1, 1, "x"))
    with pytest.raises(TrivialNearO):
        classify_extension(Cocycle.parse("x^-3 + y^-2 + x*y"))


@given(st.dictionaries(st.tuples(st.integers(-3, 2), st.integers(-3, 2)), st.integers(-3, 3),
                       max_size=5))
def test_canonical_class_matches_sympy(terms):
    x, y = sympy.symbols("x y")
    text = " + ".join(f"({c})*x^{a}*y^{b}" for (a, b), c in terms.items()) or "0"
    shifted = sympy.Poly(sum((c * x ** (a + 3) * y ** (b + 3) for (a, b), c in terms.items()),
                             sympy.Integer(0)), x, y)
    oracle = {(3 - a, 3 - b): Fraction(int(c))
              for (a, b), c in shifted.terms() if a < 3 and b < 3 and c != 0}
    assert canonical_class(Cocycle.parse(text)) == oracle


def test_homogeneous_torsor():
    t = homogeneous_torsor(2, 2, "x+y")
    assert check_well_defined(t.derivation)
    assert check_locally_nilpotent(t.derivation)["u"] == 2
    assert t.d == 3
    assert t.cocycle().value == Cocycle.parse("x^-1*y^-2 + x^-2*y^-1").value


def test_homogeneous_torsor_rejects_bad_p():
    with pytest.raises(DegreeTooHigh):
        homogeneous_torsor(1, 1, "x")
    with pytest.raises(ValueError):
        homogeneous_torsor(2, 2, "x + y^2")
    with pytest.raises(ValueError):
        homogeneous_torsor(2, 2, "0")


def test_u_is_a_chart_zero_coboundary():
    d = TorsorDatum.from_gluing(2, "1")
    g = OVERLAP.parse("u")
    w = reduce_bundle_cocycle(g, d)
    assert sympy_witness_ok(g, d, w)


def test_negative_z_needs_chart_infinity():
    d = TorsorDatum.from_gluing(2, "1")
    g = OVERLAP.parse("z^-1*u")
    w = reduce_bundle_cocycle(g, d)
    assert w.binf
    assert sympy_witness_ok(g, d, w)


def test_cap_exceeded():
    with pytest.raises(CapExceeded) as e:
        reduce_bundle_cocycle(OVERLAP.parse("z^-9*u^3"), sl2_datum(), degree_cap=4)
    assert e.value.variable in ("z", "u")


monomial = st.tuples(st.integers(0, 2), st.integers(-4, 4), st.integers(0, 3))


@settings(max_examples=60)
@given(st.dictionaries(monomial, st.integers(-3, 3), min_size=1, max_size=4))
def test_random_cocycles_reduce_with_valid_witness(terms):
    g = sum((OVERLAP.monomial(m, c) for m, c in terms.items()), OVERLAP.zero())
    d = sl2_datum()
    w = reduce_bundle_cocycle(g, d)
    assert sympy_witness_ok(g, d, w)


@given(st.dictionaries(st.tuples(st.integers(-3, 3), st.integers(-3, 3)), st.integers(-3, 3),
                       max_size=4))
def test_split_coboundary(terms):
    from gext.cech import BASE
    delta = sum((BASE.monomial(m, c) for m, c in terms.items()), BASE.zero())
    split = split_coboundary(delta)
    if any(a < 0 and b < 0 for (a, b), c in delta.terms.items()):
        assert split is None
    else:
        ax, ay = split
        assert ay - ax == delta
        assert all(a >= 0 for a, _ in ay.terms) and all(b >= 0 for _, b in ax.terms)
