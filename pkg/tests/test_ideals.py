import pytest
import sympy
from hypothesis import given, settings, strategies as st

from conftest import from_sym, polys, sym
from gext.errors import BadCodim, ResourceBudgetExceeded
from gext.ideals import (Ideal, eliminate, groebner, ideal_equality, ideal_membership,
                         jacobian_smooth_along, radical_membership, reduction_budget, saturate)
from gext.lnd import PresentedAlgebra
from gext.polycore import RingDescriptor
from gext.verifier import builtin_corpus
from gext.verifier.pipeline import algebra_from

R = RingDescriptor.make("x y z")


def s_polynomial(f, g):
    lf, lg = f.leading_monomial(), g.leading_monomial()
    lcm = tuple(max(a, b) for a, b in zip(lf, lg))
    return (f.shift(tuple(a - b for a, b in zip(lcm, lf))) / f.leading_coeff()
            - g.shift(tuple(a - b for a, b in zip(lcm, lg))) / g.leading_coeff())


def assert_s_closed(G):
    basis = G.basis
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            assert not G.reduce(s_polynomial(basis[i], basis[j]))


def sympy_gb(gens, ring, order="grevlex"):
    syms = sympy.symbols(ring.variables)
    return sympy.groebner([sym(g) for g in gens], *syms, order=order)


small = polys(R, max_terms=3, max_exp=2, coeff=3)


@settings(max_examples=40)
@given(st.lists(small, min_size=1, max_size=3))
def test_reduced_basis_matches_sympy(gens):
    gens = [g for g in gens if g]
    if not gens:
        return
    G = groebner(Ideal(R, tuple(gens)))
    ours = {str(g.monic()) for g in G.basis}
    theirs = {str(from_sym(e, R).monic()) for e in sympy_gb(gens, R).exprs}
    assert ours == theirs


@settings(max_examples=40)
@given(st.lists(small, min_size=1, max_size=3))
def test_s_polynomial_closure_random(gens):
    gens = [g for g in gens if g]
    if gens:
        assert_s_closed(groebner(Ideal(R, tuple(gens))))


@pytest.mark.parametrize("case", [c for c in builtin_corpus() if c.kind == "variety-extension"],
                         ids=lambda c: c.id)
def test_s_polynomial_closure_corpus(case):
    A = algebra_from(case.payload["ring"])
    assert_s_closed(A.relations.groebner())


@settings(max_examples=40)
@given(small, st.lists(small, min_size=1, max_size=2))
def test_membership_matches_sympy(f, gens):
    gens = [g for g in gens if g]
    if not gens:
        return
    G = sympy_gb(gens, R)
    assert ideal_membership(f, Ideal(R, tuple(gens))) == G.contains(sym(f))


@settings(max_examples=30)
@given(st.lists(small, min_size=1, max_size=2), small)
def test_saturation_stabilizes(gens, f):
    gens = [g for g in gens if g]
    if not gens or not f:
        return
    I = Ideal(R, tuple(gens))
    S1 = saturate(I, f)
    assert ideal_equality(saturate(S1, f), S1)
    for g in I.generators:
        assert ideal_membership(g, S1)


def test_saturation_examples():
    I = Ideal.of(R, "x*y", "x*z")
    assert ideal_equality(saturate(I, R.parse("x")), Ideal.of(R, "y", "z"))
    assert saturate(Ideal.of(R, "x^2*y - x^2"), R.parse("x")).contains(R.parse("y - 1"))


def test_elimination_matches_sympy_lex():
    I = Ideal.of(R, "x - y^2", "z - y^3")
    E = eliminate(I, ["x", "z"])
    x, y, z = sympy.symbols("x y z")
    lex = sympy.groebner([x - y**2, z - y**3], y, x, z, order="lex")
    want = [e for e in lex.exprs if y not in e.free_symbols]
    assert E.ring.variables == ("x", "z")
    assert ideal_equality(E, Ideal(E.ring, tuple(from_sym(w, E.ring) for w in want)))


def test_radical_membership():
    I = Ideal.of(R, "x^3", "y^2 - z")
    assert radical_membership(R.parse("x"), I)
    assert not radical_membership(R.parse("y"), I)
    assert not ideal_membership(R.parse("x"), I)


def test_unit_ideal_detection():
    assert Ideal.of(R, "x", "x - 1").is_unit()
    assert not Ideal.of(R, "x*y - 1").is_unit()


def test_laurent_ring_membership():
    L = RingDescriptor.make("x y", inverted="x")
    assert Ideal.of(L, "x*y").contains(L.parse("y"))


def test_budget_exceeded_is_an_error():
    gens = ("x^3*y - z^2 + 1", "y^3*z - x^2", "z^3*x - y^2 + x")
    with reduction_budget(5):
        with pytest.raises(ResourceBudgetExceeded):
            groebner(Ideal.of(R, *gens))
    assert groebner(Ideal.of(R, *gens)).basis


def test_jacobian_smoothness():
    cusp = PresentedAlgebra.make("x y", ["y^2 - x^3"])
    origin = Ideal.of(cusp.ring, "x", "y")
    r = jacobian_smooth_along(cusp, origin, 1)
    assert not r and r.witness
    line = PresentedAlgebra.make("x y", ["y - x^2"])
    assert jacobian_smooth_along(line, Ideal.of(line.ring, "x"), 1)
    assert jacobian_smooth_along(PresentedAlgebra.make("x y"), Ideal.of(line.ring, "x"), 0)
    with pytest.raises(BadCodim):
        jacobian_smooth_along(cusp, origin, 2)
