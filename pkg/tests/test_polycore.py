from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from conftest import from_sym, polys, sym
from gext.errors import LaurentInput, ParseError, UnknownVariable
from gext.polycore import (RingDescriptor, homogeneous_decompose, parse, partial_derivative,
                           substitute, univariate_squarefree)

R = RingDescriptor.make("x y z")
L = RingDescriptor.make("x y", inverted="x y")


@given(polys(R), polys(R))
def test_arithmetic_matches_sympy(f, g):
    assert sym(f + g) == sympy.expand(sym(f) + sym(g))
    assert sym(f * g) == sympy.expand(sym(f) * sym(g))
    assert sym(f - g) == sympy.expand(sym(f) - sym(g))


@given(polys(R, max_terms=3, max_exp=2), st.integers(0, 3))
def test_power_matches_sympy(f, k):
    assert sym(f ** k) == sympy.expand(sym(f) ** k)


@given(polys(R))
def test_format_parse_round_trip(f):
    assert R.parse(str(f)) == f


@given(polys(R), st.sampled_from(["x", "y", "z"]))
def test_partial_derivative_matches_sympy(f, v):
    assert sym(partial_derivative(f, v)) == sympy.diff(sym(f), sympy.Symbol(v))


@given(polys(R), polys(R, max_terms=2, max_exp=2))
def test_substitute_matches_sympy(f, g):
    x, y, z = sympy.symbols("x y z")
    want = sympy.expand(sym(f).subs(x, sym(g)))
    assert sym(substitute(f, {"x": g})) == want


@given(polys(R))
def test_homogeneous_parts_sum_back(f):
    parts = homogeneous_decompose(f)
    assert sum(parts.values(), R.zero()) == f
    for d, p in parts.items():
        assert all(sum(m) == d for m in p.terms)


def test_laurent_monomials_are_units():
    x = L.var("x")
    assert x ** -2 * x ** 2 == L.one()
    assert L.parse("x^-1*y^-1") * L.parse("x*y") == L.one()


def test_negative_power_of_non_unit_is_a_parse_error():
    with pytest.raises(ParseError):
        L.parse("(x+y)^-1")


def test_homogeneous_decompose_rejects_laurent_input():
    with pytest.raises(LaurentInput):
        homogeneous_decompose(L.parse("x^-1 + y"))


@pytest.mark.parametrize("text,line,column", [
    ("x*y +* 2", 1, 6),
    ("x + y\n  + z^", 2, 7),
    ("x + w", 1, 5),
])
def test_parse_error_location(text, line, column):
    with pytest.raises(ParseError) as e:
        parse(text, R)
    assert (e.value.line, e.value.column) == (line, column)


def test_unknown_variable_in_substitution_target():
    with pytest.raises(UnknownVariable):
        R.parse("x").change_ring(RingDescriptor.make("y"))


@pytest.mark.parametrize("text", ["u^2 - 1", "u^3 - u", "u", "2*u + 5", "u^2 + 1"])
def test_squarefree_positive(text):
    U = RingDescriptor.make("u")
    assert univariate_squarefree(U.parse(text), "u")


@pytest.mark.parametrize("text", ["u^2", "(u-1)^2*(u+2)", "u^4 - 2*u^2 + 1"])
def test_squarefree_negative(text):
    U = RingDescriptor.make("u")
    assert not univariate_squarefree(U.parse(text), "u")


@given(st.lists(st.integers(-4, 4), min_size=1, max_size=6))
def test_squarefree_matches_sympy(coeffs):
    U = RingDescriptor.make("u")
    f = sum((U.monomial((i,), c) for i, c in enumerate(coeffs)), U.zero())
    if f.is_zero() or f.is_constant():
        return
    u = sympy.Symbol("u")
    want = sympy.degree(sympy.gcd(sym(f), sympy.diff(sym(f), u)), u) == 0
    assert univariate_squarefree(f, "u") == want


def test_from_sym_round_trip():
    f = R.parse("3/2*x^2*y - z + 7")
    assert from_sym(sym(f), R) == f


def test_evaluate():
    f = R.parse("x^2*y - z")
    assert f.evaluate({"x": 2, "y": Fraction(1, 2), "z": 1}) == 1
