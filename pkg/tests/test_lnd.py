import pytest
import sympy
from hypothesis import given, settings

from conftest import polys
from gext.errors import CapExceeded, ZeroDenominator
from gext.lnd import (Derivation, NotFound, PresentedAlgebra, RingMorphism, check_coaction_axioms,
                      check_equivariant, check_invariant, check_locally_nilpotent,
                      check_well_defined, exponential, find_local_slice, rectify)
from gext.verifier import builtin_corpus, corpus_by_id
from gext.verifier.pipeline import algebra_from

VARIETIES = [c for c in builtin_corpus() if c.kind == "variety-extension"]


def corpus_lnds():
    out = []
    for c in VARIETIES:
        A = algebra_from(c.payload["ring"])
        out.append((c.id, Derivation.make(A, c.payload["derivation"])))
    for c in builtin_corpus():
        if c.kind == "gluing":
            for k, spec in c.payload["charts"].items():
                A = algebra_from(spec)
                out.append((f"{c.id}/{k}", Derivation.make(A, spec["derivation"])))
    return out


LNDS = corpus_lnds()


@pytest.mark.parametrize("name,D", LNDS, ids=[n for n, _ in LNDS])
def test_corpus_derivations_are_well_defined(name, D):
    assert check_well_defined(D)


@pytest.mark.parametrize("name,D", LNDS, ids=[n for n, _ in LNDS])
def test_coaction_coassociative_for_corpus(name, D):
    assert check_coaction_axioms(exponential(D))


def _sl2_index(expr):
    """Nilpotency index of D = x d/du + y d/dv on SL2, computed with sympy."""
    x, y, u, v = sympy.symbols("x y u v")
    G = sympy.groebner([x * v - y * u - 1], x, y, u, v, order="grevlex")
    f = expr
    for k in range(1, 20):
        f = sympy.expand(x * sympy.diff(f, u) + y * sympy.diff(f, v))
        if G.reduce(f)[1] == 0:
            return k
    raise AssertionError("not nilpotent")


@pytest.mark.parametrize("case", [c for c in VARIETIES if "embedding" in c.payload],
                         ids=lambda c: c.id)
def test_nilpotency_indices_match_sl2_pullback(case):
    A = algebra_from(case.payload["ring"])
    D = Derivation.make(A, case.payload["derivation"])
    ours = check_locally_nilpotent(D)
    for var, image in case.payload["embedding"].items():
        assert ours[var] == _sl2_index(sympy.sympify(image.replace("^", "**")))


def test_intro_indices():
    c = corpus_by_id()["intro-threefold"]
    A = algebra_from(c.payload["ring"])
    D = Derivation.make(A, c.payload["derivation"])
    assert check_locally_nilpotent(D) == {"x": 1, "y": 1, "u": 2, "v": 3}


def test_x0_indices_at_most_two():
    c = corpus_by_id()["X0"]
    D = Derivation.make(algebra_from(c.payload["ring"]), c.payload["derivation"])
    assert max(check_locally_nilpotent(D).values()) <= 2


X0 = PresentedAlgebra.make("x y p q r", ["x*r - y*q", "y*p - x*(q-1)", "p*r - q*(q-1)"])
D0 = Derivation.make(X0, {"p": "x^2", "q": "x*y", "r": "y^2"})


@settings(max_examples=50)
@given(polys(X0.ring, max_terms=3, max_exp=2), polys(X0.ring, max_terms=3, max_exp=2))
def test_leibniz_rule(f, g):
    assert D0(f * g) == f * D0(g) + g * D0(f)
    assert D0(f + g) == D0(f) + D0(g)


def test_ill_defined_derivation_reports_witness():
    A = PresentedAlgebra.make("x y u v", ["x^2*(x-1)*v + y*u^2 - x"])
    bad = Derivation.make(A, {"u": "x^2*(x-1)", "v": "2*y*u"})
    v = check_well_defined(bad)
    assert not v
    assert "relation" in v.detail


def test_non_nilpotent_hits_cap():
    A = PresentedAlgebra.make("x")
    with pytest.raises(CapExceeded) as e:
        check_locally_nilpotent(Derivation.make(A, {"x": "x"}), cap=8)
    assert e.value.variable == "x"


def test_exponential_on_sl2():
    A = PresentedAlgebra.make("x y u v", ["x*v - y*u - 1"])
    c = exponential(Derivation.make(A, {"u": "x", "v": "y"}))
    R = c.ext_ring
    assert c.images["u"] == R.parse(f"u + {c.parameter}*x")


def test_slice_found_and_not_found():
    A = PresentedAlgebra.make("z u t", inverted="u")
    assert find_local_slice(Derivation.make(A, {"t": "u^-1"})) == A.parse("u*t")
    sl2 = PresentedAlgebra.make("x y u v", ["x*v - y*u - 1"])
    assert find_local_slice(Derivation.make(sl2, {"u": "x", "v": "y"})) is NotFound


def test_rectify_gives_invariant():
    A = PresentedAlgebra.make("a b")
    D = Derivation.make(A, {"a": "1", "b": "a"})
    f = rectify(D, A.parse("a"), A.parse("b"))
    assert f == A.parse("b - 1/2*a^2")
    assert check_invariant(f, D)


def test_invariant_with_denominator():
    c = corpus_by_id()["X1"]
    A = algebra_from(c.payload["ring"])
    D = Derivation.make(A, c.payload["derivation"])
    assert check_invariant(A.parse("y*z1+1"), D, A.parse("w"))
    assert not check_invariant(A.parse("z1"), D, A.parse("w"))
    with pytest.raises(ZeroDenominator):
        check_invariant(A.parse("x"), D, A.parse("x*w - y*(y*z1+1)"))


def test_equivariance_detects_wrong_embedding():
    sl2 = PresentedAlgebra.make("x y u v", ["x*v - y*u - 1"])
    Dt = Derivation.make(sl2, {"u": "x", "v": "y"})
    good = RingMorphism.make(X0, sl2, {"x": "x", "y": "y", "p": "x*u", "q": "x*v", "r": "y*v"})
    assert good.check_well_defined() and check_equivariant(good, D0, Dt)
    bad = RingMorphism.make(X0, sl2, {"x": "x", "y": "y", "p": "x*u", "q": "x*v", "r": "y*u"})
    assert not bad.check_well_defined()


def test_x1_embedding_variant_with_yu_fails():
    c = corpus_by_id()["X1"]
    A = algebra_from(c.payload["ring"])
    sl2 = PresentedAlgebra.make("x y u v", ["x*v - y*u - 1"])
    good = RingMorphism.make(A, sl2, {"x": "x", "y": "y", "z1": "u", "z2": "u*v", "w": "y*v"})
    bad = RingMorphism.make(A, sl2, {"x": "x", "y": "y", "z1": "u", "z2": "u*v", "w": "y*u"})
    assert good.check_well_defined()
    assert not bad.check_well_defined()
    assert any("yu" in f for f in c.flags)
