import pytest
from hypothesis import given, settings, strategies as st

from gext.affinemod import (ModificationCenter, bundle_modify, localize, modify_presentation,
                            verify_equivariant_modification, verify_localized_iso,
                            verify_mutual_iso, verify_restriction_iso)
from gext.errors import FNotInCenter, UnitIdealCheckFailed
from gext.lnd import Derivation, PresentedAlgebra, RingMorphism, check_well_defined
from gext.verifier import corpus_by_id
from gext.verifier.pipeline import algebra_from

X0 = PresentedAlgebra.make("x y p q r", ["x*r - y*q", "y*p - x*(q-1)", "p*r - q*(q-1)"])
D0 = Derivation.make(X0, {"p": "x^2", "q": "x*y", "r": "y^2"})
X1 = algebra_from(corpus_by_id()["X1"].payload["ring"])
D1 = Derivation.make(X1, corpus_by_id()["X1"].payload["derivation"])
ETA = {"x": "x", "y": "y", "p": "x*z1", "q": "y*z1+1", "r": "w"}


def test_eta_is_equivariant_and_iso_off_x():
    eta = RingMorphism.make(X0, X1, ETA)
    assert eta.check_well_defined()
    assert verify_equivariant_modification(eta, D0, D1)
    inverse = {"z1": "p*x_hat", "z2": "p*q*x_hat^2", "w": "r"}
    assert verify_localized_iso(eta, X0.parse("x"), inverse)


def test_wrong_inverse_is_rejected():
    eta = RingMorphism.make(X0, X1, ETA)
    assert not verify_localized_iso(eta, X0.parse("x"),
                                    {"z1": "p*x_hat", "z2": "q*x_hat^2", "w": "r"})


def test_center_presentation_recovers_x1():
    c = ModificationCenter.make(X0, "x^2", ["x^2", "x*p", "p*q"])
    m = modify_presentation(c, ["T1", "T2"])
    assert verify_restriction_iso(m)
    phi = RingMorphism.make(m.algebra, X1, {**ETA, "T1": "z1", "T2": "z2"})
    psi = RingMorphism.make(X1, m.algebra, {"x": "x", "y": "y", "z1": "T1", "z2": "T2", "w": "r"})
    assert verify_mutual_iso(phi, psi)


def test_center_must_contain_f():
    with pytest.raises(FNotInCenter):
        ModificationCenter.make(X0, "y", ["x", "p"])
    with pytest.raises(FNotInCenter):
        ModificationCenter.make(X0, "0", ["x"])


def test_simple_affine_blowup_chart():
    A = PresentedAlgebra.make("x y")
    m = modify_presentation(ModificationCenter.make(A, "x", ["x", "y"]), ["t"])
    assert m.algebra.is_zero(m.algebra.parse("x*t - y"))
    assert verify_restriction_iso(m)


def test_localize_adjoins_inverse():
    A = PresentedAlgebra.make("x y")
    Af, h = localize(A, A.parse("x"))
    assert h == "x_hat"
    assert Af.is_zero(Af.parse("x*x_hat - 1"))


@settings(max_examples=20)
@given(st.integers(1, 3), st.integers(-2, 2))
def test_bundle_modification_charts(k, a0):
    A = PresentedAlgebra.make("e c")
    f = A.parse(f"e^{k}")
    bm = bundle_modify(A, f, A.ring.const(a0), A.ring.one())
    assert bm.verify_charts()
    assert check_well_defined(bm.derivation())
    assert bm.presentation.is_zero(bm.u_relation())


def test_bundle_modification_needs_unit_ideal():
    A = PresentedAlgebra.make("e c")
    with pytest.raises(UnitIdealCheckFailed):
        bundle_modify(A, A.parse("e"), A.parse("0"), A.parse("e*c"))
