from dataclasses import replace

import pytest

from gext.affext import CHECK_NAMES, certify_extension, fiber_over_origin, synthesize_extension
from gext.blowup import chain_tower, fork_tower
from gext.cech import Cocycle
from gext.errors import TrivialNearO

SL2 = Cocycle.parse("x^-1*y^-1")

TOWERS = [(chain_tower(n), 1, (2, 1, 0)) for n in (1, 2, 3)] + \
         [(fork_tower(n), 2, (4, 3, 2, 1, 0)) for n in (1, 2)]


@pytest.fixture(scope="module")
def sl2_chain2():
    return synthesize_extension(SL2, chain_tower(2))


@pytest.mark.parametrize("tower,mult,trace", TOWERS, ids=lambda v: getattr(v, "name", None))
def test_sl2_synthesis_certifies(tower, mult, trace):
    e = synthesize_extension(SL2, tower)
    assert e.level_trace == trace
    assert e.certification.passed
    assert tuple(e.certification.statuses()) == CHECK_NAMES
    _, verdict, m = fiber_over_origin(e)
    assert verdict and m == mult


def test_higher_class_on_chain():
    c = Cocycle.from_mnp(2, 2, "x+y")
    e = synthesize_extension(c, chain_tower(2))
    assert e.level_trace[0] == 3 and e.level_trace[-1] == 0
    assert certify_extension(e, c).passed


def test_coboundary_shift_is_still_the_same_class():
    c = Cocycle.parse("x^-1*y^-1 + x^2 + y^-3")
    e = synthesize_extension(c, chain_tower(2))
    assert e.certification.passed


def _with_py_px(e, image):
    t = e.transitions[0]
    assert (t.source, t.target) == ("Py", "Px")
    m = replace(t.morphism, images={**t.morphism.images, "sy": t.morphism.target.parse(image)})
    return replace(e, transitions=(replace(t, morphism=m),) + e.transitions[1:])


def test_scaled_transition_is_not_equivariant(sl2_chain2):
    cert = certify_extension(_with_py_px(sl2_chain2, "2*sx + x^-1*y^-1"), SL2)
    st = cert.statuses()
    assert st["transitions_equivariant"] == "fail"
    detail = next(c.detail for c in cert.checks if c.name == "transitions_equivariant")
    assert "Py -> Px" in detail


def test_wrong_class_is_caught_by_restriction(sl2_chain2):
    cert = certify_extension(_with_py_px(sl2_chain2, "sx + 2*x^-1*y^-1"), SL2)
    st = cert.statuses()
    assert st["transitions_equivariant"] == "pass"
    assert st["restriction_matches_input"] == "fail"


def test_coboundary_perturbation_is_accepted(sl2_chain2):
    assert certify_extension(_with_py_px(sl2_chain2, "sx + x^-1*y^-1 + x"), SL2).passed


def test_trivial_cocycle_is_rejected():
    with pytest.raises(TrivialNearO):
        synthesize_extension(Cocycle.parse("x^-2 + y"), chain_tower(2))
