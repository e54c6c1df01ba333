import pytest

from conftest import upto
from kht import (BN, LEE, QQ, Field, UnsupportedFieldError, build_complex, gauss_eliminate, lee_profile,
                 parse_pd, smith_decompose, torus_knot, verify_phi, verify_theorem, xo_via_lee)
from kht.complex import ONE, X, FrobeniusSystem
from kht.oracle import build_lee_complex
from oracles import homology_at_unit

ODD = [QQ, Field(3), Field(5), Field(7)]


def test_unknot():
    u = parse_pd("PD[]")
    for f in ODD:
        rep = verify_theorem(u, f, "unknot")
        assert (rep.xo_lee, rep.pages_bn, rep.equal) == (0, 1, True)


def test_trefoil_report():
    rep = verify_theorem(torus_knot(2, 3), QQ, "3_1")
    assert (rep.xo_lee, rep.pages_bn, rep.equal) == (1, 2, True)
    j = rep.to_json()
    assert j["theorem_ok"] is True and j["xo"] == 1 and j["pages"] == 2


def test_char_two_rejected():
    with pytest.raises(UnsupportedFieldError):
        xo_via_lee(torus_knot(2, 3), Field(2))
    with pytest.raises(UnsupportedFieldError):
        verify_theorem(torus_knot(2, 3), Field(2))


@pytest.mark.parametrize("e", upto(7), ids=lambda e: e.name)
def test_lee_at_unit_values(e):
    # T = 1: the basepoint eigenvalues +1 and -1 each carry one generator
    for f in (QQ, Field(5)):
        c = build_lee_complex(e.pd, f)
        assert homology_at_unit(c, 1) == 1
        assert homology_at_unit(c, -1) == 1
        assert len(lee_profile(e.pd, f).free) == 1


@pytest.mark.parametrize("e", upto(7)[::3], ids=lambda e: e.name)
def test_basepoint_independence(e):
    xs = {xo_via_lee(e.pd.with_basepoint(b), QQ) for b in e.pd.edges()}
    assert len(xs) == 1


@pytest.mark.parametrize("e", upto(7)[::2], ids=lambda e: e.name)
def test_bn_and_lee_unreduced_agree_under_phi(e):
    for f in (QQ, Field(3)):
        a = smith_decompose(gauss_eliminate(build_complex(e.pd, BN, False, f)))
        b = smith_decompose(gauss_eliminate(build_complex(e.pd, LEE, False, f)))
        assert a == b


@pytest.mark.parametrize("f", ODD, ids=str)
def test_phi(f):
    w = verify_phi(f)
    assert w.ok, w.checks
    assert w.comult_twist == f("1/2")
    assert w.counit_twist == f(2)
    assert w.to_json(f)["ok"] is True


def test_phi_mutations():
    f = QQ
    half = f("1/2")
    # Phi(X) = (X - S)/2
    assert not verify_phi(f, phi_x=({1: f.neg(half)}, {0: half}))
    bn_bad = FrobeniusSystem("BN", BN.mult, {ONE: BN.comult[ONE], X: ((1, 0, X, X), (1, 1, ONE, X))},
                             BN.counit, validate=False)
    assert not verify_phi(f, bn=bn_bad)
    lee_bad = FrobeniusSystem("LEE", LEE.mult, {ONE: LEE.comult[ONE], X: ((1, 0, X, X),)},
                              LEE.counit, validate=False)
    assert not verify_phi(f, lee=lee_bad)


def test_phi_needs_odd_characteristic():
    with pytest.raises(UnsupportedFieldError):
        verify_phi(Field(2))


@pytest.mark.parametrize("e", upto(6), ids=lambda e: e.name)
def test_lee_at_t_equal_one(e):
    # the F[S]-complex of the Lee system, S = 1 (so T = 1): total homology 2
    for f in (QQ, Field(3)):
        assert homology_at_unit(build_complex(e.pd, LEE, False, f), 1) == 2
