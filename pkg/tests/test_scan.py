import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import bn_prof, table10, upto
from kht import (BN, LEE, QQ, Field, build_complex, gauss_eliminate, graded_euler, parse_pd, scan_build,
                 smith_decompose, torus_knot)
from kht.scan import SCAN_ORDERS


def _full(d, reduced, f):
    return smith_decompose(gauss_eliminate(build_complex(d, BN, reduced, f)))


def _scan(d, reduced, f, **kw):
    c = scan_build(d, BN, reduced, f, **kw)
    assert c.check() == []
    return smith_decompose(gauss_eliminate(c))


@pytest.mark.parametrize("order", SCAN_ORDERS)
@pytest.mark.parametrize("reduced", [True, False])
def test_trefoil_and_t27(order, reduced):
    for d in (torus_knot(2, 3), torus_knot(2, 7), parse_pd("PD[X[1,4,2,5],X[3,6,4,1],X[5,2,6,3]]")):
        for f in (QQ, Field(2), Field(3)):
            assert _scan(d, reduced, f, order=order) == _full(d, reduced, f)


def test_unknot_passthrough():
    u = parse_pd("PD[]")
    assert scan_build(u, BN, True).gens == build_complex(u, BN, True).gens


def test_euler_preserved():
    d = torus_knot(3, 5)
    for reduced in (True, False):
        assert graded_euler(scan_build(d, BN, reduced)) == graded_euler(build_complex(d, BN, reduced))


def test_lee_system_unreduced():
    d = torus_knot(2, 5)
    a = smith_decompose(gauss_eliminate(scan_build(d, LEE, False, QQ)))
    b = smith_decompose(gauss_eliminate(build_complex(d, LEE, False, QQ)))
    assert a == b
    with pytest.raises(ValueError):
        scan_build(d, LEE, True)


def test_bad_order():
    with pytest.raises(ValueError):
        scan_build(torus_knot(2, 3), BN, True, order="spiral")


@settings(max_examples=30, deadline=None)
@given(st.integers(0, len(table10()) - 1), st.sampled_from(SCAN_ORDERS), st.booleans())
def test_matches_cube_on_table(i, order, reduced):
    e = table10()[i]
    assert _scan(e.pd, reduced, QQ, order=order) == bn_prof(e.name, 0, reduced)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, len(upto(8)) - 1), st.data())
def test_basepoint_choice(i, data):
    e = upto(8)[i]
    b = data.draw(st.sampled_from(list(e.pd.edges())))
    assert _scan(e.pd.with_basepoint(b), True, Field(3)) == bn_prof(e.name, 3)


@pytest.mark.slow
def test_t56_over_f2():
    p = _scan(torus_knot(5, 6), True, Field(2), order="greedy")
    assert p.max_k == 3 and p.free == ((0, 19),)
