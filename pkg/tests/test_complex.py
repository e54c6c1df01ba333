import pytest

from conftest import upto
from kht import BN, LEE, QQ, Field, build_complex, check_frobenius, graded_euler, parse_pd, resolve, torus_knot
from kht.complex import ONE, X, FrobeniusSystem
from kht.oracle import build_lee_complex
from oracles import jones_oracle, jones_to_euler

LH_TREFOIL = "PD[X[1,4,2,5],X[3,6,4,1],X[5,2,6,3]]"


def test_frobenius_systems_pass():
    for f in (QQ, Field(2), Field(3)):
        assert check_frobenius(BN, f)
        assert check_frobenius(LEE, f)


def test_corrupted_comultiplication_fails():
    bad = FrobeniusSystem("bad", BN.mult, {ONE: BN.comult[ONE], X: ((1, 0, X, X), (1, 1, ONE, X))},
                          BN.counit, validate=False)
    res = check_frobenius(bad)
    assert not res and res.violations


def test_resolve_trefoil():
    d = parse_pd(LH_TREFOIL)
    assert len(resolve(d, 0).circles) == 3
    assert len(resolve(d, 0b111).circles) == 2
    assert len(resolve(d, (1, 0, 0)).circles) == 2
    r = resolve(d, 0)
    assert d.basepoint in r.circles[r.basepoint_circle]
    with pytest.raises(ValueError):
        resolve(d, 8)


def _circle_counts(d):
    return [len(resolve(d, s).circles) for s in range(1 << d.n_crossings)]


@pytest.mark.parametrize("name", [e.name for e in upto(7)])
def test_structure_and_counts(name):
    d = next(e.pd for e in upto(7) if e.name == name)
    counts = _circle_counts(d)
    for f in (QQ, Field(3)):
        un = build_complex(d, BN, False, f)
        red = build_complex(d, BN, True, f)
        lee = build_lee_complex(d, f)
        assert len(un) == sum(2 ** c for c in counts)
        assert len(red) == len(lee) == sum(2 ** (c - 1) for c in counts)
        for c in (un, red, lee):
            assert c.check() == []


def test_right_handed_trefoil_degrees():
    c = build_complex(torus_knot(2, 3), BN, True)
    assert min(i for i, _ in c.gens) == 0 and max(i for i, _ in c.gens) == 3
    mirror = build_complex(parse_pd(LH_TREFOIL), BN, True)
    assert max(i for i, _ in mirror.gens) == 0


def test_unknot_complexes():
    u = parse_pd("PD[]")
    assert build_complex(u, BN, True).gens == [(0, -1)]
    assert sorted(build_complex(u, BN, False).gens) == [(0, -1), (0, 1)]
    with pytest.raises(ValueError):
        build_complex(u, LEE, True)


@pytest.mark.parametrize("e", upto(8), ids=lambda e: e.name)
def test_euler_is_jones(e):
    v = jones_oracle(e.pd.crossings)
    assert graded_euler(build_complex(e.pd, BN, True)) == jones_to_euler(v, True)
    assert graded_euler(build_complex(e.pd, BN, False)) == jones_to_euler(v, False)


def test_dump_format():
    text = build_complex(torus_knot(2, 3), BN, True).dump()
    assert text.startswith("GEN 0 ")
    assert any(line.startswith("DIF ") for line in text.splitlines())
