import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import DATA, table10
from kht.diagram import UNKNOT, DiagramError, TableError, load_table, parse_pd, parse_table_line, torus_knot

LH_TREFOIL = "PD[X[1,4,2,5],X[3,6,4,1],X[5,2,6,3]]"


def test_parse_trefoil():
    d = parse_pd(LH_TREFOIL)
    assert (d.n_crossings, d.n_edges, d.n_components) == (3, 6, 1)
    assert (d.n_plus, d.n_minus, d.writhe) == (0, 3, -3)
    assert d.basepoint == 1


def test_parse_variants():
    a = parse_pd(LH_TREFOIL)
    b = parse_pd(" PD[ X[1, 4,2,5], X[3,6,4,1],\nX[5,2,6,3] ] ")
    c = parse_pd("[(1,4,2,5),(3,6,4,1),(5,2,6,3)]")
    assert a == b == c
    assert parse_pd("PD[]") == UNKNOT


@pytest.mark.parametrize("text", [
    "PD[X[1,4,2,5],X[3,6,4,1]]",
    "PD[X[1,4,2,5,6]]",
    "PD[X[1,4,2,5],X[3,6,4,1],X[5,2,6,3]",
    "PD[Y[1,1,2,2]]",
    "hello",
    "PD[X[1,2,3,4],X[5,6,7,8]]",
])
def test_parse_errors(text):
    with pytest.raises(DiagramError):
        parse_pd(text)


def test_require_knot():
    hopf = "PD[X[4,1,3,2],X[2,3,1,4]]"
    assert parse_pd(hopf).n_components == 2
    with pytest.raises(DiagramError):
        parse_pd(hopf, require_knot=True)


def test_basepoint():
    d = parse_pd(LH_TREFOIL, basepoint=4)
    assert d.basepoint == 4
    with pytest.raises(DiagramError):
        d.with_basepoint(7)
    with pytest.raises(DiagramError):
        UNKNOT.with_basepoint(1)


def test_mirror_flips_signs():
    d = parse_pd(LH_TREFOIL)
    m = d.mirror()
    assert (m.n_plus, m.n_minus) == (3, 0)
    assert m.mirror().signs == d.signs


def test_torus_knots():
    t = torus_knot(2, 3)
    assert t.to_pd() == "PD[X[1,5,2,4],X[5,3,6,2],X[3,1,4,6]]"
    assert (t.n_plus, t.n_minus) == (3, 0)
    big = torus_knot(5, 6)
    assert (big.n_crossings, big.n_components, big.n_plus) == (24, 1, 24)
    with pytest.raises(DiagramError):
        torus_knot(2, 2)
    with pytest.raises(DiagramError):
        torus_knot(1, 5)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, len(table10()) - 1))
def test_pd_round_trip(i):
    d = table10()[i].pd
    assert parse_pd(d.to_pd()) == d


def test_every_table_entry_is_a_knot():
    ents = table10()
    assert len(ents) == 249
    assert sum(1 for e in ents if int(e.name.split("_")[0]) <= 9) == 84
    assert all(e.pd.is_knot and e.pd.n_edges == 2 * e.pd.n_crossings for e in ents)
    assert len(load_table(DATA / "knots9.csv", strict=True)) == 84


def test_table_lines(tmp_path):
    e = parse_table_line("3_1,PD[X[1,4,2,5],X[3,6,4,1],X[5,2,6,3]]")
    assert e.name == "3_1" and e.pd.n_crossings == 3
    e = parse_table_line("k,PD[X[1,4,2,5],X[3,6,4,1],X[5,2,6,3]],q=1,f2=1,f3.pages=2")
    assert e.expected_xo == {"q": 1, "f2": 1} and e.expected_pages == {"f3": 2}
    assert parse_table_line("# comment") is None
    empty = tmp_path / "empty.csv"
    empty.write_text("")
    assert load_table(empty) == []
    bad = tmp_path / "bad.csv"
    bad.write_text("ok,PD[X[1,4,2,5],X[3,6,4,1],X[5,2,6,3]]\nbad,PD[X[1,4,2,5,7]]\n")
    errors = []
    assert [x.name for x in load_table(bad, errors=errors)] == ["ok"]
    assert errors[0].lineno == 2
    with pytest.raises(TableError) as exc:
        load_table(bad, strict=True)
    assert exc.value.lineno == 2
