import sys
from functools import lru_cache
from pathlib import Path

import pytest

HERE = Path(__file__).parent
sys.path.insert(0, str(HERE))

from kht import load_table  # noqa: E402

DATA = Path(__file__).resolve().parents[1] / "src" / "kht" / "data"


@lru_cache(maxsize=None)
def table10():
    return tuple(load_table(DATA / "knots10.csv", strict=True))


@lru_cache(maxsize=None)
def knotinfo():
    """name -> (jones, reduced rational Khovanov polynomial) from KnotInfo."""
    out = {}
    for line in (HERE / "data" / "knotinfo10.csv").read_text().splitlines():
        if line and not line.startswith("#"):
            name, jones, kh = line.split("|")
            out[name] = (jones, kh)
    return out


def upto(n):
    return [e for e in table10() if int(e.name.split("_")[0]) <= n]


@pytest.fixture
def knots():
    return table10()


@lru_cache(maxsize=None)
def bn_prof(name, p, reduced=True, scan=False):
    from kht import Field, bn_profile
    d = {e.name: e.pd for e in table10()}[name]
    return bn_profile(d, Field(p), reduced=reduced, scan=scan)


def parse_khovanov(text):
    """KnotInfo 't^(i)*q^(j)' sum -> {(i, j): dim}."""
    import re
    out = {}
    for term in text.replace(" ", "").split("+"):
        coeff, i, j = 1, 0, 0
        for factor in term.split("*"):
            m = re.fullmatch(r"([tq])(?:\^\(?(-?\d+)\)?)?", factor)
            if m:
                v = int(m.group(2)) if m.group(2) else 1
                if m.group(1) == "t":
                    i = v
                else:
                    j = v
            else:
                coeff = int(factor)
        out[(i, j)] = out.get((i, j), 0) + coeff
    return out
