"""Planar diagram codes: parsing, validation, orientation, torus knots, knot tables.

PD convention: each crossing ``X[a,b,c,d]`` lists its four edge labels
counterclockwise, starting from the incoming under-strand (so the under-strand
runs a -> c).  The crossing is positive when the over-strand runs d -> b.
See ``docs/conventions.md`` for the smoothing and grading conventions built on
top of this.
"""

from __future__ import annotations

import ast
import logging
import re
from dataclasses import dataclass, field
from math import gcd
from pathlib import Path

__all__ = [
    "Diagram",
    "DiagramError",
    "KnotTableEntry",
    "TableError",
    "parse_pd",
    "torus_knot",
    "load_table",
    "parse_table_line",
    "UNKNOT",
]

log = logging.getLogger(__name__)


class DiagramError(ValueError):
    pass


class TableError(ValueError):
    def __init__(self, lineno: int, msg: str):
        super().__init__(f"line {lineno}: {msg}")
        self.lineno = lineno


@dataclass(frozen=True)
class Diagram:
    """Validated oriented diagram.

    ``basepoint`` is an edge label; the 0-crossing unknot uses basepoint 0 for
    its single marked circle.
    """

    crossings: tuple[tuple[int, int, int, int], ...]
    basepoint: int
    signs: tuple[int, ...]
    n_components: int

    @property
    def n_crossings(self) -> int:
        return len(self.crossings)

    @property
    def n_edges(self) -> int:
        return 2 * len(self.crossings)

    @property
    def n_plus(self) -> int:
        return sum(1 for s in self.signs if s > 0)

    @property
    def n_minus(self) -> int:
        return sum(1 for s in self.signs if s < 0)

    @property
    def writhe(self) -> int:
        return sum(self.signs)

    @property
    def is_knot(self) -> bool:
        return self.n_components == 1

    def edges(self) -> range:
        return range(1, self.n_edges + 1)

    def with_basepoint(self, edge: int) -> Diagram:
        if not self.crossings:
            if edge != 0:
                raise DiagramError("the 0-crossing unknot only has basepoint 0")
            return self
        if not 1 <= edge <= self.n_edges:
            raise DiagramError(f"basepoint {edge} is not an edge label")
        return Diagram(self.crossings, edge, self.signs, self.n_components)

    def mirror(self) -> Diagram:
        """Mirror image: rotate every crossing by one slot."""
        return _build(tuple((b, c, d, a) if s < 0 else (d, a, b, c)
                            for (a, b, c, d), s in zip(self.crossings, self.signs)),
                      self.basepoint)

    def to_pd(self) -> str:
        inner = ",".join("X[%d,%d,%d,%d]" % x for x in self.crossings)
        return f"PD[{inner}]"

    def __str__(self):
        return self.to_pd()


UNKNOT = Diagram((), 0, (), 1)


def _orient(crossings) -> tuple[tuple[int, ...], int]:
    """Trace strands; return per-crossing signs and the component count."""
    slots: dict[int, list[tuple[int, int]]] = {}
    for i, x in enumerate(crossings):
        for pos, e in enumerate(x):
            slots.setdefault(e, []).append((i, pos))

    def other(e, here):
        a, b = slots[e]
        return b if a == here else a

    entered: dict[tuple[int, int], bool] = {}
    n_comp = 0
    starts = [(i, 0) for i in range(len(crossings))]
    starts += [(i, p) for i in range(len(crossings)) for p in (1, 3)]
    for start in starts:
        if start in entered:
            continue
        n_comp += 1
        here = start
        while True:
            if here in entered:
                break
            i, pos = here
            out = (i, (pos + 2) % 4)
            if (out in entered) or (pos == 2):
                raise DiagramError(f"inconsistent orientation at crossing {i + 1}")
            entered[here] = True
            entered[out] = False
            here = other(crossings[i][out[1]], out)
        if here != start:
            raise DiagramError("strand tracing did not close up")
    signs = []
    for i in range(len(crossings)):
        if entered.get((i, 0)) is not True:
            raise DiagramError(f"under-strand of crossing {i + 1} is not incoming at slot 1")
        signs.append(1 if entered[(i, 3)] else -1)
    return tuple(signs), n_comp


def _build(crossings, basepoint=None) -> Diagram:
    if not crossings:
        return UNKNOT
    counts: dict[int, int] = {}
    for x in crossings:
        if len(x) != 4:
            raise DiagramError(f"crossing {list(x)} does not have 4 entries")
        for e in x:
            if not isinstance(e, int):
                raise DiagramError(f"edge label {e!r} is not an integer")
            counts[e] = counts.get(e, 0) + 1
    bad = sorted(e for e, c in counts.items() if c != 2)
    if bad:
        raise DiagramError(f"edge labels {bad} do not appear exactly twice")
    n_edges = 2 * len(crossings)
    if set(counts) != set(range(1, n_edges + 1)):
        raise DiagramError(f"edge labels must be exactly 1..{n_edges}")
    crossings = tuple(tuple(x) for x in crossings)
    signs, n_comp = _orient(crossings)
    bp = 1 if basepoint is None else basepoint
    if bp not in counts:
        raise DiagramError(f"basepoint {bp} is not an edge label")
    return Diagram(crossings, bp, signs, n_comp)


_X_RE = re.compile(r"X\[([^\[\]]*)\]")


def parse_pd(text: str, basepoint: int | None = None, require_knot: bool = False) -> Diagram:
    """Parse ``PD[X[a,b,c,d],...]`` or a bare list of 4-tuples."""
    s = "".join(text.split())
    if s.startswith("PD[") and s.endswith("]"):
        inner = s[3:-1]
        groups = _X_RE.findall(inner)
        if ",".join(f"X[{g}]" for g in groups) != inner:
            raise DiagramError(f"malformed PD code: {text!r}")
        try:
            crossings = [tuple(int(v) for v in g.split(",")) for g in groups]
        except ValueError as exc:
            raise DiagramError(f"malformed PD code: {text!r}") from exc
    elif s.startswith("["):
        try:
            value = ast.literal_eval(s)
        except (ValueError, SyntaxError) as exc:
            raise DiagramError(f"malformed PD list: {text!r}") from exc
        if not isinstance(value, (list, tuple)) or not all(
                isinstance(x, (list, tuple)) for x in value):
            raise DiagramError(f"malformed PD list: {text!r}")
        crossings = [tuple(x) for x in value]
    else:
        raise DiagramError(f"unrecognized diagram syntax: {text!r}")
    d = _build(crossings, basepoint)
    if basepoint is not None and not crossings and basepoint != 0:
        raise DiagramError("the 0-crossing unknot only has basepoint 0")
    if require_knot and not d.is_knot:
        raise DiagramError(f"diagram has {d.n_components} components; a knot is required")
    return d


def torus_knot(p: int, q: int) -> Diagram:
    """Closure of the positive braid (s_1 s_2 ... s_{p-1})^q on p strands."""
    if p < 2 or q < 2:
        raise DiagramError("torus_knot needs p, q >= 2")
    if gcd(p, q) != 1:
        raise DiagramError(f"T({p},{q}) is not a knot: gcd(p, q) != 1")
    start = list(range(p))
    cur = list(start)
    nxt = p
    raw = []
    for _ in range(q):
        for i in range(p - 1):
            lo_in, hi_in = cur[i], cur[i + 1]
            lo_out, hi_out = nxt, nxt + 1
            nxt += 2
            # positive crossing: strand from position i+1 passes under to i
            raw.append([hi_in, hi_out, lo_out, lo_in])
            cur[i], cur[i + 1] = lo_out, hi_out
    close = dict(zip(cur, start))
    raw = [[close.get(e, e) for e in x] for x in raw]
    # relabel 1..2n along the orientation
    slots: dict[int, list[tuple[int, int]]] = {}
    for i, x in enumerate(raw):
        for pos, e in enumerate(x):
            slots.setdefault(e, []).append((i, pos))
    label: dict[int, int] = {}
    i, pos = 0, 0
    while raw[i][pos] not in label:
        e = raw[i][pos]
        label[e] = len(label) + 1
        out = (pos + 2) % 4
        e_out = raw[i][out]
        if e_out in label:
            break
        a, b = slots[e_out]
        i, pos = b if a == (i, out) else a
    return _build(tuple(tuple(label[e] for e in x) for x in raw))


@dataclass(frozen=True)
class KnotTableEntry:
    name: str
    pd: Diagram
    expected_xo: dict = field(default_factory=dict)
    expected_pages: dict = field(default_factory=dict)


def _split_pd(rest: str) -> tuple[str, str]:
    depth = 0
    for i, ch in enumerate(rest):
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
            if depth == 0:
                return rest[: i + 1], rest[i + 1:]
        elif ch == "," and depth == 0:
            return rest[:i], rest[i:]
    return rest, ""


def parse_table_line(line: str, lineno: int = 0) -> KnotTableEntry | None:
    """Parse one ``name,PD[...][,field=xo][,field.pages=n]`` line; None for blanks/comments."""
    s = line.strip()
    if not s or s.startswith("#"):
        return None
    name, sep, rest = s.partition(",")
    name = name.strip()
    if not sep or not name:
        raise TableError(lineno, "expected 'name,PD'")
    pd_text, tail = _split_pd(rest.strip())
    try:
        d = parse_pd(pd_text)
    except DiagramError as exc:
        raise TableError(lineno, str(exc)) from exc
    xo, pages = {}, {}
    for col in tail.split(","):
        col = col.strip()
        if not col:
            continue
        key, eq, val = col.partition("=")
        if not eq:
            raise TableError(lineno, f"bad regression column {col!r}")
        key = key.strip().lower()
        try:
            value = int(val)
        except ValueError:
            raise TableError(lineno, f"bad regression value {col!r}") from None
        if key.endswith(".pages"):
            pages[key[:-6]] = value
        else:
            xo[key] = value
    return KnotTableEntry(name, d, xo, pages)


def load_table(path, strict: bool = False, errors: list | None = None) -> list[KnotTableEntry]:
    """Read a knot table; bad lines are skipped with a warning unless ``strict``."""
    entries = []
    text = Path(path).read_text(encoding="utf-8")
    for lineno, line in enumerate(text.splitlines(), start=1):
        try:
            entry = parse_table_line(line, lineno)
        except TableError as exc:
            if strict:
                raise
            log.warning("skipping %s: %s", path, exc)
            if errors is not None:
                errors.append(exc)
            continue
        if entry is not None:
            entries.append(entry)
    return entries
