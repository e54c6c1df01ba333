"""Independent reference computations used by the tests.

Nothing here goes through the elimination or Smith code of the package.
"""

from __future__ import annotations

import re
from collections import Counter, defaultdict
from itertools import product

from sympy import QQ as SQQ
from sympy.polys.domains import GF
from sympy.polys.matrices import DomainMatrix


# --- Jones polynomial from the Kauffman bracket ---------------------------

def _loops(crossings, state):
    parent = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for (a, b, c, d), s in zip(crossings, state):
        for u, v in (((a, b), (c, d)) if s == 0 else ((a, d), (b, c))):
            parent[find(u)] = find(v)
    return len({find(x) for x in parent})


def _writhe(crossings):
    """Sign from consecutive edge labels along the orientation: over strand d -> b."""
    n = 2 * len(crossings)
    w = 0
    for a, b, c, d in crossings:
        if (b - d) % n == 1:
            w += 1
        elif (d - b) % n == 1:
            w -= 1
        else:
            raise ValueError("oracle needs edges labeled consecutively along the knot")
    return w


def jones_oracle(crossings):
    """V(t) as {exponent of t: coefficient} (integer exponents for knots).

    State sum <D> = sum A^(#A - #B) d^(loops-1), d = -A^2 - A^-2; the A
    smoothing joins a-b and c-d.  V = (-A^3)^(-w) <D> at A = t^(-1/4).
    """
    if not crossings:
        return {0: 1}
    bracket = Counter()
    for state in product((0, 1), repeat=len(crossings)):
        na = state.count(0)
        poly = Counter({na - (len(state) - na): 1})
        for _ in range(_loops(crossings, state) - 1):
            nxt = Counter()
            for e, c in poly.items():
                nxt[e + 2] -= c
                nxt[e - 2] -= c
            poly = nxt
        bracket.update(poly)
    w = _writhe(crossings)
    sign = -1 if w % 2 else 1
    out = {}
    for e, c in bracket.items():
        if not c:
            continue
        e2 = e - 3 * w
        assert e2 % 4 == 0
        out[-e2 // 4] = sign * c
    return {k: v for k, v in sorted(out.items()) if v}


def parse_knotinfo_jones(text):
    """KnotInfo Jones string like 't+ t^3-t^4' or 't^(-2)-t^(-1)+1-t+t^2'."""
    s = text.replace(" ", "").replace("(", "").replace(")", "")
    out = {}
    for sign, coeff, var, exp in re.findall(r"([+-]?)(\d*)(\*?t?)(?:\^(-?\d+))?", s):
        if not coeff and not var:
            continue
        c = int(coeff) if coeff else 1
        if sign == "-":
            c = -c
        e = (int(exp) if exp else 1) if "t" in var else 0
        out[e] = out.get(e, 0) + c
    return {k: v for k, v in sorted(out.items()) if v}


def jones_to_euler(v, reduced):
    """Graded Euler characteristic in the package's q: reduced q^-1 V(q^2),
    unreduced (q + q^-1) V(q^2)."""
    out = Counter()
    for e, c in v.items():
        if reduced:
            out[2 * e - 1] += c
        else:
            out[2 * e + 1] += c
            out[2 * e - 1] += c
    return {k: c for k, c in sorted(out.items()) if c}


# --- homology of C / U^m by plain linear algebra --------------------------

def _domain(p):
    return SQQ if p == 0 else GF(p)


def truncated_homology(c, m):
    """dim H(C / U^m) per (homdeg, qdeg); basis U^j g for j < m."""
    p = c.field.p
    dom = _domain(p)
    cells = defaultdict(list)
    for g, (i, q) in enumerate(c.gens):
        for j in range(m):
            cells[(i, q - 2 * j)].append((g, j))
    index = {key: {cell: n for n, cell in enumerate(v)} for key, v in cells.items()}

    def rank(src_key):
        i, q = src_key
        tgt_key = (i + 1, q)
        if tgt_key not in cells or src_key not in cells:
            return 0
        rows = len(cells[tgt_key])
        cols = len(cells[src_key])
        mat = [[dom.zero] * cols for _ in range(rows)]
        tidx = index[tgt_key]
        for col, (g, j) in enumerate(cells[src_key]):
            for h, (coef, k) in c.d.get(g, {}).items():
                if j + k < m:
                    mat[tidx[(h, j + k)]][col] = dom.convert(int(coef) if p else coef)
        return DomainMatrix(mat, (rows, cols), dom).rank()

    dims = {}
    for key, cs in cells.items():
        i, q = key
        z = len(cs) - rank(key)
        b = rank((i - 1, q))
        if z - b:
            dims[key] = z - b
    return dims


def predicted_truncated(profile, m):
    """dim H(C / U^m) implied by a torsion profile."""
    dims = Counter()
    for i, q in profile.free:
        for j in range(m):
            dims[(i, q - 2 * j)] += 1
    for i, q, k in profile.pairs:
        for j in range(max(0, m - k), m):
            dims[(i, q - 2 * j)] += 1
        for j in range(min(k, m)):
            dims[(i + 1, q + 2 * k - 2 * j)] += 1
    return {k: v for k, v in dims.items() if v}


def homology_at_unit(c, value=1):
    """Total dim of H(C at U = value) (ungraded)."""
    p = c.field.p
    dom = _domain(p)
    by_deg = defaultdict(list)
    for g, (i, _) in enumerate(c.gens):
        by_deg[i].append(g)
    pos = {g: n for gs in by_deg.values() for n, g in enumerate(gs)}

    def rank(i):
        if i not in by_deg or i + 1 not in by_deg:
            return 0
        rows, cols = len(by_deg[i + 1]), len(by_deg[i])
        mat = [[dom.zero] * cols for _ in range(rows)]
        for g in by_deg[i]:
            for h, (coef, k) in c.d.get(g, {}).items():
                v = dom.convert(int(coef) if p else coef) * dom.convert(value) ** k
                mat[pos[h]][pos[g]] += v
        return DomainMatrix(mat, (rows, cols), dom).rank()

    return sum(len(gs) - rank(i) - rank(i - 1) for i, gs in by_deg.items())
