"""Scanning construction of the Bar-Natan complex, one crossing at a time.

The partial complex lives in the category of crossingless matchings and dotted
cobordisms over F[U]: an object is a matching of the current boundary points
with q- and homological shifts, and a morphism is a combination of cobordisms
whose components are disks bounded by the cycles of ``src u tgt``, each disk
dotted or not.  Gluing a crossing may close loops, which are delooped
(a loop becomes two copies of the object, labeled 1 at q+1 and X at q-1), and
isomorphisms c*id are cancelled after every step.

Every composite surface is evaluated through the Frobenius tables: a connected
piece with b boundary circles, genus g and d dots is
``Delta^(b-1)(X^d * handle^g)`` with ``handle = m(Delta(1))``; closed loops are
contracted against the delooping maps.

In reduced mode the basepoint edge is cut, so the final tangle has two
endpoints and one arc; End(arc) = A is pushed to F[U] along X -> U, which
realizes X.C for the Bar-Natan system.
"""

from __future__ import annotations

import heapq
from functools import lru_cache

from .complex import BN, GradedComplex, FrobeniusSystem, ONE, X
from .diagram import Diagram
from .ring import QQ, Field

__all__ = ["scan_build", "SCAN_ORDERS"]

SCAN_ORDERS = ("pd", "greedy")

# smoothing arcs between crossing ports 0..3 (ports hold a, b, c, d)
_SMOOTHING = {0: ((0, 1), (2, 3)), 1: ((0, 3), (1, 2))}


def _partner(m):
    out = {}
    for u, v in m:
        out[u] = v
        out[v] = u
    return out


@lru_cache(maxsize=None)
def _cycles(m1, m2):
    """Cycles of m1 u m2: (point -> cycle index, min point of each cycle)."""
    p1, p2 = _partner(m1), _partner(m2)
    where = {}
    mins = []
    for start in sorted(p1):
        if start in where:
            continue
        idx = len(mins)
        pts = []
        x = start
        while True:
            where[x] = idx
            pts.append(x)
            y = p1[x]
            where[y] = idx
            pts.append(y)
            x = p2[y]
            if x == start:
                break
        mins.append(min(pts))
    return where, tuple(mins)


class _Algebra:
    """Field-specific evaluation of surfaces through the Frobenius tables."""

    def __init__(self, sys: FrobeniusSystem, f: Field):
        self.sys = sys
        self.f = f
        self.mult = {key: [(f(c), k, r) for c, k, r in terms] for key, terms in sys.mult.items()}
        self.comult = {key: [(f(c), k, r1, r2) for c, k, r1, r2 in terms]
                       for key, terms in sys.comult.items()}
        self.counit = {key: [(f(c), k) for c, k in terms] for key, terms in sys.counit.items()}
        if self.counit[ONE] or [(c, k) for c, k in self.counit[X]] != [(f.one, 0)]:
            raise ValueError("scanning assumes eps(1) = 0 and eps(X) = 1")
        one = {(ONE, 0): f.one}
        self.x = {(X, 0): f.one}
        delta1 = self._comult_last({((ONE,), 0): f.one})
        handle = {}
        for (bs, k), c in delta1.items():
            for key, v in self._mul({(bs[0], k): c}, {(bs[1], 0): f.one}).items():
                self._acc(handle, key, v)
        self.handle = handle
        # top-loop projections: dual basis of {1, X} under eps(a*b)
        g = self._eps(self._mul(self.x, self.x))
        a_star = {(X, 0): f.one}
        for k, c in g.items():
            self._acc(a_star, (ONE, k), f.neg(c))
        self.bottom_fill = {0: one, 1: self.x}
        self.top_cap = {0: a_star, 1: one}
        self._tensor_cache = {}
        self._contract_cache = {}

    def _acc(self, acc, key, v):
        w = self.f.add(acc.get(key, self.f.zero), v)
        if w:
            acc[key] = w
        else:
            acc.pop(key, None)

    def _mul(self, u, v):
        f = self.f
        out = {}
        for (r1, k1), c1 in u.items():
            for (r2, k2), c2 in v.items():
                for c, k, r in self.mult[(r1, r2)]:
                    self._acc(out, (r, k1 + k2 + k), f.mul(f.mul(c1, c2), c))
        return out

    def _eps(self, u):
        f = self.f
        out = {}
        for (r, k), c in u.items():
            for c2, k2 in self.counit[r]:
                self._acc(out, k + k2, f.mul(c, c2))
        return out

    def _comult_last(self, elem):
        f = self.f
        out = {}
        for (bs, k), c in elem.items():
            for c2, k2, r1, r2 in self.comult[bs[-1]]:
                self._acc(out, (bs[:-1] + (r1, r2), k + k2), f.mul(c, c2))
        return out

    def tensor(self, b, dots, genus):
        """Delta^(b-1)(X^dots * handle^genus) as {pattern bitmask: {exp: c}}."""
        key = (b, dots, genus)
        hit = self._tensor_cache.get(key)
        if hit is not None:
            return hit
        f = self.f
        elem = {(ONE, 0): f.one}
        for _ in range(dots):
            elem = self._mul(elem, self.x)
        for _ in range(genus):
            elem = self._mul(elem, self.handle)
        t = {((r,), k): c for (r, k), c in elem.items()}
        for _ in range(b - 1):
            t = self._comult_last(t)
        out = {}
        for (bs, k), c in t.items():
            mask = 0
            for i, r in enumerate(bs):
                if r == X:
                    mask |= 1 << i
            out.setdefault(mask, {})[k] = c
        self._tensor_cache[key] = out
        return out

    def contract(self, fill, y):
        """eps(fill * basis[y]) as {exp: c}."""
        key = (id(fill), y)
        hit = self._contract_cache.get(key)
        if hit is None:
            hit = self._eps(self._mul(fill, {(y, 0): self.f.one}))
            self._contract_cache[key] = hit
        return hit


def _padd_into(acc, poly, f):
    for k, c in poly.items():
        w = f.add(acc.get(k, f.zero), c)
        if w:
            acc[k] = w
        else:
            acc.pop(k, None)


def _pmul(a, b, f):
    out = {}
    for i, x in a.items():
        for j, y in b.items():
            w = f.add(out.get(i + j, f.zero), f.mul(x, y))
            if w:
                out[i + j] = w
            else:
                out.pop(i + j, None)
    return out


def _union_find(n):
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[max(rx, ry)] = min(rx, ry)

    return find, union


def _evaluate(alg: _Algebra, n_pieces, glues, dotted, circles):
    """Evaluate a glued surface.

    ``circles`` lists boundary circles as ``(piece, kind, tag)`` with kind
    'open' (tag = output bit), 'bot' or 'top' (tag = loop index).  Returns
    {(botmask, topmask, dotmask): poly}, where botmask/topmask give the loop
    labels (bit set = X).
    """
    f = alg.f
    find, union = _union_find(n_pieces)
    for a, b in glues:
        union(a, b)
    chi = {}
    dots = {}
    for i in range(n_pieces):
        r = find(i)
        chi[r] = chi.get(r, 0) + 1
        if dotted[i]:
            dots[r] = dots.get(r, 0) + 1
    for a, _ in glues:
        r = find(a)
        chi[r] -= 1
    comp_circles = {}
    for piece, kind, tag in circles:
        comp_circles.setdefault(find(piece), []).append((kind, tag))
    result = {(0, 0, 0): {0: f.one}}
    for r, x in chi.items():
        circ = comp_circles.get(r, [])
        b = len(circ)
        if b == 0:
            # closed component; cannot occur for tangles with boundary in every piece
            raise AssertionError("closed surface component")
        twice_g = 2 - b - x
        if twice_g < 0 or twice_g % 2:
            raise AssertionError("inconsistent surface topology")
        tensor = alg.tensor(b, dots.get(r, 0), twice_g // 2)
        loops = [(i, kind, tag) for i, (kind, tag) in enumerate(circ) if kind != "open"]
        opens = [(i, tag) for i, (kind, tag) in enumerate(circ) if kind == "open"]
        part = {}
        for lab in range(1 << len(loops)):
            bm = tm = 0
            fills = []
            for j, (i, kind, tag) in enumerate(loops):
                lam = (lab >> j) & 1
                if kind == "bot":
                    bm |= lam << tag
                    fills.append((i, alg.bottom_fill[lam]))
                else:
                    tm |= lam << tag
                    fills.append((i, alg.top_cap[lam]))
            for pattern, poly in tensor.items():
                coeff = poly
                for i, fill in fills:
                    coeff = _pmul(coeff, alg.contract(fill, (pattern >> i) & 1), f)
                    if not coeff:
                        break
                if not coeff:
                    continue
                dm = 0
                for i, tag in opens:
                    if (pattern >> i) & 1:
                        dm |= tag
                key = (bm, tm, dm)
                acc = part.setdefault(key, {})
                _padd_into(acc, coeff, f)
                if not acc:
                    del part[key]
        new = {}
        for (b1, t1, d1), p1 in result.items():
            for (b2, t2, d2), p2 in part.items():
                key = (b1 | b2, t1 | t2, d1 | d2)
                acc = new.setdefault(key, {})
                _padd_into(acc, _pmul(p1, p2, f), f)
                if not acc:
                    del new[key]
        result = new
        if not result:
            break
    return result


def _to_monomials(terms, f):
    """{dotmask: poly} -> {dotmask: (c, k)}, checking homogeneity."""
    out = {}
    for dm, poly in terms.items():
        poly = {k: c for k, c in poly.items() if c}
        if not poly:
            continue
        if len(poly) != 1:
            raise AssertionError("inhomogeneous morphism")
        (k, c), = poly.items()
        out[dm] = (c, k)
    return out


class _Scanner:
    def __init__(self, alg: _Algebra, heuristic: str):
        self.alg = alg
        self.f = alg.f
        self.heuristic = heuristic
        self.boundary = frozenset()
        # objects: id -> (matching, q, h)
        self.objs = {0: ((), 0, 0)}
        self.out = {0: {}}
        self.inc = {0: {}}
        self.next_id = 1
        self._compose_cache = {}

    # --- gluing a crossing ---------------------------------------------------

    def add_crossing(self, ports):
        f = self.f
        bd = self.boundary
        glued = [l for l in ports if l in bd]
        counts = {}
        for l in ports:
            counts[l] = counts.get(l, 0) + 1
        self_pairs = []
        for l, c in counts.items():
            if c == 2 and l not in bd:
                i = ports.index(l)
                j = ports.index(l, i + 1)
                self_pairs.append((i, j))
        new_bd = (bd - set(glued)) | {l for l in ports if l not in bd and counts[l] == 1}
        port_of = {}
        for i, l in enumerate(ports):
            if l in bd:
                port_of[l] = i
        self_glue = {}
        for i, j in self_pairs:
            self_glue[i] = j
            self_glue[j] = i

        trace_cache = {}

        def trace(m, s):
            """Glue matching m with smoothing s: (new matching, loop count,
            arc-owner map old_arc -> ('a', new arc index) or ('l', loop index),
            list of new arcs as (u, v))."""
            key = (m, s)
            hit = trace_cache.get(key)
            if hit is not None:
                return hit
            pm = _partner(m)
            sp = {}
            for u, v in _SMOOTHING[s]:
                sp[u] = v
                sp[v] = u

            # nodes: boundary label l >= 1 (T side) or -(i+1) for port i
            def arc(node):
                if node > 0:
                    nxt = pm[node]
                    return nxt, ("T", min(node, nxt))
                i = -node - 1
                j = sp[i]
                return -(j + 1), ("X", min(i, j))

            def glue(node):
                if node > 0:
                    if node in port_of:
                        return -(port_of[node] + 1)
                    return None
                i = -node - 1
                if ports[i] in bd:
                    return ports[i]
                if i in self_glue:
                    return -(self_glue[i] + 1)
                return None

            def label(node):
                return node if node > 0 else ports[-node - 1]

            starts = [l for l in pm if l not in port_of] + \
                     [-(i + 1) for i in range(4) if glue(-(i + 1)) is None]
            seen = set()
            owner = {}
            arcs = []
            for st in starts:
                if st in seen:
                    continue
                cur = st
                idx = len(arcs)
                while True:
                    seen.add(cur)
                    nxt, aid = arc(cur)
                    seen.add(nxt)
                    owner[aid] = ("a", idx)
                    g = glue(nxt)
                    if g is None:
                        break
                    cur = g
                u, v = label(st), label(nxt)
                arcs.append((min(u, v), max(u, v)))
            loops = 0
            all_nodes = list(pm) + [-(i + 1) for i in range(4)]
            for st in all_nodes:
                if st in seen:
                    continue
                cur = st
                while cur not in seen:
                    seen.add(cur)
                    nxt, aid = arc(cur)
                    seen.add(nxt)
                    owner[aid] = ("l", loops)
                    cur = glue(nxt)
                loops += 1
            order = sorted(range(len(arcs)), key=lambda i: arcs[i])
            rank = {old: new for new, old in enumerate(order)}
            owner = {k: (t, rank[i]) if t == "a" else (t, i) for k, (t, i) in owner.items()}
            res = (tuple(arcs[i] for i in order), loops, owner)
            trace_cache[key] = res
            return res

        # new objects
        new_objs = {}
        new_ids = {}
        for oid, (m, q, h) in self.objs.items():
            for s in (0, 1):
                m2, nl, _ = trace(m, s)
                ids = []
                for lab in range(1 << nl):
                    nx = bin(lab).count("1")
                    nid = self.next_id
                    self.next_id += 1
                    new_objs[nid] = (m2, q + s + (nl - nx) - nx, h + s)
                    ids.append(nid)
                new_ids[(oid, s)] = ids
        new_out = {i: {} for i in new_objs}
        new_inc = {i: {} for i in new_objs}

        def put(src, tgt, terms):
            if not terms:
                return
            new_out[src][tgt] = terms
            new_inc[tgt][src] = terms

        glue_cache = {}

        def glued_map(m1, m2, s, dm):
            key = (m1, m2, s, dm)
            hit = glue_cache.get(key)
            if hit is not None:
                return hit
            where, mins = _cycles(m1, m2)
            nc = len(mins)
            n_pieces = nc + 2
            strip = {}
            for idx, (u, v) in enumerate(_SMOOTHING[s]):
                strip[u] = strip[v] = nc + idx
            glues = [(where[l], strip[port_of[l]]) for l in glued]
            glues += [(strip[i], strip[j]) for i, j in self_pairs]
            dotted = [bool(dm >> mins[c] & 1) for c in range(nc)] + [False, False]
            res = self._glued_eval(m1, m2, s, s, n_pieces, glues, dotted,
                                   lambda aid: where[aid[1]] if aid[0] == "T" else strip[aid[1]],
                                   lambda aid: where[aid[1]] if aid[0] == "T" else strip[aid[1]],
                                   trace)
            glue_cache[key] = res
            return res

        def saddle_map(m):
            n_pieces = len(m) + 1
            sad = len(m)
            owner_strip = {}
            for i, (u, v) in enumerate(m):
                owner_strip[u] = owner_strip[v] = i
            glues = [(owner_strip[l], sad) for l in glued]
            glues += [(sad, sad) for _ in self_pairs]
            dotted = [False] * n_pieces

            def piece(aid):
                return owner_strip[aid[1]] if aid[0] == "T" else sad

            return self._glued_eval(m, m, 0, 1, n_pieces, glues, dotted, piece, piece, trace)

        for (o1, row) in self.out.items():
            m1 = self.objs[o1][0]
            for o2, terms in row.items():
                m2 = self.objs[o2][0]
                for s in (0, 1):
                    acc = {}
                    for dm, (c, k) in terms.items():
                        for (bm, tm, dm2), poly in glued_map(m1, m2, s, dm).items():
                            slot = acc.setdefault((bm, tm), {}).setdefault(dm2, {})
                            _padd_into(slot, {kk + k: f.mul(cc, c) for kk, cc in poly.items()}, f)
                    src_ids, tgt_ids = new_ids[(o1, s)], new_ids[(o2, s)]
                    for (bm, tm), byd in acc.items():
                        put(src_ids[bm], tgt_ids[tm], _to_monomials(byd, f))
        for oid, (m, q, h) in self.objs.items():
            sign = f.neg(f.one) if h % 2 else f.one
            src_ids, tgt_ids = new_ids[(oid, 0)], new_ids[(oid, 1)]
            for (bm, tm, dm), poly in saddle_map(m).items():
                byd = {dm: {k: f.mul(c, sign) for k, c in poly.items()}}
                terms = _to_monomials(byd, f)
                if not terms:
                    continue
                old = new_out[src_ids[bm]].get(tgt_ids[tm])
                if old:
                    merged = {d: {k: c} for d, (c, k) in old.items()}
                    for d, (c, k) in terms.items():
                        _padd_into(merged.setdefault(d, {}), {k: c}, f)
                    terms = _to_monomials(merged, f)
                put(src_ids[bm], tgt_ids[tm], terms)
        self.objs = new_objs
        self.out = {i: {t: e for t, e in row.items() if e} for i, row in new_out.items()}
        self.inc = {i: {t: e for t, e in row.items() if e} for i, row in new_inc.items()}
        self.boundary = frozenset(new_bd)
        self.eliminate()

    def _glued_eval(self, m1, m2, s1, s2, n_pieces, glues, dotted, bot_piece, top_piece, trace):
        bm1, nl1, own1 = trace(m1, s1)
        bm2, nl2, own2 = trace(m2, s2)
        circles = []
        arc_piece = {}
        for aid, (t, i) in own1.items():
            if t == "l":
                pass
            elif i not in arc_piece:
                arc_piece[i] = bot_piece(aid)
        seen_bot = set()
        for aid, (t, i) in own1.items():
            if t == "l" and i not in seen_bot:
                seen_bot.add(i)
                circles.append((bot_piece(aid), "bot", i))
        seen_top = set()
        for aid, (t, i) in own2.items():
            if t == "l" and i not in seen_top:
                seen_top.add(i)
                circles.append((top_piece(aid), "top", i))
        where, mins = _cycles(bm1, bm2)
        first_arc = {}
        for i, (u, v) in enumerate(bm1):
            first_arc.setdefault(where[u], i)
        for c, mn in enumerate(mins):
            circles.append((arc_piece[first_arc[c]], "open", 1 << mn))
        return _evaluate(self.alg, n_pieces, glues, dotted, circles)

    # --- cancellation --------------------------------------------------------

    def compose(self, mx, m, my, dm1, dm2):
        key = (mx, m, my, dm1, dm2)
        hit = self._compose_cache.get(key)
        if hit is not None:
            return hit
        w1, mins1 = _cycles(mx, m)
        w2, mins2 = _cycles(m, my)
        n1 = len(mins1)
        n_pieces = n1 + len(mins2)
        glues = [(w1[u], n1 + w2[u]) for u, _ in m]
        dotted = [bool(dm1 >> x & 1) for x in mins1] + [bool(dm2 >> x & 1) for x in mins2]
        wo, minso = _cycles(mx, my)
        circles = [(w1[mn], "open", 1 << mn) for mn in minso]
        res = {dm: poly for (_, _, dm), poly in
               _evaluate(self.alg, n_pieces, glues, dotted, circles).items()}
        self._compose_cache[key] = res
        return res

    def _cancel(self, a, b):
        f = self.f
        out, inc, objs = self.out, self.inc, self.objs
        piv = out[a][b]
        (c, k), = piv.values()
        uinv = f.neg(f.inv(c))
        m = objs[a][0]
        row = [(y, e) for y, e in out[a].items() if y != b]
        col = [(x, e) for x, e in inc[b].items() if x != a]
        for x, delta in col:
            mx = objs[x][0]
            ox = out[x]
            for y, gamma in row:
                my = objs[y][0]
                acc = {}
                old = ox.get(y)
                if old:
                    for d, (cc, kk) in old.items():
                        acc[d] = {kk: cc}
                for d1, (c1, k1) in delta.items():
                    for d2, (c2, k2) in gamma.items():
                        fac = f.mul(f.mul(c1, c2), uinv)
                        for d, poly in self.compose(mx, m, my, d1, d2).items():
                            _padd_into(acc.setdefault(d, {}),
                                       {kk + k1 + k2: f.mul(cc, fac) for kk, cc in poly.items()}, f)
                terms = _to_monomials(acc, f)
                if terms:
                    ox[y] = inc[y][x] = terms
                    if self._is_iso(x, y):
                        heapq.heappush(self._heap, (self._cost(x, y), x, y))
                elif old:
                    del ox[y]
                    del inc[y][x]
        for g in (a, b):
            for y in out.pop(g):
                if y in inc:
                    del inc[y][g]
            for x in inc.pop(g):
                if x in out:
                    del out[x][g]
            del objs[g]

    def _is_iso(self, x, y):
        ox, oy = self.objs[x], self.objs[y]
        return ox[0] == oy[0] and ox[1] == oy[1]

    def _cost(self, x, y):
        if self.heuristic == "markowitz":
            return (len(self.out[x]) - 1) * (len(self.inc[y]) - 1)
        return 0

    def eliminate(self):
        self._heap = []
        for x, row in self.out.items():
            for y in row:
                if self._is_iso(x, y):
                    self._heap.append((self._cost(x, y), x, y))
        heapq.heapify(self._heap)
        while self._heap:
            cst, x, y = heapq.heappop(self._heap)
            row = self.out.get(x)
            if row is None or y not in row:
                continue
            if self.heuristic == "markowitz":
                now = self._cost(x, y)
                if now > cst:
                    heapq.heappush(self._heap, (now, x, y))
                    continue
            self._cancel(x, y)


def _crossing_order(crossings, order):
    n = len(crossings)
    if order == "pd":
        return list(range(n))
    if order != "greedy":
        raise ValueError(f"unknown scan order {order!r}; expected one of {SCAN_ORDERS}")
    done = [False] * n
    seq = []
    bd = set()
    for _ in range(n):
        best, score = None, -1
        for j in range(n):
            if done[j]:
                continue
            sc = sum(1 for l in crossings[j] if l in bd)
            if sc > score:
                best, score = j, sc
        done[best] = True
        seq.append(best)
        for l in crossings[best]:
            if l in bd:
                bd.discard(l)
            else:
                bd.add(l)
    return seq


def scan_build(d: Diagram, system: FrobeniusSystem = BN, reduced: bool = False,
               field: Field = QQ, heuristic: str = "markowitz", order: str = "pd") -> GradedComplex:
    """Bar-Natan complex built crossing by crossing with eliminations in between.

    The result is homotopy equivalent to ``build_complex(d, system, reduced,
    field)`` and is usually far smaller.
    """
    if d.n_crossings == 0:
        from .complex import build_complex
        return build_complex(d, system, reduced, field)
    if reduced and system.name != "BN":
        raise ValueError("the reduced complex X.C is only defined for the Bar-Natan system")
    seq = _crossing_order(d.crossings, order)
    crossings = [list(d.crossings[j]) for j in seq]
    cut = None
    if reduced:
        cut = d.n_edges + 1
        hits = [(i, pos) for i, x in enumerate(crossings) for pos, e in enumerate(x)
                if e == d.basepoint]
        i, pos = hits[-1]
        crossings[i][pos] = cut
    alg = _Algebra(system, field)
    sc = _Scanner(alg, "first" if heuristic == "first" else "markowitz")
    for x in crossings:
        sc.add_crossing(tuple(x))

    f = field
    ids = sorted(sc.objs)
    index = {g: i for i, g in enumerate(ids)}
    gens = []
    shift_q = d.n_plus - 2 * d.n_minus
    for g in ids:
        m, q, h = sc.objs[g]
        gens.append((h - d.n_minus, q + shift_q - (1 if reduced else 0)))
    dd = {}
    for g in ids:
        row = {}
        for t, terms in sc.out[g].items():
            poly = {}
            for dm, (c, k) in terms.items():
                # dotted arc acts as X, which is U on X.C
                kk = k + 1 if dm else k
                _padd_into(poly, {kk: c}, f)
            if poly:
                (k, c), = poly.items()
                row[index[t]] = (c, k)
        if row:
            dd[index[g]] = row
    return GradedComplex(f, gens, dd, None, reduced=reduced, system=system.name,
                         n_plus=d.n_plus, n_minus=d.n_minus)
