"""Frobenius systems and the cube-of-resolutions complex over F[U].

The ring variable U stands for H in the Bar-Natan system and for T^(1/2) in
the Lee system (so T = U^2).  Basis elements of A are indexed 0 -> 1, 1 -> X.

Conventions (frozen, see docs/conventions.md):

* 0-smoothing of ``X[a,b,c,d]`` joins a-b and c-d; 1-smoothing joins a-d and b-c.
* homological degree ``|s| - n_minus``; q-degree
  ``#1 - #X + |s| + n_plus - 2 n_minus``.
* edge sign ``(-1)^(number of 1-bits of s below the changed crossing)``.
* an entry c*U^k from generator x to y satisfies ``q(y) - q(x) = 2k``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

from .diagram import Diagram, DiagramError
from .ring import QQ, Field, FieldScalar, Monomial

__all__ = [
    "FrobeniusSystem",
    "FrobeniusCheck",
    "BN",
    "LEE",
    "check_frobenius",
    "Resolution",
    "resolve",
    "GradedComplex",
    "build_complex",
]

ONE, X = 0, 1


@dataclass(frozen=True)
class FrobeniusSystem:
    """Structure tables of a rank-2 Frobenius algebra A = F[U]{1, X}.

    ``mult[(a, b)]`` is a tuple of ``(coeff, exp, r)`` terms meaning
    coeff*U^exp*basis[r]; ``comult[a]`` holds ``(coeff, exp, r1, r2)`` terms and
    ``counit[a]`` holds ``(coeff, exp)`` terms.  Coefficients are integers.
    """

    name: str
    mult: dict
    comult: dict
    counit: dict
    validate: bool = field(default=True, compare=False)

    def __post_init__(self):
        if self.validate:
            report = check_frobenius(self)
            if not report.ok:
                raise ValueError(f"{self.name}: invalid Frobenius system: {report.violations}")


# --- symbolic elements of A^{(x)n}: dict {(basis_tuple, exp): int} ---------

def _add_into(acc, key, c):
    v = acc.get(key, 0) + c
    if v:
        acc[key] = v
    else:
        acc.pop(key, None)


def _apply(sys: FrobeniusSystem, elem, pos, op):
    """Apply a structure map to tensor factor ``pos`` (or ``pos, pos+1`` for mult)."""
    out = {}
    for (basis, k), c in elem.items():
        if op == "comult":
            for c2, k2, r1, r2 in sys.comult[basis[pos]]:
                _add_into(out, (basis[:pos] + (r1, r2) + basis[pos + 1:], k + k2), c * c2)
        elif op == "counit":
            for c2, k2 in sys.counit[basis[pos]]:
                _add_into(out, (basis[:pos] + basis[pos + 1:], k + k2), c * c2)
        elif op == "mult":
            for c2, k2, r in sys.mult[(basis[pos], basis[pos + 1])]:
                _add_into(out, (basis[:pos] + (r,) + basis[pos + 2:], k + k2), c * c2)
        else:
            raise ValueError(op)
    return out


def _swap(elem):
    return {((b[1], b[0]), k): c for (b, k), c in elem.items()}


def _reduce(elem, p):
    if not p:
        return {k: v for k, v in elem.items() if v}
    return {k: v % p for k, v in elem.items() if v % p}


class FrobeniusCheck(NamedTuple):
    ok: bool
    violations: list

    def __bool__(self):
        return self.ok


def check_frobenius(sys: FrobeniusSystem, field: Field = QQ) -> FrobeniusCheck:
    """Check unit/counit, (co)associativity, (co)commutativity and the bimodule law."""
    p = field.p
    bad = []

    def same(name, lhs, rhs):
        if _reduce(lhs, p) != _reduce(rhs, p):
            bad.append(name)

    for a in (ONE, X):
        e = {((a,), 0): 1}
        delta = _apply(sys, e, 0, "comult")
        same(f"(eps x id)Delta({'1X'[a]}) = id", _apply(sys, delta, 0, "counit"), e)
        same(f"(id x eps)Delta({'1X'[a]}) = id", _apply(sys, delta, 1, "counit"), e)
        same(f"Delta({'1X'[a]}) cocommutative", _swap(delta), delta)
        same(f"Delta({'1X'[a]}) coassociative",
             _apply(sys, delta, 0, "comult"), _apply(sys, delta, 1, "comult"))
        same(f"m(1,{'1X'[a]}) unit", _apply(sys, {((ONE, a), 0): 1}, 0, "mult"), e)
        for b in (ONE, X):
            ab = {((a, b), 0): 1}
            same(f"m({'1X'[a]},{'1X'[b]}) commutative",
                 _apply(sys, ab, 0, "mult"), _apply(sys, {((b, a), 0): 1}, 0, "mult"))
            # Delta(a*b) = a . Delta(b), acting on the first factor
            lhs = _apply(sys, _apply(sys, ab, 0, "mult"), 0, "comult")
            rhs = _apply(sys, _apply(sys, ab, 1, "comult"), 0, "mult")
            same(f"Delta({'1X'[a]}*{'1X'[b]}) = {'1X'[a]}.Delta({'1X'[b]})", lhs, rhs)
            for c in (ONE, X):
                abc = {((a, b, c), 0): 1}
                same(f"m associative on {'1X'[a]}{'1X'[b]}{'1X'[c]}",
                     _apply(sys, _apply(sys, abc, 0, "mult"), 0, "mult"),
                     _apply(sys, _apply(sys, abc, 1, "mult"), 0, "mult"))
    return FrobeniusCheck(not bad, bad)


BN = FrobeniusSystem(
    "BN",
    mult={(ONE, ONE): ((1, 0, ONE),), (ONE, X): ((1, 0, X),), (X, ONE): ((1, 0, X),),
          (X, X): ((1, 1, X),)},
    comult={ONE: ((1, 0, ONE, X), (1, 0, X, ONE), (-1, 1, ONE, ONE)), X: ((1, 0, X, X),)},
    counit={ONE: (), X: ((1, 0),)},
)

LEE = FrobeniusSystem(
    "Lee",
    mult={(ONE, ONE): ((1, 0, ONE),), (ONE, X): ((1, 0, X),), (X, ONE): ((1, 0, X),),
          (X, X): ((1, 2, ONE),)},
    comult={ONE: ((1, 0, ONE, X), (1, 0, X, ONE)), X: ((1, 0, X, X), (1, 2, ONE, ONE))},
    counit={ONE: (), X: ((1, 0),)},
)


# --- resolutions -----------------------------------------------------------

@dataclass(frozen=True)
class Resolution:
    state: int
    circles: tuple[tuple[int, ...], ...]
    basepoint_circle: int


def _state_int(state, n) -> int:
    if isinstance(state, int):
        if not 0 <= state < (1 << n) and not (n == 0 and state == 0):
            raise ValueError(f"state {state} out of range for {n} crossings")
        return state
    bits = list(state)
    if len(bits) != n:
        raise ValueError(f"state has {len(bits)} bits, diagram has {n} crossings")
    return sum(1 << j for j, b in enumerate(bits) if b)


def _circle_ids(crossings, n_edges, s):
    """Circle index per edge label (index 0 unused), circles ordered by min label."""
    parent = list(range(n_edges + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for j, (a, b, c, d) in enumerate(crossings):
        if (s >> j) & 1:
            pairs = ((a, d), (b, c))
        else:
            pairs = ((a, b), (c, d))
        for u, v in pairs:
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[max(ru, rv)] = min(ru, rv)
    ids = [0] * (n_edges + 1)
    root_id = {}
    for e in range(1, n_edges + 1):
        r = find(e)
        if r not in root_id:
            root_id[r] = len(root_id)
        ids[e] = root_id[r]
    return ids, len(root_id)


def resolve(d: Diagram, state=0) -> Resolution:
    n = d.n_crossings
    s = _state_int(state, n)
    if n == 0:
        return Resolution(0, ((),), 0)
    ids, nc = _circle_ids(d.crossings, d.n_edges, s)
    circles = [[] for _ in range(nc)]
    for e in range(1, d.n_edges + 1):
        circles[ids[e]].append(e)
    return Resolution(s, tuple(tuple(c) for c in circles), ids[d.basepoint])


# --- graded complexes ------------------------------------------------------

class GradedComplex:
    """Free bigraded complex over F[U] with monomial differential entries.

    ``gens[i] = (homdeg, qdeg)``; ``d[src][tgt] = (coeff, exp)`` with raw field
    scalars.  ``keys`` optionally names generators (e.g. ``(state, labeling)``).
    """

    def __init__(self, field: Field, gens, d, keys=None, reduced=False, system="BN",
                 n_plus=0, n_minus=0):
        self.field = field
        self.gens = list(gens)
        self.d = d
        self.keys = keys
        self.reduced = reduced
        self.system = system
        self.n_plus = n_plus
        self.n_minus = n_minus

    def __len__(self):
        return len(self.gens)

    def __repr__(self):
        return (f"GradedComplex({self.system}, {self.field}, reduced={self.reduced}, "
                f"gens={len(self.gens)}, entries={self.n_entries()})")

    def n_entries(self) -> int:
        return sum(len(row) for row in self.d.values())

    def entries(self):
        for src, row in self.d.items():
            for tgt, (c, k) in row.items():
                yield src, tgt, c, k

    def entry(self, src: int, tgt: int) -> Monomial | None:
        e = self.d.get(src, {}).get(tgt)
        if e is None:
            return None
        return Monomial(FieldScalar(self.field, e[0]), e[1])

    def with_same_meta(self, gens, d, keys=None) -> GradedComplex:
        return GradedComplex(self.field, gens, d, keys, self.reduced, self.system,
                             self.n_plus, self.n_minus)

    def check(self) -> list[str]:
        """Structural violations: zero coefficients, degree, homogeneity, d o d."""
        f = self.field
        bad = []
        for src, tgt, c, k in self.entries():
            i, q = self.gens[src]
            j, q2 = self.gens[tgt]
            if not c or k < 0:
                bad.append(f"bad entry {src}->{tgt}: {(c, k)}")
            if j != i + 1:
                bad.append(f"entry {src}->{tgt} goes from degree {i} to {j}")
            if q2 - q != 2 * k:
                bad.append(f"entry {src}->{tgt} U^{k} joins q={q} to q={q2}")
        for src, row in self.d.items():
            acc = {}
            for mid, (c1, k1) in row.items():
                for tgt, (c2, k2) in self.d.get(mid, {}).items():
                    key = (tgt, k1 + k2)
                    acc[key] = f.add(acc.get(key, f.zero), f.mul(c1, c2))
            for (tgt, k), c in acc.items():
                if c:
                    bad.append(f"d o d nonzero: {src}->{tgt} U^{k}")
                    break
        return bad

    def dump(self) -> str:
        lines = [f"GEN {i} {h} {q}" for i, (h, q) in enumerate(self.gens)]
        for src, tgt, c, k in sorted(self.entries(), key=lambda e: (e[0], e[1])):
            lines.append(f"DIF {src} {tgt} {self.field.to_json(c)} {k}")
        return "\n".join(lines) + "\n"


def _field_tables(system: FrobeniusSystem, f: Field):
    mult = {key: tuple((f(c), k, r) for c, k, r in terms) for key, terms in system.mult.items()}
    comult = {key: tuple((f(c), k, r1, r2) for c, k, r1, r2 in terms)
              for key, terms in system.comult.items()}
    return mult, comult


def _popcount(x: int) -> int:
    return bin(x).count("1")


def cube_complex(d: Diagram, system: FrobeniusSystem, f: Field, fixed: int | None,
                 absorb: bool) -> GradedComplex:
    """Cube of resolutions.

    ``fixed`` pins the basepoint circle label (None: unrestricted).  With
    ``absorb`` a target whose basepoint circle carries X instead of the pinned 1
    is rewritten as U times the pinned generator (the F[X]-module structure).
    """
    n = d.n_crossings
    shift_q = d.n_plus - 2 * d.n_minus
    if n == 0:
        labels = [fixed] if fixed is not None else [ONE, X]
        gens = [(0, 1 - 2 * lab) for lab in labels]
        return GradedComplex(f, gens, {}, [(0, lab) for lab in labels],
                             reduced=fixed is not None, system=system.name)
    mult, comult = _field_tables(system, f)
    n_edges = d.n_edges
    ids = []
    ncirc = []
    for s in range(1 << n):
        cid, nc = _circle_ids(d.crossings, n_edges, s)
        ids.append(cid)
        ncirc.append(nc)
    bp = d.basepoint

    def masks_of(s):
        nc = ncirc[s]
        if fixed is None:
            return list(range(1 << nc))
        b = ids[s][bp]
        return [m for m in range(1 << nc) if ((m >> b) & 1) == fixed]

    offsets = []
    gens = []
    keys = []
    index = []
    for s in range(1 << n):
        offsets.append(len(gens))
        h = _popcount(s) - d.n_minus
        nc = ncirc[s]
        idx = {}
        for m in masks_of(s):
            idx[m] = len(gens)
            gens.append((h, nc - 2 * _popcount(m) + _popcount(s) + shift_q))
            keys.append((s, m))
        index.append(idx)

    neg = f.neg
    dd: dict[int, dict[int, tuple]] = {}
    for s in range(1 << n):
        cs = ids[s]
        reps = {}
        for e in range(n_edges, 0, -1):
            reps[cs[e]] = e
        for j in range(n):
            if (s >> j) & 1:
                continue
            t = s | (1 << j)
            ct = ids[t]
            negative = _popcount(s & ((1 << j) - 1)) & 1
            a, b, c, _ = d.crossings[j]
            i1, i2 = cs[a], cs[c]
            o1, o2 = ct[a], ct[b]
            merge = i1 != i2
            others = [(i, ct[e]) for i, e in reps.items() if i != i1 and i != i2]
            bpt = ct[bp]
            tindex = index[t]
            for m, src in index[s].items():
                base = 0
                for i, mi in others:
                    if (m >> i) & 1:
                        base |= 1 << mi
                if merge:
                    terms = [(cc, k, base | (r << o1))
                             for cc, k, r in mult[((m >> i1) & 1, (m >> i2) & 1)]]
                else:
                    terms = [(cc, k, base | (r1 << o1) | (r2 << o2))
                             for cc, k, r1, r2 in comult[(m >> i1) & 1]]
                row = dd.setdefault(src, {})
                for cc, k, tm in terms:
                    if fixed is not None and ((tm >> bpt) & 1) != fixed:
                        if not absorb:
                            raise AssertionError("differential leaves the reduced subcomplex")
                        tm ^= 1 << bpt
                        k += 1
                    if negative:
                        cc = neg(cc)
                    tgt = tindex[tm]
                    old = row.get(tgt)
                    if old is None:
                        row[tgt] = (cc, k)
                    else:
                        assert old[1] == k
                        v = f.add(old[0], cc)
                        if v:
                            row[tgt] = (v, k)
                        else:
                            del row[tgt]
    dd = {s: row for s, row in dd.items() if row}
    return GradedComplex(f, gens, dd, keys, reduced=fixed is not None, system=system.name,
                         n_plus=d.n_plus, n_minus=d.n_minus)


def build_complex(d: Diagram, system: FrobeniusSystem = BN, reduced: bool = False,
                  field: Field = QQ) -> GradedComplex:
    """Cube-of-resolutions complex of ``d``; reduced means basepoint circle labeled X."""
    if reduced:
        if system.name != "BN":
            raise ValueError("the reduced complex X.C is only defined for the Bar-Natan system")
        if d.n_crossings and not 1 <= d.basepoint <= d.n_edges:
            raise DiagramError(f"invalid basepoint {d.basepoint}")
        return cube_complex(d, system, field, fixed=X, absorb=False)
    return cube_complex(d, system, field, fixed=None, absorb=False)
