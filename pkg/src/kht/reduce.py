"""Unit-pivot Gaussian elimination of graded complexes over F[U].

Cancelling a pivot x --c U^k--> y with entries s U^a: w -> y and r U^b: x -> z
adds ``-s r / c * U^(a+b-k)`` to w -> z and deletes x, y.  With k = 0 this is
the usual homotopy-equivalence cancellation; with k minimal in its row and
column it is one step of graded Smith normalization (see ``torsion``).
"""

from __future__ import annotations

import heapq
import random

from .complex import GradedComplex

__all__ = ["Eliminator", "gauss_eliminate", "PIVOT_HEURISTICS"]

PIVOT_HEURISTICS = ("markowitz", "first", "random")


class Eliminator:
    """Mutable sparse working copy of a complex (rows and columns kept in sync)."""

    def __init__(self, c: GradedComplex):
        self.c = c
        self.f = c.field
        self.out: dict[int, dict[int, tuple]] = {i: {} for i in range(len(c.gens))}
        self.inc: dict[int, dict[int, tuple]] = {i: {} for i in range(len(c.gens))}
        for src, row in c.d.items():
            for tgt, e in row.items():
                self.out[src][tgt] = e
                self.inc[tgt][src] = e

    def cancel(self, a: int, b: int, on_new=None):
        """Cancel the pivot a -> b; ``on_new(x, y, k)`` is told about created entries."""
        p = self.f.p
        out, inc = self.out, self.inc
        u, k0 = out[a][b]
        uinv = pow(u, -1, p) if p else 1 / u
        row = [(y, e) for y, e in out[a].items() if y != b]
        col = [(x, e) for x, e in inc[b].items() if x != a]
        for x, (s, ks) in col:
            fac = (-s * uinv) % p if p else -s * uinv
            ox = out[x]
            for y, (r, kr) in row:
                v = fac * r
                if p:
                    v %= p
                k = ks + kr - k0
                old = ox.get(y)
                if old is None:
                    ox[y] = inc[y][x] = (v, k)
                    if on_new is not None:
                        on_new(x, y, k)
                else:
                    v = old[0] + v
                    if p:
                        v %= p
                    if v:
                        ox[y] = inc[y][x] = (v, k)
                    else:
                        del ox[y]
                        del inc[y][x]
        for g in (a, b):
            for y in out.pop(g):
                if y in inc:
                    del inc[y][g]
            for x in inc.pop(g):
                if x in out:
                    del out[x][g]

    def alive(self):
        return sorted(self.out)

    def to_complex(self) -> GradedComplex:
        keep = self.alive()
        new = {g: i for i, g in enumerate(keep)}
        d = {}
        for g in keep:
            row = self.out[g]
            if row:
                d[new[g]] = {new[t]: e for t, e in row.items()}
        keys = [self.c.keys[g] for g in keep] if self.c.keys is not None else None
        return self.c.with_same_meta([self.c.gens[g] for g in keep], d, keys)


def gauss_eliminate(c: GradedComplex, heuristic: str = "markowitz",
                    seed: int | None = None) -> GradedComplex:
    """Cancel unit entries until none is left.

    ``markowitz`` picks pivots of small (row_nnz-1)*(col_nnz-1) using a lazily
    refreshed heap; ``first`` takes them in generator order; ``random`` uses a
    seeded random order (for pivot-order invariance tests).
    """
    if heuristic not in PIVOT_HEURISTICS:
        raise ValueError(f"unknown pivot heuristic {heuristic!r}")
    el = Eliminator(c)
    out, inc = el.out, el.inc
    rng = random.Random(seed)

    def cost(x, y):
        if heuristic == "markowitz":
            return (len(out[x]) - 1) * (len(inc[y]) - 1)
        if heuristic == "random":
            return rng.random()
        return 0

    heap = []
    for x, row in out.items():
        for y, (_, k) in row.items():
            if k == 0:
                heap.append((cost(x, y), x, y))
    heapq.heapify(heap)

    def on_new(x, y, k):
        if k == 0:
            heapq.heappush(heap, (cost(x, y), x, y))

    while heap:
        cst, x, y = heapq.heappop(heap)
        row = out.get(x)
        if row is None or y not in row:
            continue
        if heuristic == "markowitz":
            now = cost(x, y)
            if now > cst:
                heapq.heappush(heap, (now, x, y))
                continue
        el.cancel(x, y, on_new)
    return el.to_complex()
