"""Graded Smith normalization over F[U] and the invariants read off from it."""

from __future__ import annotations

import heapq
from collections import Counter
from dataclasses import dataclass

from .complex import GradedComplex
from .reduce import Eliminator

__all__ = [
    "TorsionProfile",
    "smith_decompose",
    "torsion_order",
    "page_count",
    "page_betti",
    "khovanov_betti",
    "graded_euler",
    "profile_json",
    "format_laurent",
]


@dataclass(frozen=True)
class TorsionProfile:
    """Free summands ``(homdeg, qdeg)`` and pairs ``(homdeg, qdeg_src, k)``.

    A pair is F[U] --U^k--> F[U] from (i, q) to (i+1, q+2k).
    """

    free: tuple[tuple[int, int], ...]
    pairs: tuple[tuple[int, int, int], ...]
    reduced: bool = False
    field: str = "q"

    @property
    def max_k(self) -> int:
        return max((k for _, _, k in self.pairs), default=0)


def smith_decompose(c: GradedComplex) -> TorsionProfile:
    """Decompose a unit-free complex into free summands and U^k pairs."""
    el = Eliminator(c)
    heap = []
    for x, row in el.out.items():
        for y, (_, k) in row.items():
            if k == 0:
                raise ValueError("smith_decompose needs a complex without unit entries; "
                                 "run gauss_eliminate first")
            heap.append((k, x, y))
    heapq.heapify(heap)

    def on_new(x, y, k):
        heapq.heappush(heap, (k, x, y))

    pairs = []
    while heap:
        k, x, y = heapq.heappop(heap)
        row = el.out.get(x)
        if row is None or y not in row:
            continue
        i, q = c.gens[x]
        pairs.append((i, q, k))
        el.cancel(x, y, on_new)
    free = [c.gens[g] for g in el.alive()]
    return TorsionProfile(tuple(sorted(free)), tuple(sorted(pairs)), c.reduced, c.field.name)


def torsion_order(p: TorsionProfile) -> int:
    return p.max_k


def page_count(p: TorsionProfile) -> int:
    """Pages of the reduced spectral sequence, counting E_1 as page 1."""
    if not p.reduced:
        raise ValueError("page_count needs a profile of the reduced Bar-Natan complex")
    return p.max_k + 1


def page_betti(p: TorsionProfile, r: int) -> dict[tuple[int, int], int]:
    """Dimensions of E_r by (homdeg, qdeg); a U^k pair survives to pages r <= k."""
    if r < 1:
        raise ValueError("pages are numbered from 1")
    if not p.reduced:
        raise ValueError("page_betti needs a profile of the reduced Bar-Natan complex")
    dims = Counter(p.free)
    for i, q, k in p.pairs:
        if r <= k:
            dims[(i, q)] += 1
            dims[(i + 1, q + 2 * k)] += 1
    return dict(dims)


def khovanov_betti(p: TorsionProfile) -> dict[tuple[int, int], int]:
    """Homology of the complex at U = 0, reduced or not."""
    dims = Counter(p.free)
    for i, q, k in p.pairs:
        dims[(i, q)] += 1
        dims[(i + 1, q + 2 * k)] += 1
    return dict(dims)


def graded_euler(c: GradedComplex) -> dict[int, int]:
    """sum over generators of (-1)^homdeg q^qdeg, as {exponent: coefficient}."""
    acc = Counter()
    for i, q in c.gens:
        acc[q] += -1 if i % 2 else 1
    return {q: v for q, v in sorted(acc.items()) if v}


def format_laurent(poly: dict[int, int], var: str = "q") -> str:
    if not poly:
        return "0"
    parts = []
    for e, c in sorted(poly.items()):
        mon = "" if e == 0 else (var if e == 1 else f"{var}^{e}")
        if mon and abs(c) == 1:
            coeff = "-" if c < 0 else "+"
        else:
            coeff = f"{c:+d}" + ("*" if mon else "")
        parts.append(coeff + mon)
    s = "".join(parts)
    return s[1:] if s.startswith("+") else s


def profile_json(name: str, p: TorsionProfile, xo: int, pages: int) -> dict:
    return {
        "knot": name,
        "field": p.field,
        "reduced": p.reduced,
        "free": [list(x) for x in p.free],
        "pairs": [list(x) for x in p.pairs],
        "xo": xo,
        "pages": pages,
    }
