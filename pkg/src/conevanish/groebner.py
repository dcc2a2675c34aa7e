"""Buchberger's algorithm on packed monomials.

Internal polynomials are lists of ``(packed monomial, coefficient)`` sorted
by decreasing monomial. Basis elements are kept monic. Pair handling follows
Gebauer-Moeller with the sugar strategy; for homogeneous input sugar equals
degree, so pairs are processed degree by degree.
"""

from __future__ import annotations

import contextvars
import logging
from contextlib import contextmanager
from dataclasses import dataclass
from heapq import heapify, heappop, heappush

from .ring import FIELD_MAX, Polynomial, PolyRing

log = logging.getLogger(__name__)

DEFAULT_MAX_PAIRS = 10**6

_max_pairs = contextvars.ContextVar("max_pairs", default=DEFAULT_MAX_PAIRS)


@contextmanager
def pair_budget(max_pairs: int):
    """Set the S-pair budget for every Groebner run in this context."""
    if max_pairs <= 0:
        raise ValueError("pair budget must be positive")
    token = _max_pairs.set(max_pairs)
    try:
        yield
    finally:
        _max_pairs.reset(token)


def current_pair_budget() -> int:
    return _max_pairs.get()


class BudgetExceeded(RuntimeError):
    """A computation ran past its step budget."""


@dataclass
class GBStats:
    pairs_processed: int = 0
    max_degree: int = 0
    truncated: bool = False

    def merge(self, other: "GBStats"):
        self.pairs_processed += other.pairs_processed
        self.max_degree = max(self.max_degree, other.max_degree)
        self.truncated = self.truncated or other.truncated

    def to_json(self) -> dict:
        return {"max_degree": self.max_degree, "pairs_processed": self.pairs_processed}


def to_packed(f: Polynomial) -> list:
    pack = f.ring.pack
    return sorted(((pack(e), c) for e, c in f.terms.items()), reverse=True)


def from_packed(ring: PolyRing, terms) -> Polynomial:
    unpack = ring.unpack
    return Polynomial(ring, {unpack(m): c for m, c in terms})


def make_monic(terms: list, p: int) -> list:
    c0 = terms[0][1]
    if c0 == 1:
        return terms
    if p:
        inv = pow(c0, -1, p)
        return [(m, c * inv % p) for m, c in terms]
    return [(m, c / c0) for m, c in terms]


def reduce_terms(terms, leads, tails, p: int, guard: int) -> list:
    """Full normal form of ``terms`` by monic reducers ``leads[k] + tails[k]``."""
    acc = dict(terms)
    heap = [-m for m in acc]
    heapify(heap)
    rem = []
    nl = range(len(leads))
    while heap:
        m = -heappop(heap)
        c = acc.pop(m)
        if not c:
            continue
        mg = m | guard
        for k in nl:
            lm = leads[k]
            if (mg - lm) & guard == guard:
                q = m - lm
                get = acc.get
                if p:
                    for tm, tc in tails[k]:
                        nm = tm + q
                        old = get(nm)
                        if old is None:
                            acc[nm] = -c * tc % p
                            heappush(heap, -nm)
                        else:
                            acc[nm] = (old - c * tc) % p
                else:
                    for tm, tc in tails[k]:
                        nm = tm + q
                        old = get(nm)
                        if old is None:
                            acc[nm] = -c * tc
                            heappush(heap, -nm)
                        else:
                            acc[nm] = old - c * tc
                break
        else:
            rem.append((m, c))
    return rem


def divides(a: int, b: int, guard: int) -> bool:
    """Packed-monomial divisibility ``a | b``."""
    return ((b | guard) - a) & guard == guard


class _Basis:
    """Mutable state of one Buchberger run."""

    def __init__(self, ring: PolyRing):
        self.ring = ring
        self.p = ring.field.p
        self.guard = ring.guard
        self.polys: list[list] = []
        self.lead_exps: list[tuple] = []
        self.sugar: list[int] = []
        self.active: list[int] = []

    def lcm(self, i: int, j: int) -> tuple[int, tuple]:
        e = tuple(map(max, self.lead_exps[i], self.lead_exps[j]))
        return self.ring.pack(e), e

    def add(self, poly: list, sugar: int) -> int:
        self.polys.append(poly)
        self.lead_exps.append(self.ring.unpack(poly[0][0]))
        self.sugar.append(sugar)
        return len(self.polys) - 1


def _spoly(B: _Basis, i: int, j: int, lcm: int) -> list:
    f, g = B.polys[i], B.polys[j]
    qf = lcm - f[0][0]
    qg = lcm - g[0][0]
    p = B.p
    acc: dict = {}
    for m, c in f[1:]:
        acc[m + qf] = c
    for m, c in g[1:]:
        nm = m + qg
        v = acc.get(nm, 0) - c
        acc[nm] = v % p if p else v
    return sorted(((m, c) for m, c in acc.items() if c), reverse=True)


def buchberger(
    polys: list[Polynomial],
    ring: PolyRing,
    max_pairs: int | None = None,
    degree_cap: int | None = None,
    stats: GBStats | None = None,
) -> list[list]:
    """Reduced Groebner basis (packed, monic, sorted by increasing lead)."""
    stats = stats if stats is not None else GBStats()
    if max_pairs is None:
        max_pairs = _max_pairs.get()
    p = ring.field.p
    guard = ring.guard
    B = _Basis(ring)
    inputs = []
    for f in polys:
        if f.ring != ring:
            f = f.change_ring(ring)
        if f:
            if f.degree() > FIELD_MAX // 2:
                raise OverflowError("polynomial degree too large for packed monomials")
            inputs.append((to_packed(f), f.degree()))
    # increasing lead monomial; deterministic start
    inputs.sort(key=lambda t: (t[1], t[0][0][0]))
    pairs: list[tuple] = []

    def insert(h: list, sugar: int):
        nonlocal pairs
        k = B.add(h, sugar)
        lm_h = h[0][0]
        e_h = B.lead_exps[k]
        # candidate pairs (k, g) for active g
        cand = []
        for g in B.active:
            lcm, e = B.lcm(k, g)
            coprime = lcm == lm_h + B.polys[g][0][0]
            s = max(sugar - sum(e_h), B.sugar[g] - sum(B.lead_exps[g])) + sum(e)
            cand.append((lcm, g, coprime, s, sum(e)))
        # chain criterion among new pairs
        kept = []
        for idx, (lcm, g, coprime, s, d) in enumerate(cand):
            if coprime:
                kept.append((lcm, g, coprime, s, d))
                continue
            redundant = False
            for jdx, (lcm2, g2, cop2, _, _) in enumerate(cand):
                if jdx == idx:
                    continue
                if lcm2 == lcm:
                    if cop2 or jdx < idx:
                        redundant = True
                        break
                elif divides(lcm2, lcm, guard):
                    redundant = True
                    break
            if not redundant:
                kept.append((lcm, g, coprime, s, d))
        # old pairs made redundant by lm(h)
        new_pairs = []
        for pr in pairs:
            s, lcm, i, j, d = pr
            if divides(lm_h, lcm, guard):
                l1, _ = B.lcm(i, k)
                l2, _ = B.lcm(j, k)
                if l1 != lcm and l2 != lcm:
                    continue
            new_pairs.append(pr)
        for lcm, g, coprime, s, d in kept:
            if not coprime:
                new_pairs.append((s, lcm, g, k, d))
        pairs = new_pairs
        B.active = [g for g in B.active if not divides(lm_h, B.polys[g][0][0], guard)]
        B.active.append(k)

    for terms, deg in inputs:
        leads = [B.polys[g][0][0] for g in B.active]
        tails = [B.polys[g][1:] for g in B.active]
        h = reduce_terms(terms, leads, tails, p, guard)
        if h:
            insert(make_monic(h, p), deg)

    while pairs:
        best = min(range(len(pairs)), key=lambda t: (pairs[t][0], pairs[t][1]))
        s, lcm, i, j, d = pairs[best]
        pairs[best] = pairs[-1]
        pairs.pop()
        if degree_cap is not None and d > degree_cap:
            stats.truncated = True
            continue
        stats.pairs_processed += 1
        if stats.pairs_processed > max_pairs:
            raise BudgetExceeded(f"Groebner basis exceeded pair budget {max_pairs}")
        stats.max_degree = max(stats.max_degree, d)
        sp = _spoly(B, i, j, lcm)
        if not sp:
            continue
        leads = [B.polys[g][0][0] for g in B.active]
        tails = [B.polys[g][1:] for g in B.active]
        h = reduce_terms(sp, leads, tails, p, guard)
        if h:
            insert(make_monic(h, p), s)
            if h[0][0] == 0:
                break
    return _interreduce(B, p, guard)


def _interreduce(B: _Basis, p: int, guard: int) -> list[list]:
    idx = list(B.active)
    if any(B.polys[g][0][0] == 0 for g in idx):
        return [[(0, 1)]]
    out = []
    for g in idx:
        others = [h for h in idx if h != g]
        leads = [B.polys[h][0][0] for h in others]
        tails = [B.polys[h][1:] for h in others]
        f = B.polys[g]
        out.append([f[0]] + reduce_terms(f[1:], leads, tails, p, guard))
    out.sort(key=lambda f: f[0][0])
    return out


def normal_form_packed(terms: list, basis: list[list], p: int, guard: int) -> list:
    leads = [g[0][0] for g in basis]
    tails = [g[1:] for g in basis]
    return reduce_terms(terms, leads, tails, p, guard)
