"""Minimal graded free resolutions by Schreyer's method.

Module elements are dicts ``{(packed monomial, component): coefficient}``.
Each free module ``F_i`` carries the Schreyer order induced by the previous
map: a basis vector ``e_u`` gets the packed weight ``P[u]`` of the lead
monomial it maps to, and a tie-break path that ranks lower indices higher.
Generators are sorted at each step so that lead terms lose one variable per
step, which bounds the length by the number of variables.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from heapq import heappop, heappush

from .groebner import BudgetExceeded, current_pair_budget, to_packed
from .hilbert import NotHomogeneous
from .ideals import Ideal, groebner_basis
from .linalg import rank
from .ring import PolyRing


@dataclass
class _Level:
    weight: list[int]
    path: list[tuple]
    degs: list[int]


def _lead(elem: dict, level: _Level):
    """Leading ``((mono, comp), coeff)`` of a module element."""
    best = None
    best_key = None
    for (m, c), v in elem.items():
        k = (m + level.weight[c], level.path[c])
        if best_key is None or k > best_key:
            best_key = k
            best = (m, c)
    return best, elem[best]


def _reduce_to_zero(elem: dict, gens: list[dict], leads: list, level: _Level, p: int, guard: int) -> dict:
    """Divide ``elem`` by a Groebner basis; return quotients ``{(mono, u): coeff}``."""
    acc = dict(elem)
    heap = []
    w, path = level.weight, level.path
    for (m, c) in acc:
        heappush(heap, (-(m + w[c]), tuple(-x for x in path[c]), m, c))
    by_comp: dict[int, list[int]] = {}
    for u, ((lm, lc_comp), _) in enumerate(leads):
        by_comp.setdefault(lc_comp, []).append(u)
    quot: dict = {}
    while heap:
        _, _, m, c = heappop(heap)
        coeff = acc.pop((m, c), 0)
        if not coeff:
            continue
        mg = m | guard
        for u in by_comp.get(c, ()):
            (lm, _), lc = leads[u]
            if (mg - lm) & guard == guard:
                break
        else:
            raise ArithmeticError("syzygy reduction left a remainder; input is not a Groebner basis")
        q = m - lm
        f = coeff * pow(lc, -1, p) % p if p else coeff / lc
        quot[(q, u)] = f
        for (gm, gc), gv in gens[u].items():
            key = (gm + q, gc)
            if key == (m, c):
                continue
            old = acc.get(key)
            if old is None:
                nv = -f * gv
                acc[key] = nv % p if p else nv
                heappush(heap, (-(key[0] + w[gc]), tuple(-x for x in path[gc]), key[0], gc))
            else:
                nv = old - f * gv
                acc[key] = nv % p if p else nv
    return quot


def _syzygies(gens: list[dict], level: _Level, ring: PolyRing, step: int, budget: list[int]):
    """Sort ``gens``, build the next level and return (sorted gens, new level, syzygies)."""
    p = ring.field.p
    guard = ring.guard
    r = ring.nvars
    leads = [_lead(g, level) for g in gens]
    var = step if step < r else None

    def sort_key(t):
        ((lm, comp), _), _g = t
        e = ring.unpack(lm)
        return (comp, -(e[var] if var is not None else 0), -(lm + level.weight[comp]))

    order = sorted(zip(leads, gens), key=sort_key)
    leads = [t[0] for t in order]
    gens = [t[1] for t in order]
    new = _Level([], [], [])
    for u, ((lm, comp), _) in enumerate(leads):
        new.weight.append(lm + level.weight[comp])
        new.path.append(level.path[comp] + (-u,))
        new.degs.append(sum(ring.unpack(lm)) + level.degs[comp])
    lead_exps = [ring.unpack(lm) for (lm, _), _ in leads]
    syz = []
    for k in range(len(gens)):
        (lmk, ck), lck = leads[k]
        cands = []
        for l in range(k + 1, len(gens)):
            (lml, cl), _ = leads[l]
            if cl != ck:
                continue
            L = tuple(map(max, lead_exps[k], lead_exps[l]))
            quotient_k = tuple(a - b for a, b in zip(L, lead_exps[k]))
            cands.append((quotient_k, l, L))
        # keep pairs whose syzygy leads are minimal in component k
        cands.sort(key=lambda t: (sum(t[0]), t[0], t[1]))
        kept = []
        for qk, l, L in cands:
            if any(all(a <= b for a, b in zip(q2, qk)) for q2, _, _ in kept):
                continue
            kept.append((qk, l, L))
        for qk, l, L in kept:
            budget[0] += 1
            if budget[0] > budget[1]:
                raise BudgetExceeded(f"resolution exceeded pair budget {budget[1]}")
            (lml, _), lcl = leads[l]
            Lp = ring.pack(L)
            mk, ml = Lp - lmk, Lp - lml
            ak = pow(lck, -1, p) if p else 1 / lck
            al = pow(lcl, -1, p) if p else 1 / lcl
            spoly: dict = {}
            for (m, c), v in gens[k].items():
                spoly[(m + mk, c)] = v * ak % p if p else v * ak
            for (m, c), v in gens[l].items():
                key = (m + ml, c)
                nv = spoly.get(key, 0) - v * al
                spoly[key] = nv % p if p else nv
            spoly = {key: v for key, v in spoly.items() if v}
            sigma = {(mk, k): ak, (ml, l): (-al % p) if p else -al}
            if spoly:
                quot = _reduce_to_zero(spoly, gens, leads, level, p, guard)
                for key, v in quot.items():
                    nv = sigma.get(key, 0) - v
                    sigma[key] = nv % p if p else nv
            sigma = {key: v for key, v in sigma.items() if v}
            syz.append(sigma)
    return gens, new, syz


def _poly_mul(a: dict, b: dict, p: int) -> dict:
    out: dict = {}
    for m1, c1 in a.items():
        for m2, c2 in b.items():
            m = m1 + m2
            v = out.get(m, 0) + c1 * c2
            out[m] = v % p if p else v
    return {m: c for m, c in out.items() if c}


def _poly_axpy(y: dict, a: dict, x: dict, p: int) -> dict:
    """``y - a*x``."""
    out = dict(y)
    for m, c in _poly_mul(a, x, p).items():
        v = out.get(m, 0) - c
        out[m] = v % p if p else v
    return {m: c for m, c in out.items() if c}


@dataclass
class BettiTable:
    """Graded Betti numbers ``beta[i, j]`` of ``S/I``."""

    entries: dict[tuple[int, int], int] = dc_field(default_factory=dict)

    @property
    def length(self) -> int:
        return max((i for (i, _), v in self.entries.items() if v), default=0)

    def __getitem__(self, key: tuple[int, int]) -> int:
        return self.entries.get(key, 0)

    def total(self, i: int) -> int:
        return sum(v for (k, _), v in self.entries.items() if k == i)

    def regularity(self) -> int:
        return max((j - i for (i, j), v in self.entries.items() if v), default=0)

    def numerator(self) -> list[int]:
        """Alternating sum ``sum (-1)^i beta[i,j] t^j``."""
        top = max((j for (_, j) in self.entries), default=0)
        out = [0] * (top + 1)
        for (i, j), v in self.entries.items():
            out[j] += (-1) ** i * v
        while len(out) > 1 and out[-1] == 0:
            out.pop()
        return out

    def to_json(self) -> list[dict]:
        return [{"i": i, "j": j, "value": v} for (i, j), v in sorted(self.entries.items()) if v]

    def __str__(self) -> str:
        if not self.entries:
            return "(empty)"
        reg = self.regularity()
        n = self.length
        lo = min(j - i for (i, j) in self.entries)
        width = max(len(str(v)) for v in self.entries.values()) + 1
        lines = ["      " + "".join(f"{i:>{width}}" for i in range(n + 1))]
        lines.append("total:" + "".join(f"{self.total(i):>{width}}" for i in range(n + 1)))
        for row in range(lo, reg + 1):
            cells = []
            for i in range(n + 1):
                v = self[(i, i + row)]
                cells.append(f"{v if v else '.':>{width}}")
            lines.append(f"{row:>5}:" + "".join(cells))
        return "\n".join(lines)


@dataclass
class Resolution:
    """``0 <- S/I <- F_0 <- F_1 <- ...``; ``maps[i]`` sends ``F_i`` to ``F_{i-1}``.

    ``maps[i][u]`` is column ``u``: ``{row: packed polynomial dict}``.
    ``maps[0]`` is empty.
    """

    ring: PolyRing
    degrees: list[list[int]]
    maps: list[list[dict]]
    minimal: bool = True

    @property
    def length(self) -> int:
        return len(self.degrees) - 1

    def rank(self, i: int) -> int:
        return len(self.degrees[i]) if 0 <= i < len(self.degrees) else 0

    def betti(self) -> BettiTable:
        entries: dict = {}
        for i, degs in enumerate(self.degrees):
            for d in degs:
                entries[(i, d)] = entries.get((i, d), 0) + 1
        return BettiTable(entries)

    def entry_matrix(self, i: int) -> dict:
        """``{(row, col): poly}`` of the map ``F_i -> F_{i-1}``."""
        return {(r, c): poly for c, col in enumerate(self.maps[i]) for r, poly in col.items()}


def _prune(maps: list[list[dict]], degrees: list[list[int]], p: int):
    """Cancel unit entries until every map has entries in the maximal ideal."""
    for i in range(1, len(maps)):
        while True:
            pivot = None
            for c, col in enumerate(maps[i]):
                for r in sorted(col):
                    poly = col[r]
                    if len(poly) == 1 and 0 in poly:
                        pivot = (c, r, poly[0])
                        break
                if pivot:
                    break
            if pivot is None:
                break
            c, r, u = pivot
            uinv = pow(u, -1, p) if p else 1 / u
            pcol = maps[i][c]
            for c2, col in enumerate(maps[i]):
                if c2 == c or r not in col:
                    continue
                b = {m: (v * uinv % p if p else v * uinv) for m, v in col[r].items()}
                for row, poly in pcol.items():
                    newp = _poly_axpy(col.get(row, {}), b, poly, p)
                    if newp:
                        col[row] = newp
                    else:
                        col.pop(row, None)
            # drop column c of maps[i] and row r (reindex rows > r)
            del maps[i][c]
            del degrees[i][c]
            maps[i] = [{(k - 1 if k > r else k): v for k, v in col.items() if k != r} for col in maps[i]]
            del degrees[i - 1][r]
            if i - 1 >= 1:
                del maps[i - 1][r]
            if i + 1 < len(maps):
                maps[i + 1] = [{(k - 1 if k > c else k): v for k, v in col.items() if k != c} for col in maps[i + 1]]
    while len(maps) > 1 and not degrees[-1]:
        maps.pop()
        degrees.pop()


def free_resolution(I: Ideal, minimal: bool = True, max_steps: int | None = None) -> Resolution:
    """Graded free resolution of ``S/I`` (minimal unless asked otherwise)."""
    if not I.is_homogeneous():
        raise NotHomogeneous("free_resolution needs a homogeneous ideal")
    ring = I.ring
    p = ring.field.p
    gb = groebner_basis(I)
    level = _Level([0], [()], [0])
    degrees = [[0]]
    maps: list[list[dict]] = [[]]
    if not gb:
        return Resolution(ring, degrees, maps, minimal)
    gens = [{(m, 0): c for m, c in to_packed(g)} for g in gb]
    budget = [0, max_steps if max_steps is not None else current_pair_budget()]
    step = 0
    while gens:
        gens, new, syz = _syzygies(gens, level, ring, step, budget)
        cols = []
        for g in gens:
            col: dict = {}
            for (m, c), v in g.items():
                col.setdefault(c, {})[m] = v
            cols.append(col)
        maps.append(cols)
        degrees.append(list(new.degs))
        level = new
        gens = syz
        step += 1
    if minimal:
        _prune(maps, degrees, p)
    return Resolution(ring, degrees, maps, minimal)


# -- degreewise linear algebra ------------------------------------------------

class _MonomialCache:
    def __init__(self, ring: PolyRing):
        self.ring = ring
        self._cache: dict[int, list[int]] = {}

    def packed(self, d: int) -> list[int]:
        if d not in self._cache:
            self._cache[d] = [self.ring.pack(e) for e in self.ring.monomials_of_degree(d)] if d >= 0 else []
        return self._cache[d]


def graded_map_rank(entries: dict, src_degs: list[int], d: int, ring: PolyRing, cache=None) -> int:
    """Rank in degree ``d`` of the map ``e_col -> sum_row entries[row, col] e_row``."""
    cache = cache or _MonomialCache(ring)
    p = ring.field.p
    by_col: dict[int, list] = {}
    for (r, c), poly in entries.items():
        by_col.setdefault(c, []).append((r, poly))
    rows = []
    for c, deg in enumerate(src_degs):
        col = by_col.get(c)
        if not col:
            continue
        for mono in cache.packed(d - deg):
            img: dict = {}
            for r, poly in col:
                for m, v in poly.items():
                    key = (r, m + mono)
                    nv = img.get(key, 0) + v
                    img[key] = nv % p if p else nv
            rows.append(img)
    return rank(rows, p)


def module_dim(degs: list[int], d: int, ring: PolyRing, cache=None) -> int:
    cache = cache or _MonomialCache(ring)
    return sum(len(cache.packed(d - a)) for a in degs)


def dual_entries(res: Resolution, i: int) -> dict:
    """Entries of ``Hom(F_{i-1}, S) -> Hom(F_i, S)`` (transpose)."""
    return {(c, r): poly for (r, c), poly in res.entry_matrix(i).items()}


def ext_dimension(res: Resolution, j: int, delta: int, cache=None) -> int:
    """``dim_k Ext^j_S(S/I, S)_delta`` from the dualized resolution."""
    ring = res.ring
    cache = cache or _MonomialCache(ring)
    if j < 0 or j > res.length:
        return 0
    dual_degs = [[-a for a in degs] for degs in res.degrees]
    dim = module_dim(dual_degs[j], delta, ring, cache)
    if not dim:
        return 0
    out_rank = 0
    if j + 1 <= res.length:
        out_rank = graded_map_rank(dual_entries(res, j + 1), dual_degs[j], delta, ring, cache)
    in_rank = 0
    if j >= 1:
        in_rank = graded_map_rank(dual_entries(res, j), dual_degs[j - 1], delta, ring, cache)
    return dim - out_rank - in_rank


def betti_table(I: Ideal) -> BettiTable:
    return free_resolution(I).betti()
