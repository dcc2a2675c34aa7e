"""Ideals and the ideal calculus built on Groebner bases."""

from __future__ import annotations

from itertools import combinations_with_replacement

from .groebner import GBStats, buchberger, from_packed, normal_form_packed, to_packed
from .ring import Polynomial, PolyRing, RingError, RingMap


class Ideal:
    """Finitely generated ideal with a cached reduced Groebner basis."""

    def __init__(self, ring: PolyRing, gens=()):
        cleaned = []
        for g in gens:
            if isinstance(g, str):
                g = ring(g)
            elif not isinstance(g, Polynomial):
                g = ring.const(g)
            if g.ring != ring:
                raise RingError(f"generator {g} does not belong to {ring}")
            if g:
                cleaned.append(g)
        self.ring = ring
        self.gens = tuple(cleaned)
        self._gb: list[Polynomial] | None = None
        self.gb_stats = GBStats()

    def __repr__(self):
        return f"Ideal({', '.join(map(str, self.gens)) or '0'})"

    def __str__(self):
        return "(" + ", ".join(map(str, self.gens)) + ")" if self.gens else "(0)"

    def __add__(self, other: "Ideal") -> "Ideal":
        _same_ring(self, other)
        return Ideal(self.ring, self.gens + other.gens)

    def __mul__(self, other: "Ideal") -> "Ideal":
        _same_ring(self, other)
        return Ideal(self.ring, [f * g for f in self.gens for g in other.gens])

    def __contains__(self, f) -> bool:
        return not normal_form(f, self)

    def is_zero(self) -> bool:
        return not self.gens

    def is_unit(self) -> bool:
        gb = self.groebner_basis()
        return len(gb) == 1 and gb[0].is_constant()

    def is_homogeneous(self) -> bool:
        return all(g.is_homogeneous() for g in self.gens)

    def groebner_basis(self, degree_cap: int | None = None) -> list[Polynomial]:
        return groebner_basis(self, degree_cap=degree_cap)

    def leading_monomials(self) -> list[tuple[int, ...]]:
        return [g.leading_monomial() for g in self.groebner_basis()]

    def change_ring(self, ring: PolyRing) -> "Ideal":
        return Ideal(ring, [g.change_ring(ring) for g in self.gens])

    def max_degree(self) -> int:
        return max((g.degree() for g in self.gens), default=0)


def _same_ring(I: Ideal, J: Ideal):
    if I.ring != J.ring:
        raise RingError(f"ring mismatch: {I.ring} vs {J.ring}")


def groebner_basis(I: Ideal, degree_cap: int | None = None, max_pairs: int | None = None) -> list[Polynomial]:
    """Reduced Groebner basis: monic, auto-reduced, sorted by increasing lead."""
    if degree_cap is None and I._gb is not None:
        return I._gb
    stats = GBStats()
    packed = buchberger(list(I.gens), I.ring, max_pairs=max_pairs, degree_cap=degree_cap, stats=stats)
    gb = [from_packed(I.ring, f) for f in packed]
    if degree_cap is None or not stats.truncated:
        I._gb = gb
        I.gb_stats = stats
    return gb


def normal_form(f: Polynomial, I: Ideal) -> Polynomial:
    if isinstance(f, str):
        f = I.ring(f)
    if f.ring != I.ring:
        raise RingError(f"ring mismatch: {f.ring} vs {I.ring}")
    gb = groebner_basis(I)
    if not gb:
        return f
    basis = [to_packed(g) for g in gb]
    rem = normal_form_packed(to_packed(f), basis, I.ring.field.p, I.ring.guard)
    return from_packed(I.ring, rem)


def ideal_contains(I: Ideal, J: Ideal) -> bool:
    """True iff ``J`` is contained in ``I``."""
    _same_ring(I, J)
    return all(not normal_form(g, I) for g in J.gens)


def ideal_equal(I: Ideal, J: Ideal) -> bool:
    _same_ring(I, J)
    return groebner_basis(I) == groebner_basis(J)


def ideal_power(I: Ideal, d: int) -> Ideal:
    if d < 0:
        raise ValueError("power must be non-negative")
    if d == 0:
        return Ideal(I.ring, [I.ring.one()])
    prods = []
    seen = set()
    for combo in combinations_with_replacement(range(len(I.gens)), d):
        f = I.ring.one()
        for k in combo:
            f = f * I.gens[k]
        if f and f not in seen:
            seen.add(f)
            prods.append(f)
    return Ideal(I.ring, prods)


def subring(ring: PolyRing, keep) -> PolyRing:
    keep = [v for v in ring.vars if v in set(keep)]
    order = ring.order if ring.order in ("grevlex", "lex") else "grevlex"
    return PolyRing(ring.field, keep, order)


def eliminate(I: Ideal, keep, stats: GBStats | None = None) -> Ideal:
    """Generators of ``I`` intersected with ``k[keep]``, as an ideal of that subring."""
    ring = I.ring
    keep = list(keep)
    for v in keep:
        ring.index(v)
    sub = subring(ring, keep)
    drop = [v for v in ring.vars if v not in set(keep)]
    if not drop:
        return Ideal(sub, [g.change_ring(sub) for g in groebner_basis(I)])
    elim_ring = PolyRing(ring.field, drop + list(sub.vars), f"block({len(drop)})")
    J = Ideal(elim_ring, [g.change_ring(elim_ring) for g in I.gens])
    gb = groebner_basis(J)
    if stats is not None:
        stats.merge(J.gb_stats)
    dropped = set(drop)
    kept = [g for g in gb if not (g.support() & dropped)]
    out = Ideal(sub, [g.change_ring(sub) for g in kept])
    if sub.order == "grevlex":
        # a block(k) basis restricted to the tail variables is a reduced grevlex basis
        out._gb = list(out.gens)
    return out


def intersect(I: Ideal, J: Ideal) -> Ideal:
    _same_ring(I, J)
    ring = I.ring
    t = _fresh_name(ring.vars, "t")
    big = PolyRing(ring.field, (t,) + ring.vars, ring.order if ring.order != "lex" else "lex")
    tv = big.var(t)
    gens = [tv * g.change_ring(big) for g in I.gens] + [(1 - tv) * g.change_ring(big) for g in J.gens]
    return eliminate(Ideal(big, gens), ring.vars).change_ring(ring)


def exact_divide(f: Polynomial, g: Polynomial) -> Polynomial:
    """Quotient ``f / g`` when ``g`` divides ``f`` exactly."""
    if not g:
        raise ZeroDivisionError("division by zero polynomial")
    ring = f.ring
    q = ring.zero()
    r = f
    lm_g, lc_g = g.leading_term()
    inv = ring.field.inv(lc_g)
    while r:
        lm_r, lc_r = r.leading_term()
        e = tuple(a - b for a, b in zip(lm_r, lm_g))
        if min(e) < 0:
            raise ValueError(f"{g} does not divide {f}")
        t = ring.monomial(e, lc_r * inv)
        q = q + t
        r = r - t * g
    return q


def ideal_quotient(I: Ideal, J: Ideal) -> Ideal:
    """``(I : J) = {f : f J in I}``."""
    _same_ring(I, J)
    if not J.gens:
        return Ideal(I.ring, [I.ring.one()])
    result = None
    for g in J.gens:
        meet = intersect(I, Ideal(I.ring, [g]))
        Q = Ideal(I.ring, [exact_divide(h, g) for h in groebner_basis(meet)])
        result = Q if result is None else intersect(result, Q)
    groebner_basis(result)
    return result


def saturate(I: Ideal, J: Ideal) -> Ideal:
    """``I : J^infinity`` by iterated quotients."""
    current = I
    while True:
        nxt = ideal_quotient(current, J)
        if ideal_contains(current, nxt):
            return current
        current = nxt


def _fresh_name(taken, base: str) -> str:
    taken = set(taken)
    name = base
    k = 0
    while name in taken:
        k += 1
        name = f"{base}{k}" if not base[-1].isdigit() else f"{base}_{k}"
    return name


def kernel_of_map(m: RingMap, target_ideal: Ideal | None = None, stats: GBStats | None = None) -> Ideal:
    """Kernel of ``source -> target/target_ideal`` via the graph ideal.

    A source variable whose image is a bare target variable (hit by no other
    source variable) is identified with it instead of adding a graph relation.
    """
    src, tgt = m.source, m.target
    if target_ideal is not None and target_ideal.ring != tgt:
        raise RingError("target ideal must live in the target ring")
    identified: dict[str, str] = {}
    hits: dict[str, int] = {}
    for im in m.images:
        if len(im.terms) == 1:
            (e, c), = im.terms.items()
            if sum(e) == 1 and c == tgt.field.one:
                name = tgt.vars[e.index(1)]
                hits[name] = hits.get(name, 0) + 1
    for s, im in zip(src.vars, m.images):
        if len(im.terms) == 1:
            (e, c), = im.terms.items()
            if sum(e) == 1 and c == tgt.field.one:
                name = tgt.vars[e.index(1)]
                if hits[name] == 1 and name not in identified.values():
                    identified[s] = name
    # rename source variables that clash with remaining target variables
    taken = set(src.vars) | set(tgt.vars)
    src_names = {}
    for s in src.vars:
        if s in identified or s not in tgt.vars:
            src_names[s] = s
        else:
            new = _fresh_name(taken, s + "_s")
            taken.add(new)
            src_names[s] = new
    target_left = [v for v in tgt.vars if v not in identified.values()]
    tgt_rename = {v: v for v in target_left}
    for s, v in identified.items():
        tgt_rename[v] = src_names[s]
    # a target variable may share its name with an identified source variable's name
    clash = set(target_left) & {src_names[s] for s in identified}
    for v in clash:
        new = _fresh_name(taken, v + "_t")
        taken.add(new)
        tgt_rename[v] = new
    elim_vars = [tgt_rename[v] for v in target_left]
    keep_vars = [src_names[s] for s in src.vars]
    joint = PolyRing(src.field, elim_vars + keep_vars, f"block({len(elim_vars)})")
    to_joint = RingMap(tgt, joint, [joint.var(tgt_rename[v]) for v in tgt.vars])
    gens = []
    for s, im in zip(src.vars, m.images):
        if s in identified:
            continue
        gens.append(joint.var(src_names[s]) - to_joint(im))
    if target_ideal is not None:
        gens.extend(to_joint(g) for g in target_ideal.gens)
    elim = eliminate(Ideal(joint, gens), keep_vars, stats=stats)
    back = PolyRing(src.field, keep_vars, elim.ring.order)
    rename_back = {src_names[s]: s for s in src.vars}
    out_ring = src
    result = []
    for g in elim.gens:
        g = g.change_ring(back) if g.ring != back else g
        result.append(_rename(g, rename_back, out_ring))
    out = Ideal(out_ring, result)
    if src.order == "grevlex":
        out._gb = sorted(result, key=lambda f: src.pack(f.leading_monomial()))
    return out


def _rename(f: Polynomial, names: dict[str, str], ring: PolyRing) -> Polynomial:
    idx = [ring.index(names[v]) for v in f.ring.vars]
    out = {}
    for e, c in f.terms.items():
        ne = [0] * ring.nvars
        for i, a in enumerate(e):
            ne[idx[i]] = a
        out[tuple(ne)] = c
    return Polynomial(ring, out)
