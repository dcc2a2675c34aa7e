"""Segre cones, product-cone instances, Rees algebras, fiber cones and blow-up charts.

Variable names are fixed: ``x0..xn``, ``y0..ym``, ``z00..znm`` (row-major),
``T0..Tn`` for the Rees variables and ``t`` for the auxiliary parameter.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from itertools import combinations

from .field import QQ, Field
from .groebner import GBStats
from .hilbert import NotHomogeneous, krull_dimension
from .ideals import Ideal, _fresh_name, ideal_quotient, kernel_of_map, normal_form
from .linalg import rank
from .ring import Polynomial, PolyRing, RingError, RingMap

log = logging.getLogger(__name__)


class ConstructionError(ValueError):
    pass


def z_name(i: int, j: int) -> str:
    return f"z{i}{j}" if i < 10 and j < 10 else f"z{i}_{j}"


@dataclass(frozen=True)
class SegreContext:
    n: int
    m: int
    field: Field
    ring_x: PolyRing
    ring_y: PolyRing
    ring_xy: PolyRing
    ring_z: PolyRing
    segre_ideal: Ideal
    map_z_to_xy: RingMap

    def z(self, i: int, j: int) -> Polynomial:
        return self.ring_z.var(z_name(i, j))


def build_segre(n: int, m: int, field: Field = QQ) -> SegreContext:
    """Coordinates and 2x2 minors for the Segre embedding of ``P^n x P^m``."""
    if n < 0 or m < 0:
        raise ConstructionError("n and m must be non-negative")
    xs = [f"x{i}" for i in range(n + 1)]
    ys = [f"y{j}" for j in range(m + 1)]
    zs = [z_name(i, j) for i in range(n + 1) for j in range(m + 1)]
    ring_x = PolyRing(field, xs)
    ring_y = PolyRing(field, ys)
    ring_xy = PolyRing(field, xs + ys)
    ring_z = PolyRing(field, zs)
    z = lambda i, j: ring_z.var(z_name(i, j))  # noqa: E731
    minors = [
        z(a, c) * z(b, d) - z(a, d) * z(b, c)
        for a, b in combinations(range(n + 1), 2)
        for c, d in combinations(range(m + 1), 2)
    ]
    images = [ring_xy.var(xs[i]) * ring_xy.var(ys[j]) for i in range(n + 1) for j in range(m + 1)]
    return SegreContext(
        n, m, field, ring_x, ring_y, ring_xy, ring_z,
        Ideal(ring_z, minors), RingMap(ring_z, ring_xy, images),
    )


def _as_ring(I: Ideal, ring: PolyRing, what: str) -> Ideal:
    """Move ``I`` into ``ring``, renaming variables by position if needed."""
    if I.ring == ring:
        return I
    if I.ring.nvars != ring.nvars:
        raise ConstructionError(f"{what} lives in {I.ring.nvars} variables, expected {ring.nvars}")
    if I.ring.field != ring.field:
        raise ConstructionError(f"{what} is over {I.ring.field}, expected {ring.field}")
    m = RingMap(I.ring, ring, ring.gens())
    return Ideal(ring, [m(g) for g in I.gens])


@dataclass(frozen=True)
class ProductConeInstance:
    """Cone ``Y = C(V x W)``, divisor ``Z = C(V x H)`` with ``H = (y_m = 0)``, vertex ideal."""

    ctx: SegreContext
    IV: Ideal
    IW: Ideal
    IY: Ideal
    IZ: Ideal
    m_v: Ideal


def column_map(ctx: SegreContext, col: int) -> RingMap:
    """``x_a -> z_{a,col}``; turns ``g`` into ``g_col``."""
    return RingMap(ctx.ring_x, ctx.ring_z, [ctx.z(a, col) for a in range(ctx.n + 1)])


def row_map(ctx: SegreContext, row: int) -> RingMap:
    """``y_c -> z_{row,c}``; turns ``h`` into ``h_row``."""
    return RingMap(ctx.ring_y, ctx.ring_z, [ctx.z(row, c) for c in range(ctx.m + 1)])


def build_product_instance(ctx: SegreContext, IV: Ideal, IW: Ideal) -> ProductConeInstance:
    """Assemble ``I(Y)`` from the minors, every ``g_col`` and every ``h_row``.

    ``IV`` and ``IW`` may be given in any rings with ``n+1`` and ``m+1``
    variables; they are renamed positionally to ``x*`` and ``y*``.
    """
    IV, IW, IY = product_ideal(ctx, IV, IW)
    y_last = ctx.ring_y.var(f"y{ctx.m}")
    if IW.gens and not normal_form(y_last, IW):
        raise ConstructionError(f"y{ctx.m} lies in IW; the section y{ctx.m} = 0 must not contain W")
    IZ = Ideal(ctx.ring_z, [ctx.z(i, ctx.m) for i in range(ctx.n + 1)])
    m_v = Ideal(ctx.ring_z, ctx.ring_z.gens())
    return ProductConeInstance(ctx, IV, IW, IY, IZ, m_v)


def product_ideal(ctx: SegreContext, IV: Ideal, IW: Ideal) -> tuple[Ideal, Ideal, Ideal]:
    """``(IV, IW, I(C(V x W)))`` with the factors moved into the ``x`` and ``y`` rings."""
    IV = _as_ring(IV, ctx.ring_x, "IV")
    IW = _as_ring(IW, ctx.ring_y, "IW")
    for name, I in (("IV", IV), ("IW", IW)):
        if not I.is_homogeneous():
            raise NotHomogeneous(f"{name} is not homogeneous")
    gens = list(ctx.segre_ideal.gens)
    for col in range(ctx.m + 1):
        cm = column_map(ctx, col)
        gens.extend(cm(g) for g in IV.gens)
    for row in range(ctx.n + 1):
        rm = row_map(ctx, row)
        gens.extend(rm(h) for h in IW.gens)
    return IV, IW, Ideal(ctx.ring_z, gens)


def segre_image_ideal(ctx: SegreContext, IV: Ideal, IW: Ideal, stats: GBStats | None = None) -> Ideal:
    """Kernel of ``k[z] -> k[x, y] / (IV + IW)``: the homogeneous ideal of ``V x W``.

    The assembled ideal of :func:`product_ideal` has the same saturation but
    can be smaller in low degrees (it only contains ``g(x) y_c^deg g``, not
    ``g(x) y^b`` for mixed monomials ``y^b``).
    """
    IV = _as_ring(IV, ctx.ring_x, "IV")
    IW = _as_ring(IW, ctx.ring_y, "IW")
    target = Ideal(ctx.ring_xy, [g.change_ring(ctx.ring_xy) for g in IV.gens + IW.gens])
    return kernel_of_map(ctx.map_z_to_xy, target_ideal=target, stats=stats)


@dataclass
class ReesPresentation:
    """``k[base vars, T_0..T_k] / rees_ideal`` presents the Rees algebra of ``center``."""

    ambient: PolyRing
    rees_ideal: Ideal
    base_ideal: Ideal
    blowup_center: Ideal
    rees_vars: tuple[str, ...]
    stats: GBStats

    @property
    def base_vars(self) -> tuple[str, ...]:
        return self.base_ideal.ring.vars

    def tautological_map(self) -> RingMap:
        """``T_j -> t * center_j`` into ``base[t]``."""
        base = self.base_ideal.ring
        t = _fresh_name(base.vars, "t")
        target = PolyRing(base.field, (t,) + base.vars)
        tv = target.var(t)
        images = []
        for v in self.ambient.vars:
            if v in self.rees_vars:
                images.append(tv * self.blowup_center.gens[self.rees_vars.index(v)].change_ring(target))
            else:
                images.append(target.var(v))
        return RingMap(self.ambient, target, images)


def rees_presentation(base: Ideal, center: Ideal) -> ReesPresentation:
    """Kernel of ``k[base vars, T] -> (k[base vars]/base)[t]``, ``T_j -> t * center_j``."""
    if base.ring != center.ring:
        raise RingError("base and center must share a ring")
    ring = base.ring
    if not center.gens:
        raise ConstructionError("blow-up center has no generators")
    taken = set(ring.vars)
    tvars = []
    for j in range(len(center.gens)):
        name = f"T{j}"
        if name in taken:
            name = _fresh_name(taken, f"T{j}_")
        taken.add(name)
        tvars.append(name)
    t = _fresh_name(taken, "t")
    ambient = PolyRing(ring.field, ring.vars + tuple(tvars))
    target = PolyRing(ring.field, (t,) + ring.vars)
    tv = target.var(t)
    images = [target.var(v) for v in ring.vars] + [tv * g.change_ring(target) for g in center.gens]
    stats = GBStats()
    target_ideal = Ideal(target, [g.change_ring(target) for g in base.gens])
    K = kernel_of_map(RingMap(ambient, target, images), target_ideal=target_ideal, stats=stats)
    return ReesPresentation(ambient, K, base, center, tuple(tvars), stats)


def _t_ring(r: ReesPresentation) -> PolyRing:
    return PolyRing(r.ambient.field, r.rees_vars)


def fiber_cone(r: ReesPresentation) -> Ideal:
    """Presentation of ``(+) I^d / I^d m`` in the ``T`` variables (base variables set to 0)."""
    T = _t_ring(r)
    base_idx = [r.ambient.index(v) for v in r.base_vars]
    gens = []
    for g in r.rees_ideal.gens:
        terms = {e: c for e, c in g.terms.items() if not any(e[i] for i in base_idx)}
        if terms:
            gens.append(Polynomial(r.ambient, terms).change_ring(T))
    I = Ideal(T, gens)
    I.groebner_basis()
    return I


def blowup_chart(r: ReesPresentation, j: int) -> Ideal:
    """Affine chart ``T_j = 1`` of the blow-up, in base variables and the other ``T_i``."""
    if not 0 <= j < len(r.rees_vars):
        raise ConstructionError(f"chart index {j} outside [0, {len(r.rees_vars) - 1}]")
    keep = [v for v in r.ambient.vars if v != r.rees_vars[j]]
    chart = PolyRing(r.ambient.field, keep)
    one = {r.rees_vars[j]: r.ambient.one()}
    gens = [g.substitute(one).change_ring(chart) for g in r.rees_ideal.gens]
    return Ideal(chart, gens)


def jacobian_matrix(I: Ideal) -> list[list[Polynomial]]:
    return [[g.derivative(v) for v in I.ring.vars] for g in I.gens]


def _det(rows: list[list[Polynomial]], zero: Polynomial) -> Polynomial:
    # cofactor expansion along the first row; sizes here are small
    n = len(rows)
    if n == 1:
        return rows[0][0]
    total = zero
    for k in range(n):
        a = rows[0][k]
        if not a:
            continue
        sub = [row[:k] + row[k + 1:] for row in rows[1:]]
        term = a * _det(sub, zero)
        total = total - term if k % 2 else total + term
    return total


def jacobian_singular_locus(I: Ideal, c: int) -> Ideal:
    """``I`` plus all ``c x c`` minors of the Jacobian of its generators.

    Exact as a singular locus when ``V(I)`` is equidimensional of codimension
    ``c``; otherwise it can only be larger than the true locus.
    """
    if c < 0:
        raise ValueError("codimension must be non-negative")
    if c == 0:
        return Ideal(I.ring, list(I.gens) + [I.ring.one()])
    jac = jacobian_matrix(I)
    if I.gens and I.ring.nvars - krull_dimension(I) != c:
        log.warning("expected codimension %d differs from computed codimension; locus is conservative", c)
    zero = I.ring.zero()
    minors = []
    for rows in combinations(range(len(jac)), c):
        for cols in combinations(range(I.ring.nvars), c):
            d = _det([[jac[r][k] for k in cols] for r in rows], zero)
            if d:
                minors.append(d)
    return Ideal(I.ring, list(I.gens) + minors)


def linear_part_rank(polys: list[Polynomial]) -> tuple[int, list[int]]:
    """Rank of the Jacobian at the origin and the indices of a maximal independent set."""
    ring = polys[0].ring if polys else None
    p = ring.field.p if ring else 0
    chosen: list[int] = []
    rows: list[dict] = []
    for k, f in enumerate(polys):
        row = {e.index(1): c for e, c in f.terms.items() if sum(e) == 1}
        if rank(rows + [row], p) > len(chosen):
            rows.append(row)
            chosen.append(k)
    return len(chosen), chosen


@dataclass(frozen=True)
class OriginSmoothness:
    on_variety: bool
    smooth: bool
    jacobian_rank: int
    local_dimension: int | None


def smooth_at_origin(I: Ideal) -> OriginSmoothness:
    """Decide whether ``V(I)`` is smooth at the origin.

    Pick generators ``f`` with independent linear parts (rank ``c``). The germ
    ``V(f)`` is smooth of codimension ``c``; ``V(I)`` is smooth at the origin
    iff every generator ``g`` of ``I`` lies in ``(f)`` after localizing, i.e.
    ``((f) : g)`` has a generator that does not vanish at the origin.
    """
    gens = list(I.gens)
    if any(g.constant_coefficient() for g in gens):
        return OriginSmoothness(False, False, 0, None)
    c, chosen = linear_part_rank(gens)
    F = Ideal(I.ring, [gens[k] for k in chosen])
    for k, g in enumerate(gens):
        if k in chosen or not normal_form(g, F):
            continue
        Q = ideal_quotient(F, Ideal(I.ring, [g]))
        if not any(q.constant_coefficient() for q in Q.groebner_basis()):
            return OriginSmoothness(True, False, c, None)
    return OriginSmoothness(True, True, c, I.ring.nvars - c)
