"""Cohen-Macaulay and Gorenstein tests and sheaf cohomology of twists.

Cohomology of ``O_X(d)`` on ``X = Proj S/I`` comes from graded local duality:
with ``r`` variables, ``H^{i+1}_m(S/I)_d`` is dual to ``Ext^{r-1-i}(S/I, S)_{-d-r}``.
For ``i >= 1`` that is ``h^i(O_X(d))``; ``h^0`` adds the correction from
``H^0_m`` and ``H^1_m`` to the Hilbert function.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .hilbert import NotHomogeneous, hilbert_series, krull_dimension
from .ideals import Ideal, ideal_contains, saturate as saturate_ideal
from .resolution import Resolution, _MonomialCache, ext_dimension, free_resolution


class CohomologyError(ValueError):
    pass


def _resolution(I: Ideal) -> Resolution:
    res = I.__dict__.get("_resolution")
    if res is None:
        res = free_resolution(I)
        I.__dict__["_resolution"] = res
    return res


def _require_proper(I: Ideal):
    if not I.is_homogeneous():
        raise NotHomogeneous("ideal is not homogeneous")
    if I.is_unit():
        raise CohomologyError("the unit ideal defines the empty scheme")


def projective_dimension(I: Ideal) -> int:
    """Projective dimension of ``S/I``."""
    return _resolution(I).length


def is_cohen_macaulay(I: Ideal) -> bool:
    """Auslander-Buchsbaum: ``S/I`` is CM iff ``pd = nvars - dim``."""
    _require_proper(I)
    return projective_dimension(I) == I.ring.nvars - krull_dimension(I)


def is_gorenstein_graded(I: Ideal) -> bool:
    """CM with last total Betti number 1."""
    if not is_cohen_macaulay(I):
        return False
    res = _resolution(I)
    return res.rank(res.length) == 1


def is_saturated(I: Ideal) -> bool:
    """True iff the irrelevant ideal is not associated, i.e. ``depth S/I >= 1``."""
    _require_proper(I)
    return projective_dimension(I) < I.ring.nvars


def irrelevant_ideal(ring) -> Ideal:
    return Ideal(ring, ring.gens())


def minimal_generators(I: Ideal) -> list:
    """A minimal homogeneous generating set, chosen greedily by degree."""
    if not I.is_homogeneous():
        raise NotHomogeneous("minimal generators need a homogeneous ideal")
    kept: list = []
    for g in sorted(I.gens, key=lambda f: (f.degree(), I.ring.pack(f.leading_monomial()))):
        if kept and ideal_contains(Ideal(I.ring, kept), Ideal(I.ring, [g])):
            continue
        kept.append(g)
    return kept


def is_complete_intersection(I: Ideal) -> bool:
    """Minimal generator count equals codimension."""
    _require_proper(I)
    return len(minimal_generators(I)) == I.ring.nvars - krull_dimension(I)


def _prepare(I: Ideal, saturate: bool) -> Ideal:
    _require_proper(I)
    if krull_dimension(I) < 1:
        raise CohomologyError("ideal defines the empty projective scheme")
    if not is_saturated(I):
        if not saturate:
            raise CohomologyError("ideal is not saturated; pass saturate=True")
        I = saturate_ideal(I, irrelevant_ideal(I.ring))
    return I


def _h(I: Ideal, res: Resolution, i: int, d: int, cache) -> int:
    r = I.ring.nvars
    delta = -d - r
    if i >= 1:
        return ext_dimension(res, r - 1 - i, delta, cache)
    hf = hilbert_series(I).function(d)
    return hf - ext_dimension(res, r, delta, cache) + ext_dimension(res, r - 1, delta, cache)


def sheaf_cohomology_dim(I: Ideal, i: int, d: int, saturate: bool = False) -> int:
    """``h^i(X, O_X(d))`` for ``X = Proj S/I``."""
    I = _prepare(I, saturate)
    dim_x = krull_dimension(I) - 1
    if not 0 <= i <= dim_x:
        raise CohomologyError(f"cohomological index {i} outside [0, {dim_x}]")
    return _h(I, _resolution(I), i, d, _MonomialCache(I.ring))


@dataclass
class CohomologyTable:
    """``values[(i, d)] = h^i(X, O_X(d))`` on a window of twists."""

    dim: int
    values: dict[tuple[int, int], int] = dc_field(default_factory=dict)

    def __getitem__(self, key: tuple[int, int]) -> int:
        i, d = key
        if i < 0 or i > self.dim:
            return 0
        if key not in self.values:
            raise KeyError(f"h^{i}(O({d})) not in table")
        return self.values[key]

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "values": [{"i": i, "d": d, "value": v} for (i, d), v in sorted(self.values.items())],
        }


def cohomology_table(I: Ideal, twists=range(-5, 11), saturate: bool = False) -> CohomologyTable:
    """All ``h^i(O_X(d))`` for ``0 <= i <= dim X`` and ``d`` in ``twists``."""
    I = _prepare(I, saturate)
    dim_x = krull_dimension(I) - 1
    res = _resolution(I)
    cache = _MonomialCache(I.ring)
    values = {(i, d): _h(I, res, i, d, cache) for i in range(dim_x + 1) for d in twists}
    return CohomologyTable(dim_x, values)


def kunneth_dim(hV: CohomologyTable, hW: CohomologyTable, i: int, d: int) -> int:
    """``h^i(V x W, O(d, d)) = sum_{a+b=i} h^a(V, O(d)) h^b(W, O(d))``."""
    if i < 0 or i > hV.dim + hW.dim:
        return 0
    total = 0
    for a in range(max(0, i - hW.dim), min(i, hV.dim) + 1):
        try:
            total += hV[(a, d)] * hW[(i - a, d)]
        except KeyError as exc:
            raise CohomologyError(f"missing cohomology entry: {exc.args[0]}") from None
    return total
