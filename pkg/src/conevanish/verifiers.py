"""Verification pipelines that emit deterministic certificates.

Each pipeline runs a fixed list of checks. A check has a name, a status
(``pass``, ``fail`` or ``skipped``) and a JSON witness. Checks whose name
starts with ``hypothesis:`` test the preconditions of the statement being
certified; if one fails the verdict is at best ``inconclusive``.
"""

from __future__ import annotations

import contextvars
import hashlib
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field

from . import __version__
from .cohomology import (
    CohomologyError,
    cohomology_table,
    free_resolution,
    is_gorenstein_graded,
    kunneth_dim,
    minimal_generators,
    sheaf_cohomology_dim,
)
from .constructions import (
    ConstructionError,
    ProductConeInstance,
    blowup_chart,
    build_product_instance,
    build_segre,
    fiber_cone,
    jacobian_singular_locus,
    product_ideal,
    segre_image_ideal,
    rees_presentation,
    smooth_at_origin,
)
from .groebner import BudgetExceeded, GBStats
from .hilbert import hilbert_series, krull_dimension
from .ideals import Ideal, ideal_equal
from .parser import format_polynomial, parse_polynomial
from .ring import PolyRing, RingMap

PASS, FAIL, SKIPPED = "pass", "fail", "skipped"

FIELD_NOTE = (
    "computed over {field}; ideal membership and Hilbert functions are stable under "
    "extension of the base field"
)
PRIME_FIELD_NOTE = (
    "a prime-field run certifies the characteristic-p construction; the characteristic-0 "
    "statement additionally needs the same certificate over Q"
)


class VerificationError(ValueError):
    """Input violates a pipeline precondition."""


def thread_count(requested: int | None = None) -> int:
    """Worker cap: ``requested`` or ``CONEVANISH_THREADS`` (default 1)."""
    if requested is not None:
        return max(1, requested)
    try:
        return max(1, int(os.environ.get("CONEVANISH_THREADS", "1")))
    except ValueError:
        return 1


def _map(fn, items, threads: int | None = None) -> list:
    items = list(items)
    n = thread_count(threads)
    if n == 1 or len(items) < 2:
        return [fn(x) for x in items]
    # each task runs in a copy of the caller's context so budgets carry over
    ctx = contextvars.copy_context()
    with ThreadPoolExecutor(max_workers=n) as pool:
        futures = [pool.submit(ctx.copy().run, fn, x) for x in items]
        return [f.result() for f in futures]


# -- canonical data -----------------------------------------------------------

def canonical_ideal(I: Ideal) -> Ideal:
    """Same ideal with generators in a canonical order (degree, lead, text)."""
    ring = I.ring
    gens = sorted(set(I.gens), key=lambda f: (f.degree(), ring.pack(f.leading_monomial()), str(f)))
    return Ideal(ring, gens)


def ideal_json(I: Ideal) -> dict:
    return {"ring": str(I.ring), "generators": [format_polynomial(g) for g in I.gens]}


def gb_json(I: Ideal) -> list[str]:
    return [format_polynomial(g) for g in I.groebner_basis()]


def dumps(data) -> str:
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


@dataclass
class Certificate:
    claim_id: str
    inputs: dict
    field: str
    checks: list[dict] = dc_field(default_factory=list)
    assumptions_unverified: list[str] = dc_field(default_factory=list)
    notes: list[str] = dc_field(default_factory=list)
    records: dict = dc_field(default_factory=dict)
    stats: dict = dc_field(default_factory=lambda: {"pairs_processed": 0, "max_degree": 0})

    def add(self, name: str, status: str, witness=None):
        self.checks.append({"name": name, "status": status, "witness": witness if witness is not None else {}})
        return status

    def merge_stats(self, stats: GBStats):
        self.stats["pairs_processed"] += stats.pairs_processed
        self.stats["max_degree"] = max(self.stats["max_degree"], stats.max_degree)

    @property
    def inputs_hash(self) -> str:
        blob = json.dumps(self.inputs, sort_keys=True, separators=(",", ":")).encode()
        return hashlib.sha256(blob).hexdigest()

    @property
    def verdict(self) -> str:
        core = [c for c in self.checks if not c["name"].startswith("hypothesis:")]
        hyp = [c for c in self.checks if c["name"].startswith("hypothesis:")]
        if any(c["status"] == FAIL for c in core):
            return "fail"
        if any(c["status"] == FAIL for c in hyp):
            return "inconclusive"
        return "pass"

    @property
    def budget_exhausted(self) -> bool:
        return any(
            c["status"] == SKIPPED and "budget" in str(c["witness"].get("reason", ""))
            for c in self.checks
        )

    def check(self, name: str) -> dict:
        for c in self.checks:
            if c["name"] == name:
                return c
        raise KeyError(name)

    def to_json(self) -> dict:
        return {
            "assumptions_unverified": list(self.assumptions_unverified),
            "checks": list(self.checks),
            "claim_id": self.claim_id,
            "field": self.field,
            "inputs": self.inputs,
            "inputs_hash": self.inputs_hash,
            "notes": list(self.notes),
            "records": self.records,
            "stats": dict(self.stats),
            "verdict": self.verdict,
            "version": __version__,
        }

    def dumps(self) -> str:
        return dumps(self.to_json())


def _new_certificate(claim_id: str, inputs: dict, field) -> Certificate:
    cert = Certificate(claim_id, inputs, str(field))
    cert.notes.append(FIELD_NOTE.format(field=field))
    if field.p:
        cert.notes.append(PRIME_FIELD_NOTE)
    return cert


def _instance_inputs(inst: ProductConeInstance) -> dict:
    return {
        "IV": ideal_json(inst.IV),
        "IW": ideal_json(inst.IW),
        "m": inst.ctx.m,
        "n": inst.ctx.n,
    }


def _canonical_instance(inst: ProductConeInstance) -> ProductConeInstance:
    return build_product_instance(inst.ctx, canonical_ideal(inst.IV), canonical_ideal(inst.IW))


def _skip_reason(exc: Exception) -> dict:
    return {"reason": f"budget exceeded: {exc}"}


# -- exceptional fiber ----------------------------------------------------------

def check_exceptional_fiber(inst: ProductConeInstance) -> Certificate:
    """The fiber over the vertex of the blow-up of ``Y`` along ``Z`` is ``V``."""
    inst = _canonical_instance(inst)
    ctx = inst.ctx
    cert = _new_certificate("exceptional_fiber", _instance_inputs(inst), ctx.field)
    fiber = None
    try:
        rees = rees_presentation(inst.IY, inst.IZ)
        cert.merge_stats(rees.stats)
        cert.add("rees_presentation", PASS, {
            "ambient": str(rees.ambient),
            "generators": len(rees.rees_ideal.gens),
        })
        fiber = fiber_cone(rees)
    except BudgetExceeded as exc:
        cert.add("rees_presentation", SKIPPED, _skip_reason(exc))
    if fiber is None:
        cert.add("fiber_equals_V", SKIPPED, {"reason": "no Rees presentation"})
    else:
        cert.merge_stats(fiber.gb_stats)
        to_x = RingMap(fiber.ring, ctx.ring_x, ctx.ring_x.gens())
        renamed = Ideal(ctx.ring_x, [to_x(g) for g in fiber.gens])
        equal = ideal_equal(renamed, inst.IV)
        cert.add("fiber_equals_V", PASS if equal else FAIL, {
            "fiber_ideal": gb_json(fiber),
            "IV_basis": gb_json(inst.IV),
        })
        cert.records["fiber_ideal"] = gb_json(fiber)
    try:
        dim_y = krull_dimension(inst.IY)
        dim_z = krull_dimension(inst.IY + inst.IZ)
        ok = dim_z == dim_y - 1
        cert.add("divisor_codimension_one", PASS if ok else FAIL, {"dim_Y": dim_y, "dim_Z": dim_z})
    except BudgetExceeded as exc:
        cert.add("divisor_codimension_one", SKIPPED, _skip_reason(exc))
    return cert


# -- factor hypotheses ----------------------------------------------------------

def _factor_facts(I: Ideal) -> dict:
    """Dimension, complete-intersection and normality data of ``Proj S/I``."""
    dim_cone = krull_dimension(I)
    codim = I.ring.nvars - dim_cone
    gens = minimal_generators(I)
    ci = len(gens) == codim
    facts = {
        "codimension": codim,
        "complete_intersection": ci,
        "dimension": dim_cone - 1,
        "minimal_generators": len(gens),
    }
    if ci and dim_cone >= 1:
        # a complete intersection is normal iff it is regular in codimension one
        sing = jacobian_singular_locus(Ideal(I.ring, gens), codim) if codim else None
        sing_dim = krull_dimension(sing) - 1 if sing is not None else -1
        facts["singular_locus_dimension"] = sing_dim
        facts["normal"] = sing_dim <= facts["dimension"] - 2
    else:
        facts["normal"] = None
    return facts


def _factor_hypotheses(cert: Certificate, facts: dict[str, dict]):
    for name, f in facts.items():
        cert.add(f"hypothesis:{name}_complete_intersection", PASS if f["complete_intersection"] else FAIL, {
            "codimension": f["codimension"],
            "minimal_generators": f["minimal_generators"],
        })
        cert.add(f"hypothesis:{name}_positive_dimension", PASS if f["dimension"] >= 1 else FAIL, {
            "dimension": f["dimension"],
        })
        if f["normal"] is None:
            cert.add(f"hypothesis:{name}_normal", SKIPPED, {"reason": "normality test needs a complete intersection"})
        else:
            cert.add(f"hypothesis:{name}_normal", PASS if f["normal"] else FAIL, {
                "singular_locus_dimension": f["singular_locus_dimension"],
            })


# -- projective normality -------------------------------------------------------

def default_dmax(IV: Ideal, IW: Ideal) -> int:
    return max(1, 2 * (IV.max_degree() + IW.max_degree()))


def check_projective_normality(
    IV: Ideal,
    IW: Ideal,
    d_max: int | None = None,
    threads: int | None = None,
    regularity: bool = True,
) -> Certificate:
    """Degreewise surjectivity of ``H^0(P^n x P^m, O(d)) -> H^0(V x W, O(d))``.

    The image in degree ``d`` is the image of ``k[z]_d`` in
    ``(S/IV)_d (x) (S/IW)_d``; its dimension is the Hilbert function of the
    Segre-map kernel, with no saturation applied. The target is the Kunneth
    count ``h^0(V, O(d)) h^0(W, O(d))``.
    """
    IV, IW = canonical_ideal(IV), canonical_ideal(IW)
    if d_max is None:
        d_max = default_dmax(IV, IW)
    if d_max < 1:
        raise VerificationError("d_max must be at least 1")
    field = IV.ring.field
    ctx = build_segre(IV.ring.nvars - 1, IW.ring.nvars - 1, field)
    IV, IW, _ = product_ideal(ctx, IV, IW)
    inputs = {"IV": ideal_json(IV), "IW": ideal_json(IW), "d_max": d_max, "m": ctx.m, "n": ctx.n}
    cert = _new_certificate("projective_normality", inputs, field)
    facts = {"V": _factor_facts(IV), "W": _factor_facts(IW)}
    _factor_hypotheses(cert, facts)
    dv, dw = facts["V"]["dimension"], facts["W"]["dimension"]
    # a product of two projective spaces is the base case and needs no condition
    linear = facts["V"]["codimension"] == facts["W"]["codimension"] == 0
    cond = linear or dv + dw > 2 or (dv == dw == 1 and ctx.n == ctx.m == 2)
    cert.add("hypothesis:dimension_condition", PASS if cond else FAIL, {
        "dim_V": dv, "dim_W": dw, "linear_factors": linear, "n": ctx.n, "m": ctx.m,
    })
    cert.records["tested_degrees"] = [1, d_max]
    try:
        twists = range(1, d_max + 1)
        hV = cohomology_table(IV, twists, saturate=True)
        hW = cohomology_table(IW, twists, saturate=True)
        stats = GBStats()
        IY = segre_image_ideal(ctx, IV, IW, stats=stats)
        HS = hilbert_series(IY)
        cert.merge_stats(stats)
    except BudgetExceeded as exc:
        cert.add("degreewise_surjectivity", SKIPPED, _skip_reason(exc))
        return cert
    except CohomologyError as exc:
        cert.add("degreewise_surjectivity", FAIL, {"reason": str(exc)})
        return cert

    def one_degree(d: int) -> tuple[int, int, int]:
        return d, HS.function(d), kunneth_dim(hV, hW, 0, d)

    for d, image, target in _map(one_degree, twists, threads):
        cert.add(f"degree_{d}", PASS if image == target else FAIL, {"image_dim": image, "target_dim": target})
    if regularity:
        try:
            cert.records["regularity"] = free_resolution(IY).betti().regularity()
        except BudgetExceeded:
            cert.records["regularity"] = None
    return cert


# -- Gorenstein blow-up -----------------------------------------------------------

def _chart_check(rees, j: int) -> tuple[str, dict]:
    chart = blowup_chart(rees, j)
    try:
        sm = smooth_at_origin(chart)
    except BudgetExceeded as exc:
        return SKIPPED, _skip_reason(exc)
    if not sm.on_variety:
        return SKIPPED, {"reason": "chart origin does not lie on the blow-up"}
    if sm.smooth:
        return PASS, {"method": "jacobian", "jacobian_rank": sm.jacobian_rank, "local_dimension": sm.local_dimension}
    if chart.is_homogeneous():
        try:
            ok = is_gorenstein_graded(chart)
        except BudgetExceeded as exc:
            return SKIPPED, _skip_reason(exc)
        return (PASS if ok else FAIL), {"method": "graded", "gorenstein": ok}
    return SKIPPED, {
        "reason": "chart is singular at the origin and not graded; no sound local Gorenstein test",
        "jacobian_rank": sm.jacobian_rank,
    }


def check_blowup_gorenstein(
    inst: ProductConeInstance, mode: str = "hypothesis", threads: int | None = None
) -> Certificate:
    """Gorenstein property of the blow-up of ``Y`` along ``Z``.

    ``hypothesis`` mode checks that both factors are positive-dimensional
    normal complete intersections, which implies the claim. ``direct`` mode
    also tests every Rees chart at its origin.
    """
    if mode not in ("hypothesis", "direct"):
        raise VerificationError(f"unknown mode {mode!r}")
    inst = _canonical_instance(inst)
    inputs = dict(_instance_inputs(inst), mode=mode)
    cert = _new_certificate("blowup_gorenstein", inputs, inst.ctx.field)
    try:
        facts = {"V": _factor_facts(inst.IV), "W": _factor_facts(inst.IW)}
    except BudgetExceeded as exc:
        cert.add("hypothesis:factors", SKIPPED, _skip_reason(exc))
        facts = {}
    _factor_hypotheses(cert, facts)
    if mode == "direct":
        try:
            rees = rees_presentation(inst.IY, inst.IZ)
            cert.merge_stats(rees.stats)
        except BudgetExceeded as exc:
            cert.add("rees_presentation", SKIPPED, _skip_reason(exc))
            return cert
        results = _map(lambda j: _chart_check(rees, j), range(len(rees.rees_vars)), threads)
        for j, (status, witness) in enumerate(results):
            cert.add(f"chart_{j}", status, witness)
    return cert


# -- elliptic example ---------------------------------------------------------------

E1_ASSUMPTIONS = (
    "R^2 f_* I_E = 0 is inferred from the fiber-dimension bound (argument not recomputed)",
    "omega_X is trivial: X is smooth in codimension one with trivial canonical divisor (not computed)",
    "X is log canonical (no discrepancy computation)",
)


def _require_smooth_cubic(I: Ideal, name: str) -> dict:
    if I.ring.nvars != 3 or len(I.gens) != 1 or not I.is_homogeneous() or I.gens[0].degree() != 3:
        raise VerificationError(f"{name} must be a single cubic form in three variables")
    sing = jacobian_singular_locus(I, 1)
    dim = krull_dimension(sing)
    if dim > 0:
        raise VerificationError(f"{name} is a singular cubic")
    return {"cubic": format_polynomial(I.gens[0]), "singular_locus_cone_dimension": dim}


def verify_example_e1(
    IE1: Ideal, IE2: Ideal, direct_gorenstein: bool = False, threads: int | None = None
) -> Certificate:
    """Ingredients of ``R^1 f_* omega_X != 0`` for the blow-up over two plane cubics."""
    IE1, IE2 = canonical_ideal(IE1), canonical_ideal(IE2)
    field = IE1.ring.field
    wa = _require_smooth_cubic(IE1, "E1")
    wb = _require_smooth_cubic(IE2, "E2")
    ctx = build_segre(2, 2, field)
    inst = build_product_instance(ctx, IE1, IE2)
    inputs = dict(_instance_inputs(inst), direct_gorenstein=direct_gorenstein)
    cert = _new_certificate("elliptic_example", inputs, field)
    cert.assumptions_unverified.extend(E1_ASSUMPTIONS)
    cert.add("a_smooth_cubics", PASS, {"E1": wa, "E2": wb})

    fib = check_exceptional_fiber(inst)
    cert.stats["pairs_processed"] += fib.stats["pairs_processed"]
    cert.stats["max_degree"] = max(cert.stats["max_degree"], fib.stats["max_degree"])
    cert.add("b_exceptional_fiber", _sub_status(fib), _sub_witness(fib, fiber_ideal=fib.records.get("fiber_ideal")))

    h1 = sheaf_cohomology_dim(inst.IV, 1, 0)
    cert.add("c_h1_structure_sheaf", PASS if h1 == 1 else FAIL, {"h1": h1})

    fiber_ideal = fib.records.get("fiber_ideal")
    if fiber_ideal is None:
        reason = "budget exceeded before the fiber cone" if fib.budget_exhausted else "fiber cone unavailable"
        cert.add("d_fiber_dimension", SKIPPED, {"reason": reason})
    else:
        T = PolyRing(field, [f"T{i}" for i in range(3)])
        F = Ideal(T, [parse_polynomial(T, g) for g in fiber_ideal])
        fdim = krull_dimension(F) - 1
        cert.add("d_fiber_dimension", PASS if fdim <= 1 else FAIL, {"max_fiber_dimension": fdim})

    gor = check_blowup_gorenstein(inst, "hypothesis")
    cert.add("e_gorenstein", _sub_status(gor), _sub_witness(gor, mode="hypothesis"))
    if direct_gorenstein:
        direct = check_blowup_gorenstein(inst, "direct", threads=threads)
        cert.stats["pairs_processed"] += direct.stats["pairs_processed"]
        charts = [c for c in direct.checks if c["name"].startswith("chart_")]
        if any(c["status"] == FAIL for c in charts):
            status = FAIL
        elif charts and all(c["status"] == PASS for c in charts):
            status = PASS
        else:
            status = SKIPPED
        cert.add("e_gorenstein_direct", status, {
            "charts": {c["name"]: c["status"] for c in charts},
            "reason": "some chart origins could not be decided" if status == SKIPPED else "",
        })
    if cert.verdict == "pass":
        cert.records["conclusion"] = (
            "all computable ingredients of R^1 f_* omega_X != 0 verified; "
            "the implication rests on the listed unverified assumptions"
        )
    return cert


def _sub_status(cert: Certificate) -> str:
    if cert.verdict == "pass" and cert.budget_exhausted:
        return SKIPPED
    return {"pass": PASS, "fail": FAIL, "inconclusive": FAIL}[cert.verdict]


def _sub_witness(cert: Certificate, **extra) -> dict:
    w = dict(extra, verdict=cert.verdict)
    if _sub_status(cert) == SKIPPED:
        w["reason"] = "budget exceeded in a sub-check"
    return w
