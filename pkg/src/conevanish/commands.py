"""Subcommands shared by the command line and scenario files.

A subcommand is parsed with argparse and executed against a resolver that
turns ideal and map references into objects: file paths on the command line,
declared names inside a scenario.
"""

from __future__ import annotations

import argparse
from dataclasses import dataclass, field as dc_field

from .cohomology import CohomologyError, is_cohen_macaulay, is_gorenstein_graded, sheaf_cohomology_dim
from .constructions import (
    ConstructionError,
    blowup_chart,
    build_product_instance,
    build_segre,
    fiber_cone,
    rees_presentation,
)
from .field import Field, FieldError
from .groebner import BudgetExceeded, GBStats
from .hilbert import NotHomogeneous, hilbert_series
from .ideals import Ideal, eliminate, groebner_basis, kernel_of_map, normal_form, saturate
from .parser import ParseError, format_polynomial, parse_polynomial, parse_ring
from .resolution import free_resolution
from .ring import RingError, RingMap
from .verifiers import (
    Certificate,
    VerificationError,
    check_blowup_gorenstein,
    check_exceptional_fiber,
    check_projective_normality,
    verify_example_e1,
)

OK, PASS, FAIL, INCONCLUSIVE, BUDGET, ERROR = "ok", "pass", "fail", "inconclusive", "budget", "error"

# errors that describe bad mathematical input rather than bad syntax
DOMAIN_ERRORS = (
    CohomologyError,
    ConstructionError,
    FieldError,
    NotHomogeneous,
    RingError,
    VerificationError,
    ZeroDivisionError,
)


class UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


@dataclass
class Outcome:
    status: str
    data: dict
    text: str
    certificate: Certificate | None = dc_field(default=None, repr=False)


class Resolver:
    """Turns references into ideals and maps."""

    def ideal(self, ref: str) -> Ideal:
        raise NotImplementedError

    def ring_map(self, ref: str) -> RingMap:
        raise NotImplementedError

    @property
    def field(self) -> Field | None:
        return None


def field_arg(text: str) -> Field:
    text = text.strip()
    if text == "Q":
        return Field(0)
    if text.startswith("F") and text[1:].isdigit():
        return Field(int(text[1:]))
    raise argparse.ArgumentTypeError(f"field must be Q or F<prime>, got {text!r}")


# -- formatting ---------------------------------------------------------------

def ideal_doc(I: Ideal, name: str = "result", polys=None) -> str:
    polys = list(I.gens if polys is None else polys)
    lines = [str(I.ring)]
    if not polys:
        lines.append(f"ideal {name} = 0;")
    else:
        body = ",\n  ".join(format_polynomial(g) for g in polys)
        lines.append(f"ideal {name} =\n  {body};")
    return "\n".join(lines) + "\n"


def ideal_data(I: Ideal, polys=None, stats=None) -> dict:
    polys = list(I.gens if polys is None else polys)
    data = {
        "generators": [format_polynomial(g) for g in polys],
        "order": I.ring.order,
        "ring": str(I.ring),
    }
    if stats is not None:
        data["stats"] = stats.to_json()
    return data


def certificate_text(cert: Certificate) -> str:
    head = f"{cert.claim_id}: {cert.verdict.upper()}"
    if cert.budget_exhausted:
        head += " (budget exhausted, some checks skipped)"
    lines = [head]
    for c in cert.checks:
        lines.append(f"  {c['status'].upper():8} {c['name']}")
    for a in cert.assumptions_unverified:
        lines.append(f"  UNVERIFIED {a}")
    return "\n".join(lines) + "\n"


# -- subcommand implementations ------------------------------------------------

def _gb(args, res: Resolver) -> Outcome:
    I = res.ideal(args.ideal)
    gb = groebner_basis(I)
    return Outcome(OK, ideal_data(I, gb, I.gb_stats), ideal_doc(I, "gb", gb))


def _nf(args, res: Resolver) -> Outcome:
    I = res.ideal(args.ideal)
    try:
        f = parse_polynomial(I.ring, args.poly)
    except ParseError as exc:
        raise UsageError(f"polynomial: {exc}") from None
    r = normal_form(f, I)
    text = format_polynomial(r)
    return Outcome(OK, {"normal_form": text, "ring": str(I.ring), "zero": not r}, text + "\n")


def _split_vars(text: str) -> list[str]:
    return [v.strip() for v in text.split(",") if v.strip()]


def _eliminate(args, res: Resolver) -> Outcome:
    I = res.ideal(args.ideal)
    stats = GBStats()
    J = eliminate(I, _split_vars(args.keep), stats=stats)
    return Outcome(OK, ideal_data(J, stats=stats), ideal_doc(J, "eliminated"))


def _saturate(args, res: Resolver) -> Outcome:
    I = res.ideal(args.ideal)
    J = res.ideal(args.by) if args.by else Ideal(I.ring, I.ring.gens())
    S = saturate(I, J)
    gb = groebner_basis(S)
    return Outcome(OK, ideal_data(S, gb), ideal_doc(S, "saturated", gb))


def _kernel(args, res: Resolver) -> Outcome:
    m = res.ring_map(args.map)
    stats = GBStats()
    K = kernel_of_map(m, stats=stats)
    gb = groebner_basis(K)
    return Outcome(OK, ideal_data(K, gb, stats), ideal_doc(K, "kernel", gb))


def _poly_text(coeffs) -> str:
    terms = []
    for k, c in enumerate(coeffs):
        if not c:
            continue
        mono = "1" if k == 0 else ("t" if k == 1 else f"t^{k}")
        if k and abs(c) == 1:
            body = mono
        else:
            body = f"{abs(c)}" if k == 0 else f"{abs(c)}*{mono}"
        sign = "-" if c < 0 else "+"
        terms.append((sign, body))
    if not terms:
        return "0"
    out = ("-" if terms[0][0] == "-" else "") + terms[0][1]
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out


def _hilbert(args, res: Resolver) -> Outcome:
    I = res.ideal(args.ideal)
    H = hilbert_series(I)
    values = [H.function(d) for d in range(args.upto + 1)]
    data = dict(H.to_json(), values=values)
    text = (
        f"numerator: {_poly_text(H.numerator)}\n"
        f"series: ({_poly_text(H.numerator)}) / (1 - t)^{H.ambient_vars}\n"
        f"dimension: {H.dimension}\n"
        f"degree: {H.degree}\n"
        f"values: {' '.join(map(str, values))}\n"
    )
    return Outcome(OK, data, text)


def _betti(args, res: Resolver) -> Outcome:
    I = res.ideal(args.ideal)
    B = free_resolution(I).betti()
    data = {"betti": B.to_json(), "length": B.length, "regularity": B.regularity()}
    return Outcome(OK, data, str(B) + "\n")


def _cm(args, res: Resolver) -> Outcome:
    value = is_cohen_macaulay(res.ideal(args.ideal))
    return Outcome(OK, {"cohen_macaulay": value}, f"{str(value).lower()}\n")


def _gorenstein(args, res: Resolver) -> Outcome:
    value = is_gorenstein_graded(res.ideal(args.ideal))
    return Outcome(OK, {"gorenstein": value}, f"{str(value).lower()}\n")


def _cohomology(args, res: Resolver) -> Outcome:
    I = res.ideal(args.ideal)
    h = sheaf_cohomology_dim(I, args.i, args.twist, saturate=args.saturate)
    return Outcome(OK, {"i": args.i, "twist": args.twist, "value": h}, f"{h}\n")


def _segre(args, res: Resolver) -> Outcome:
    ctx = build_segre(args.n, args.m, res.field or Field(0))
    data = dict(ideal_data(ctx.segre_ideal), n=args.n, m=args.m)
    return Outcome(OK, data, ideal_doc(ctx.segre_ideal, "segre"))


def _instance(args, res: Resolver):
    IV, IW = res.ideal(args.iv), res.ideal(args.iw)
    if IV.ring.field != IW.ring.field:
        raise ConstructionError("IV and IW must share a field")
    ctx = build_segre(IV.ring.nvars - 1, IW.ring.nvars - 1, IV.ring.field)
    return build_product_instance(ctx, IV, IW)


def _instance_cmd(args, res: Resolver) -> Outcome:
    inst = _instance(args, res)
    data = {"IY": ideal_data(inst.IY), "IZ": ideal_data(inst.IZ), "m_v": ideal_data(inst.m_v)}
    text = ideal_doc(inst.IY, "IY") + "\n".join(
        f"ideal {name} = {', '.join(format_polynomial(g) for g in I.gens)};"
        for name, I in (("IZ", inst.IZ), ("m_v", inst.m_v))
    ) + "\n"
    return Outcome(OK, data, text)


def _rees(args, res: Resolver) -> Outcome:
    inst = _instance(args, res)
    r = rees_presentation(inst.IY, inst.IZ)
    gb = groebner_basis(r.rees_ideal)
    return Outcome(OK, ideal_data(r.rees_ideal, gb, r.stats), ideal_doc(r.rees_ideal, "rees", gb))


def _fiber_cone(args, res: Resolver) -> Outcome:
    inst = _instance(args, res)
    F = fiber_cone(rees_presentation(inst.IY, inst.IZ))
    gb = groebner_basis(F)
    return Outcome(OK, ideal_data(F, gb), ideal_doc(F, "fiber", gb))


def _chart(args, res: Resolver) -> Outcome:
    inst = _instance(args, res)
    C = blowup_chart(rees_presentation(inst.IY, inst.IZ), args.j)
    return Outcome(OK, dict(ideal_data(C), j=args.j), ideal_doc(C, f"chart{args.j}"))


def _certificate_outcome(cert: Certificate) -> Outcome:
    status = {"pass": PASS, "fail": FAIL, "inconclusive": INCONCLUSIVE}[cert.verdict]
    if status == PASS and cert.budget_exhausted:
        status = BUDGET
    return Outcome(status, cert.to_json(), certificate_text(cert), cert)


def _default_cubics(res: Resolver):
    field = res.field or Field(31)
    r1 = parse_ring(f"ring {field}[x0,x1,x2] grevlex")
    r2 = parse_ring(f"ring {field}[y0,y1,y2] grevlex")
    return Ideal(r1, ["x0^3+x1^3+x2^3"]), Ideal(r2, ["y0^3+y1^3+y2^3"])


def _verify(args, res: Resolver) -> Outcome:
    claim = args.claim
    if claim == "e1":
        if (args.iv is None) != (args.iw is None):
            raise UsageError("verify e1 takes both cubics or neither")
        if args.iv is None:
            E1, E2 = _default_cubics(res)
        else:
            E1, E2 = res.ideal(args.iv), res.ideal(args.iw)
        return _certificate_outcome(verify_example_e1(E1, E2, direct_gorenstein=args.direct_gorenstein))
    if args.iv is None or args.iw is None:
        raise UsageError(f"verify {claim} needs IV and IW")
    if claim == "normality":
        IV, IW = res.ideal(args.iv), res.ideal(args.iw)
        return _certificate_outcome(check_projective_normality(IV, IW, args.dmax))
    inst = _instance(args, res)
    if claim == "fiber":
        return _certificate_outcome(check_exceptional_fiber(inst))
    return _certificate_outcome(check_blowup_gorenstein(inst, args.mode))


# -- argparse wiring ----------------------------------------------------------------

def _add_ideal(p, name="ideal", help_text="ideal reference"):
    p.add_argument(name, help=help_text)


def _add_pair(p, optional=False):
    kw = {"nargs": "?", "default": None} if optional else {}
    p.add_argument("iv", help="ideal of V", **kw)
    p.add_argument("iw", help="ideal of W", **kw)


COMMANDS = {}


def _register(sub, name, func, help_text):
    p = sub.add_parser(name, help=help_text)
    COMMANDS[name] = func
    p.set_defaults(func=func, command=name)
    return p


def add_subcommands(parser: argparse.ArgumentParser, ref_help: str):
    sub = parser.add_subparsers(dest="command", metavar="SUBCOMMAND")
    sub.required = True
    p = _register(sub, "gb", _gb, "reduced Groebner basis")
    _add_ideal(p, help_text=ref_help)
    p = _register(sub, "nf", _nf, "normal form of a polynomial")
    _add_ideal(p, help_text=ref_help)
    p.add_argument("poly", help="polynomial in the ideal's ring")
    p = _register(sub, "eliminate", _eliminate, "intersect with a subring")
    _add_ideal(p, help_text=ref_help)
    p.add_argument("--keep", required=True, help="comma-separated variables to keep")
    p = _register(sub, "saturate", _saturate, "saturation, by default at the irrelevant ideal")
    _add_ideal(p, help_text=ref_help)
    p.add_argument("--by", default=None, help="ideal to saturate by")
    p = _register(sub, "kernel", _kernel, "kernel of a ring map")
    p.add_argument("map", help="ring map reference")
    p = _register(sub, "hilbert", _hilbert, "Hilbert series")
    _add_ideal(p, help_text=ref_help)
    p.add_argument("--upto", type=int, default=10, help="list Hilbert function values up to this degree")
    for name, func, text in (
        ("betti", _betti, "minimal graded Betti table"),
        ("cm", _cm, "Cohen-Macaulay test"),
        ("gorenstein", _gorenstein, "graded Gorenstein test"),
    ):
        p = _register(sub, name, func, text)
        _add_ideal(p, help_text=ref_help)
    p = _register(sub, "cohomology", _cohomology, "h^i(X, O_X(twist))")
    _add_ideal(p, help_text=ref_help)
    p.add_argument("--i", type=int, required=True)
    p.add_argument("--twist", type=int, default=0)
    p.add_argument("--saturate", action="store_true", help="saturate the ideal first")
    p = _register(sub, "segre", _segre, "Segre ideal of P^n x P^m")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p = _register(sub, "instance", _instance_cmd, "cone, divisor and vertex ideals of an instance")
    p.add_argument("--iv", required=True, help="ideal of V")
    p.add_argument("--iw", required=True, help="ideal of W")
    for name, func, text in (
        ("rees", _rees, "Rees algebra of the divisor ideal"),
        ("fiber-cone", _fiber_cone, "fiber cone over the vertex"),
    ):
        p = _register(sub, name, func, text)
        _add_pair(p)
    p = _register(sub, "chart", _chart, "affine chart T_j = 1 of the blow-up")
    _add_pair(p)
    p.add_argument("--j", type=int, required=True)
    p = _register(sub, "verify", _verify, "run a verification pipeline")
    p.add_argument("claim", choices=["fiber", "normality", "gorenstein", "e1"])
    _add_pair(p, optional=True)
    p.add_argument("--dmax", type=int, default=None)
    p.add_argument("--mode", choices=["direct", "hypothesis"], default="hypothesis")
    p.add_argument("--direct-gorenstein", action="store_true")
    return sub


def invocation_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="scenario", add_help=False)
    add_subcommands(p, "declared ideal name")
    return p


def execute(args, res: Resolver) -> Outcome:
    """Run one parsed subcommand, mapping failures to statuses."""
    try:
        return args.func(args, res)
    except BudgetExceeded as exc:
        return Outcome(BUDGET, {"error": str(exc)}, f"BUDGET {exc}\n")
    except DOMAIN_ERRORS as exc:
        return Outcome(ERROR, {"error": str(exc)}, f"ERROR {exc}\n")
