"""Command-line interface.

Exit codes: 0 pass, 1 violations found, 2 usage or configuration error,
3 resource budget exceeded on a required step.
"""

from __future__ import annotations

import argparse
import sys
import time

from . import __version__
from .abelian import AbelianGroup, davenport
from .classnum import class_number
from .elasticity import elasticity_interval, hfd_check
from .errors import ConfigError, DomainError, ResourceBudgetError
from .experiments import (
    ScanReport,
    VerifyConfig,
    extremal_lf_construct,
    four_to_one_check,
    mx_search,
    parse_config,
    pell_scan,
    scan_splitfree,
)
from .quadfield import (
    delta_exponent,
    fundamental_unit,
    is_split_free,
    new_field,
    unit_group_size,
)
from .residue import big_L, ell, precl_structure, psi
from .elasticity import princl_structure

EXIT_PASS = 0
EXIT_VIOLATIONS = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--format",
        choices=("json", "csv", "table"),
        default="table",
        help="output format (default: table)",
    )
    parser.add_argument(
        "--budget",
        type=float,
        default=2.0,
        metavar="SECONDS",
        help="per-item factoring time budget (default: 2.0)",
    )
    parser.add_argument(
        "--enum-budget",
        type=int,
        default=10**6,
        metavar="N",
        help="group enumeration budget on psi(f) (default: 10^6)",
    )
    parser.add_argument(
        "--threads", type=int, default=1, help="worker count for scans"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quadorders",
        description="Exact invariants and elasticity bounds for quadratic orders.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("field", help="field-level data for Q(sqrt(D))")
    p.add_argument("D", type=int)
    _add_common(p)

    p = subs.add_parser("order", help="invariants of the order of conductor f")
    p.add_argument("D", type=int)
    p.add_argument("f", type=int)
    _add_common(p)

    p = subs.add_parser("elasticity", help="elasticity interval for conductor f")
    p.add_argument("D", type=int)
    p.add_argument("f", type=int)
    _add_common(p)

    p = subs.add_parser("hfd", help="half-factoriality verdict for conductor f")
    p.add_argument("D", type=int)
    p.add_argument("f", type=int)
    _add_common(p)

    p = subs.add_parser("davenport", help="Davenport constant of C_d1 x C_d2 x ...")
    p.add_argument("factors", help="comma-separated cyclic orders, e.g. 2,6")
    _add_common(p)

    p = subs.add_parser("scan", help="split-free conductor scan with invariant checks")
    p.add_argument("D", type=int)
    p.add_argument("--fmax", type=int, required=True)
    _add_common(p)

    p = subs.add_parser("four-to-one", help="preimage counts of L on prime powers")
    p.add_argument("D", type=int)
    p.add_argument("--mmax", type=int, required=True)
    p.add_argument("--pkmax", type=int, default=0, help="default: 10*mmax")
    _add_common(p)

    p = subs.add_parser("mx", help="best common multiple of shifted inert primes")
    p.add_argument("D", type=int)
    p.add_argument("--x", type=int, required=True)
    _add_common(p)

    p = subs.add_parser("pell", help="coefficient scan of powers of the fundamental unit")
    p.add_argument("D", type=int)
    p.add_argument("--mmax", type=int, required=True)
    _add_common(p)

    p = subs.add_parser("verify", help="run the full verification suite")
    p.add_argument("--config", help="key = value config file")
    _add_common(p)
    return parser


def _single_row_report(campaign: str, field, row: dict) -> ScanReport:
    return ScanReport(campaign, field, {}, [row], [], 0.0)


def _cmd_field(args) -> ScanReport:
    field = new_field(args.D)
    row = {
        "D": field.D,
        "disc": field.disc,
        "tau": "sqrt(D)" if field.tau_kind.name == "SQRT_D" else "(1+sqrt(D))/2",
        "real": field.real,
        "h_K": class_number(field),
    }
    if field.real:
        fu = fundamental_unit(field)
        row["fundamental_unit"] = str(fu)
        row["unit_norm"] = fu.norm
        row["delta"] = delta_exponent(field)
    else:
        row["roots_of_unity"] = unit_group_size(field)
    return _single_row_report("field", field, row)


def _cmd_order(args) -> ScanReport:
    field = new_field(args.D)
    f = args.f
    row = {
        "f": f,
        "split_free": is_split_free(field, f),
        "psi": psi(field, f),
        "L": big_L(field, f),
        "ell": ell(field, f),
        "precl": str(precl_structure(field, f, args.enum_budget)),
        "princl": str(princl_structure(field, f, args.enum_budget)),
    }
    return _single_row_report("order", field, row)


def _cmd_elasticity(args) -> ScanReport:
    field = new_field(args.D)
    interval = elasticity_interval(field, args.f, args.enum_budget)
    d = interval.diagnostics
    row = {
        "f": args.f,
        "lower": str(interval.lower),
        "upper": interval.upper_str(),
        "infinite": interval.infinite,
        "h_K": d.h_K,
        "psi": d.psi,
        "ell": d.ell,
        "Omega": d.big_omega,
        "princl": str(d.princl) if d.princl is not None else "",
        "davenport": f"[{d.davenport_used.lower}, {d.davenport_used.upper}]"
        if d.davenport_used
        else "",
    }
    return _single_row_report("elasticity", field, row)


def _cmd_hfd(args) -> ScanReport:
    field = new_field(args.D)
    verdict = hfd_check(field, args.f)
    report = ScanReport("hfd", field, {"f": args.f}, [], [], 0.0)
    for reason in verdict.reasons:
        report.rows.append(
            {
                "condition": reason.condition,
                "satisfied": reason.satisfied,
                "detail": reason.detail,
            }
        )
    report.params["verdict"] = verdict.verdict
    report.rows.insert(0, {"condition": "VERDICT", "satisfied": verdict.is_hfd, "detail": verdict.verdict})
    return report


def _cmd_davenport(args) -> ScanReport:
    try:
        factors = [int(x) for x in args.factors.split(",") if x.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad factor list {args.factors!r}") from exc
    group = AbelianGroup.from_cyclic_factors(factors)
    res = davenport(group)
    row = {
        "group": str(group),
        "order": group.order,
        "exponent": group.exponent,
        "lower": res.lower,
        "upper": res.upper,
        "exact": res.exact,
        "method": res.method.value,
    }
    return _single_row_report("davenport", None, row)


def _cmd_scan(args) -> ScanReport:
    field = new_field(args.D)
    return scan_splitfree(field, args.fmax, args.enum_budget, args.threads)


def _cmd_four_to_one(args) -> ScanReport:
    field = new_field(args.D)
    pkmax = args.pkmax if args.pkmax else 10 * args.mmax
    return four_to_one_check(field, args.mmax, pkmax)


def _cmd_mx(args) -> ScanReport:
    field = new_field(args.D)
    start = time.monotonic()
    res = mx_search(field, args.x)
    row = {
        "x": args.x,
        "M_x": res.m if res.m is not None else "",
        "count": res.count,
        "witnesses": " ".join(map(str, res.witnesses)),
        "method": res.method,
    }
    report = ScanReport(
        "mx", field, {"x": args.x}, [row], [], time.monotonic() - start
    )
    construction = extremal_lf_construct(field, args.x)
    if construction.degenerate:
        report.rows.append({"x": args.x, "g": "degenerate"})
    else:
        report.rows.append(
            {
                "x": args.x,
                "g": construction.g,
                "L_g": construction.big_l,
                "empirical_exponent": construction.empirical_exponent
                if construction.empirical_exponent is not None
                else "",
            }
        )
    return report


def _cmd_pell(args) -> ScanReport:
    field = new_field(args.D)
    return pell_scan(field, args.mmax, args.budget)


def _cmd_verify(args) -> ScanReport:
    from .experiments import verify_suite

    config = parse_config(args.config) if args.config else VerifyConfig()
    if args.threads > 1:
        config.threads = args.threads
    return verify_suite(config)


_COMMANDS = {
    "field": _cmd_field,
    "order": _cmd_order,
    "elasticity": _cmd_elasticity,
    "hfd": _cmd_hfd,
    "davenport": _cmd_davenport,
    "scan": _cmd_scan,
    "four-to-one": _cmd_four_to_one,
    "mx": _cmd_mx,
    "pell": _cmd_pell,
    "verify": _cmd_verify,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        report = _COMMANDS[args.command](args)
    except (ConfigError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceBudgetError as exc:
        print(f"resource budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    if args.format == "json":
        print(report.to_json())
    elif args.format == "csv":
        print(report.to_csv(), end="")
    else:
        print(report.to_table())
    return EXIT_PASS if not report.violations else EXIT_VIOLATIONS


if __name__ == "__main__":
    sys.exit(main())
