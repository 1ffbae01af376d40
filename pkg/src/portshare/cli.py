"""Command-line front end.

Verbs: validate, masks, estimate, construct, simulate, compare.  Exit
status 0 on success, 1 on a domain error (bad scheme, infeasible
constraints, unreadable file), 2 on a usage error.
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from .construct import (
    ConstructError,
    DEFAULT_PROFILE,
    UtilizationProfile,
    assign_masks,
    build_scheme,
    mask_occupancy,
    parse_profile,
    select_masks,
)
from .depth import scheme_critical_path, threshold_compare
from .minimize import MinimizeError
from .scheme import (
    SchemeError,
    SchemeMatrix,
    classify_scheme,
    extract_masks,
    format_mask,
    mask_ports,
    parse_scheme,
    serialize_scheme,
    validate_scheme,
)
from .simulate import SimConfig, compare_schemes, simulate


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(message)


class DomainExit(Exception):
    """Domain failure that should terminate with status 1."""


def _load_scheme(path: str) -> SchemeMatrix:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return parse_scheme(fh.read())
    except OSError as exc:
        raise DomainExit(f"cannot read scheme file: {exc}") from exc


def _load_profile(spec: str) -> UtilizationProfile:
    if spec == "default":
        return DEFAULT_PROFILE
    try:
        with open(spec, "r", encoding="utf-8") as fh:
            return parse_profile(fh.read())
    except OSError as exc:
        raise DomainExit(f"cannot read profile file: {exc}") from exc


def _mask_line(mask: int, width: int, profile: UtilizationProfile) -> str:
    ports = ",".join(str(p) for p in mask_ports(mask))
    occ = mask_occupancy(mask, profile)
    return (
        f"mask={format_mask(mask, width)} ports={ports} "
        f"occupancy={occ * 100:.1f}%"
    )


def _cmd_validate(args: argparse.Namespace) -> int:
    scheme = _load_scheme(args.scheme)
    problems = validate_scheme(scheme)
    print(f"classification={classify_scheme(scheme).value}")
    masks = sorted(extract_masks(scheme))
    print(f"masks={len(masks)}")
    width = scheme.config.retained_ports
    for m in masks:
        ports = ",".join(str(p) for p in mask_ports(m))
        print(f"mask={format_mask(m, width)} ports={ports}")
    for p in problems:
        print(f"error: {p}")
    return 1 if problems else 0


def _cmd_masks(args: argparse.Namespace) -> int:
    scheme = _load_scheme(args.scheme)
    profile = _load_profile(args.profile)
    width = scheme.config.retained_ports
    seen: list[int] = []
    for row in scheme.rows:
        if row and row not in seen:
            seen.append(row)
    for m in seen:
        slots = ",".join(
            s.label for s, r in zip(scheme.config.slots, scheme.rows) if r == m
        )
        print(_mask_line(m, width, profile) + f" slots={slots}")
    return 0


def _cmd_estimate(args: argparse.Namespace) -> int:
    scheme = _load_scheme(args.scheme)
    report = scheme_critical_path(scheme)
    sys.stdout.write(report.render())
    if args.threshold is not None:
        verdict = threshold_compare(report, args.threshold)
        print(f"threshold={args.threshold} {verdict.describe()}")
    return 0


def _cmd_construct(args: argparse.Namespace) -> int:
    profile = _load_profile(args.profile)
    masks = select_masks(profile, args.popcount)
    plan = assign_masks(masks, profile)
    scheme = build_scheme(plan)
    width = plan.config.retained_ports
    for m, occ in zip(plan.masks, plan.occupancy):
        print(_mask_line(m, width, profile))
    for mask, slots in plan.groups().items():
        labels = ",".join(s.label for s in slots)
        print(f"group mask={format_mask(mask, width)} slots={labels}")
    text = serialize_scheme(scheme)
    if args.output == "-":
        sys.stdout.write(text)
    else:
        try:
            with open(args.output, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            raise DomainExit(f"cannot write scheme file: {exc}") from exc
        print(f"wrote {args.output}")
    return 0


def _cmd_simulate(args: argparse.Namespace) -> int:
    scheme = _load_scheme(args.scheme)
    profile = _load_profile(args.profile)
    cfg = SimConfig(
        cycles=args.cycles, seed=args.seed, profile=profile, retry=args.retry
    )
    report = simulate(scheme, cfg)
    sys.stdout.write(report.render())
    return 0


def _cmd_compare(args: argparse.Namespace) -> int:
    schemes = [_load_scheme(p) for p in args.schemes]
    profile = _load_profile(args.profile)
    cfg = SimConfig(cycles=args.cycles, seed=args.seed, profile=profile)
    comparison = compare_schemes(schemes, cfg, labels=list(args.schemes))
    sys.stdout.write(comparison.render())
    return 0


def _build_parser() -> _Parser:
    parser = _Parser(prog="portshare", description=__doc__)
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("validate", help="classify a scheme and list its masks")
    p.add_argument("scheme")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("masks", help="list masks with occupancies")
    p.add_argument("scheme")
    p.add_argument("--profile", default="default")
    p.set_defaults(func=_cmd_masks)

    p = sub.add_parser("estimate", help="critical-path depth of the arbitration logic")
    p.add_argument("scheme")
    p.add_argument("--threshold", type=int, default=None)
    p.set_defaults(func=_cmd_estimate)

    p = sub.add_parser("construct", help="build a uniform symmetric scheme")
    p.add_argument("--popcount", type=int, required=True)
    p.add_argument("--profile", default="default")
    p.add_argument("--output", default="-")
    p.set_defaults(func=_cmd_construct)

    p = sub.add_parser("simulate", help="Monte-Carlo conflict rates")
    p.add_argument("scheme")
    p.add_argument("--cycles", type=int, default=100000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--retry", action="store_true")
    p.add_argument("--profile", default="default")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("compare", help="rank schemes by simulated conflict rate")
    p.add_argument("schemes", nargs="+")
    p.add_argument("--cycles", type=int, default=100000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--profile", default="default")
    p.set_defaults(func=_cmd_compare)
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except DomainExit as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (SchemeError, ConstructError, MinimizeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())
