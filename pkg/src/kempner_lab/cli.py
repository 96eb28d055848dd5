"""Command-line front end.

Every subcommand works on a configuration loaded either from a built-in
preset (``--preset``, optionally parameterized with ``--param k=v``) or
from a JSON document (``--config``).  Output goes to stdout in one of
three formats: a human table (default), CSV, or JSON with rationals as
num/den decimal strings.

Exit codes: 0 success, 1 validation error, 2 budget truncation,
3 oracle mismatch.
"""

from __future__ import annotations

import argparse
import bisect
import csv
import io
import json
import os
import sys
from fractions import Fraction

from .config import Config, parse_json, parse_dict, to_json
from .constraints import block_count_exact, count_upto, is_member
from .errors import ConfigInvalid, KempnerLabError
from .gadic import Numeral, from_digits, to_digits
from .harmonic import (
    DEFAULT_BUDGET,
    block_reports,
    classify,
    density,
    partial_sum_exact,
)
from .oracle import oracle_members, oracle_sum
from .presets import preset_config, preset_names

BUDGET_ENV = "KEMPNER_LAB_BUDGET"

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_TRUNCATED = 2
EXIT_MISMATCH = 3


def _rat_text(f: Fraction) -> str:
    return f"{f.numerator}/{f.denominator}"


def _rat_json(f: Fraction) -> dict:
    return {"num": str(f.numerator), "den": str(f.denominator)}


def _print_json(doc) -> None:
    print(json.dumps(doc, indent=2, sort_keys=True))


def _print_csv(header: list[str], rows: list[list]) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    sys.stdout.write(buf.getvalue())


def _print_table(header: list[str], rows: list[list]) -> None:
    cells = [header] + [[str(c) for c in row] for row in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    for r in cells:
        print("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip())


def _parse_params(pairs: list[str] | None) -> dict:
    out = {}
    for pair in pairs or []:
        key, sep, value = pair.partition("=")
        if not sep or not key:
            raise ConfigInvalid("param", f"expected KEY=VALUE, got {pair!r}")
        out[key] = value
    return out


def _load_config(args) -> Config:
    if args.config and args.preset:
        raise ConfigInvalid("", "--config and --preset are mutually exclusive")
    if args.config:
        if args.param:
            raise ConfigInvalid("param", "--param only applies to --preset")
        try:
            with open(args.config, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigInvalid("", f"cannot read config file: {exc}") from exc
        return parse_json(text)
    if args.preset:
        doc = preset_config(args.preset, _parse_params(args.param))
        return parse_dict(doc)
    raise ConfigInvalid("", "a configuration is required: pass --preset NAME or --config FILE")


def _require_constraint(config: Config):
    if config.constraint is None:
        raise ConfigInvalid("constraint", "this command needs a digit constraint")
    return config.constraint


def _budget(args, config: Config) -> int:
    if getattr(args, "budget", None) is not None:
        return args.budget
    if config.budget is not None:
        return config.budget
    env = os.environ.get(BUDGET_ENV)
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise ConfigInvalid(BUDGET_ENV, f"expected an integer, got {env!r}") from exc
    return DEFAULT_BUDGET


def _resolve(args, config: Config, name: str, flag: str):
    """Flag value, falling back to the config document's params."""
    value = getattr(args, name, None)
    if value is None:
        value = getattr(config, name, None)
    if value is None:
        raise ConfigInvalid(name, f"pass {flag} or set params.{name} in the config")
    return value


# --- subcommand handlers ------------------------------------------------------


def _cmd_encode(args) -> int:
    config = _load_config(args)
    numeral = to_digits(config.sequence, args.n)
    digits = list(numeral.digits)
    if args.format == "json":
        _print_json({"n": str(args.n), "digits": digits})
    elif args.format == "csv":
        _print_csv(["position", "digit"], [[i, c] for i, c in enumerate(digits)])
    else:
        print(",".join(map(str, digits)))
    return EXIT_OK


def _cmd_decode(args) -> int:
    config = _load_config(args)
    try:
        digits = tuple(int(p) for p in args.digits.split(","))
    except ValueError as exc:
        raise ConfigInvalid("digits", f"expected comma-separated integers, got {args.digits!r}") from exc
    n = from_digits(Numeral(digits, config.sequence))
    if args.format == "json":
        _print_json({"digits": list(digits), "n": str(n)})
    else:
        print(n)
    return EXIT_OK


def _cmd_count(args) -> int:
    config = _load_config(args)
    constraint = _require_constraint(config)
    if (args.k is None) == (args.upto is None):
        raise ConfigInvalid("count", "pass exactly one of --k or --upto")
    if args.k is not None:
        block = block_count_exact(constraint, args.k)
        if args.format == "json":
            _print_json(
                {
                    "k": block.k,
                    "count": str(block.exact),
                    "product_bound": str(block.product_bound),
                    "empty": block.empty,
                }
            )
        elif args.format == "csv":
            _print_csv(
                ["k", "count", "product_bound", "empty"],
                [[block.k, block.exact, block.product_bound, block.empty]],
            )
        else:
            print(block.exact)
    else:
        total = count_upto(constraint, args.upto)
        if args.format == "json":
            _print_json({"upto": str(args.upto), "count": str(total)})
        elif args.format == "csv":
            _print_csv(["upto", "count"], [[args.upto, total]])
        else:
            print(total)
    return EXIT_OK


def _cmd_member(args) -> int:
    config = _load_config(args)
    constraint = _require_constraint(config)
    result = is_member(constraint, args.n)
    if args.format == "json":
        _print_json({"n": str(args.n), "member": result})
    else:
        print("true" if result else "false")
    return EXIT_OK


def _cmd_sum(args) -> int:
    config = _load_config(args)
    constraint = _require_constraint(config)
    upto = _resolve(args, config, "upto", "--upto")
    result = partial_sum_exact(constraint, upto, _budget(args, config))
    if args.format == "json":
        _print_json(
            {
                "upto": str(upto),
                "value": _rat_json(result.value),
                "terms": result.terms,
                "truncated": result.truncated,
            }
        )
    elif args.format == "csv":
        _print_csv(
            ["upto", "num", "den", "terms", "truncated"],
            [[upto, result.value.numerator, result.value.denominator, result.terms, result.truncated]],
        )
    else:
        print(_rat_text(result.value))
        if result.truncated:
            print(f"truncated after {result.terms} members", file=sys.stderr)
    return EXIT_TRUNCATED if result.truncated else EXIT_OK


BLOCK_CSV_HEADER = [
    "k",
    "g_k",
    "g_k1",
    "count",
    "bracket_lo_num",
    "bracket_lo_den",
    "bracket_hi_num",
    "bracket_hi_den",
    "cum_lo_num",
    "cum_lo_den",
    "cum_hi_num",
    "cum_hi_den",
]

# --check compares blocks against the oracle only while brute force stays cheap
CHECK_CAP = 10**5


def _cmd_blocks(args) -> int:
    config = _load_config(args)
    constraint = _require_constraint(config)
    reports = block_reports(constraint, _resolve(args, config, "max_k", "--max-k"))
    if args.format == "json":
        _print_json(
            [
                {
                    "k": r.k,
                    "g_k": str(r.g_lo),
                    "g_k1": str(r.g_hi),
                    "count": str(r.count),
                    "bracket_lo": _rat_json(r.bracket_lo),
                    "bracket_hi": _rat_json(r.bracket_hi),
                    "cum_lo": _rat_json(r.cumulative_lo),
                    "cum_hi": _rat_json(r.cumulative_hi),
                }
                for r in reports
            ]
        )
    elif args.format == "csv":
        rows = [
            [
                r.k,
                r.g_lo,
                r.g_hi,
                r.count,
                r.bracket_lo.numerator,
                r.bracket_lo.denominator,
                r.bracket_hi.numerator,
                r.bracket_hi.denominator,
                r.cumulative_lo.numerator,
                r.cumulative_lo.denominator,
                r.cumulative_hi.numerator,
                r.cumulative_hi.denominator,
            ]
            for r in reports
        ]
        _print_csv(BLOCK_CSV_HEADER, rows)
    else:
        _print_table(
            ["k", "g_k", "g_k+1", "count", "bracket_lo", "bracket_hi", "cum_lo", "cum_hi"],
            [
                [
                    r.k,
                    r.g_lo,
                    r.g_hi,
                    r.count,
                    _rat_text(r.bracket_lo),
                    _rat_text(r.bracket_hi),
                    _rat_text(r.cumulative_lo),
                    _rat_text(r.cumulative_hi),
                ]
                for r in reports
            ],
        )
    if args.check:
        for r in reports:
            if r.g_hi - 1 > CHECK_CAP:
                break
            members = oracle_members(constraint, r.g_lo, r.g_hi - 1)
            if len(members) != r.count:
                print(
                    f"check failed at k={r.k}: oracle found {len(members)} members, "
                    f"fast path reports {r.count}",
                    file=sys.stderr,
                )
                return EXIT_MISMATCH
            if members:
                total = oracle_sum(constraint, r.g_lo, r.g_hi - 1)
                if not r.bracket_lo <= total <= r.bracket_hi:
                    print(f"check failed at k={r.k}: oracle sum outside bracket", file=sys.stderr)
                    return EXIT_MISMATCH
        print("check: oracle agrees on all verified blocks", file=sys.stderr)
    return EXIT_OK


def _cmd_classify(args) -> int:
    config = _load_config(args)
    constraint = _require_constraint(config)
    delta = args.delta if args.delta is not None else config.delta
    result = classify(constraint, delta=delta)
    margin = result.margin
    if args.format == "json":
        doc = {
            "verdict": result.verdict,
            "rule_fired": result.rule_fired,
            "notes": list(result.notes),
        }
        if margin is not None:
            doc["margin"] = {
                "delta": str(margin.delta) if margin.delta is not None else None,
                "threshold_label": margin.threshold_label,
                "threshold_index": margin.threshold_index,
                "value": str(margin.value) if margin.value is not None else None,
                "window": margin.window,
            }
        _print_json(doc)
    elif args.format == "csv":
        _print_csv(
            ["verdict", "rule_fired", "delta", "threshold_label", "threshold_index"],
            [
                [
                    result.verdict,
                    result.rule_fired or "",
                    str(margin.delta) if margin and margin.delta is not None else "",
                    margin.threshold_label if margin else "",
                    margin.threshold_index if margin and margin.threshold_index is not None else "",
                ]
            ],
        )
    else:
        print(f"verdict: {result.verdict}")
        if result.rule_fired:
            print(f"rule: {result.rule_fired}")
        if margin is not None:
            if margin.delta is not None:
                print(f"delta: {margin.delta}")
            if margin.threshold_index is not None:
                print(f"{margin.threshold_label}: {margin.threshold_index}")
            if margin.value is not None:
                print(f"margin: {margin.value}")
        for note in result.notes:
            print(f"note: {note}")
    return EXIT_OK


def _cmd_density(args) -> int:
    config = _load_config(args)
    constraint = _require_constraint(config)
    try:
        points = [int(p) for p in args.at.split(",") if p]
    except ValueError as exc:
        raise ConfigInvalid("at", f"expected comma-separated integers, got {args.at!r}") from exc
    if not points:
        raise ConfigInvalid("at", "at least one evaluation point is required")
    values = [(n, density(constraint, n)) for n in points]
    if args.format == "json":
        _print_json([{"n": str(n), "density": _rat_json(v)} for n, v in values])
    elif args.format == "csv":
        _print_csv(
            ["n", "num", "den"],
            [[n, v.numerator, v.denominator] for n, v in values],
        )
    else:
        _print_table(["n", "density"], [[n, _rat_text(v)] for n, v in values])
    return EXIT_OK


def _cmd_verify(args) -> int:
    config = _load_config(args)
    constraint = _require_constraint(config)
    n_max = _resolve(args, config, "upto", "--upto")
    members = oracle_members(constraint, 1, n_max)
    failures = []

    fast_total = count_upto(constraint, n_max)
    if fast_total != len(members):
        failures.append(f"count_upto({n_max}) = {fast_total}, oracle found {len(members)}")
    print(f"members up to {n_max}: oracle {len(members)}, fast path {fast_total}")

    step = max(1, n_max // 64)
    for x in range(step, n_max + 1, step):
        want = bisect.bisect_right(members, x)
        got = count_upto(constraint, x)
        if got != want:
            failures.append(f"count_upto({x}) = {got}, oracle running count {want}")
    print(f"running counts checked at {len(range(step, n_max + 1, step))} points")

    member_set = set(members)
    probe = max(1, n_max // 512)
    checked = 0
    for x in range(1, n_max + 1, probe):
        if is_member(constraint, x) != (x in member_set):
            failures.append(f"is_member({x}) disagrees with the oracle")
        checked += 1
    print(f"membership probed at {checked} points")

    seq = constraint.sequence
    k = 0
    while seq.base_value(k + 1) - 1 <= n_max:
        lo = seq.base_value(k)
        hi = seq.base_value(k + 1) - 1
        i = bisect.bisect_left(members, lo)
        j = bisect.bisect_right(members, hi)
        block = block_count_exact(constraint, k)
        if block.exact != j - i:
            failures.append(f"block {k}: exact count {block.exact}, oracle {j - i}")
        if j > i:
            total = oracle_sum(constraint, lo, hi)
            bracket_lo = Fraction(block.exact, seq.base_value(k + 1))
            bracket_hi = Fraction(block.exact, lo)
            if not bracket_lo <= total <= bracket_hi:
                failures.append(f"block {k}: oracle sum outside bracket")
        k += 1
    print(f"blocks fully below {n_max}: {k} checked")

    for failure in failures:
        print(f"MISMATCH: {failure}", file=sys.stderr)
    if failures:
        return EXIT_MISMATCH
    print("verify: oracle and fast paths agree")
    return EXIT_OK


def _cmd_preset(args) -> int:
    if args.list:
        for name in preset_names():
            print(name)
        return EXIT_OK
    if not args.name:
        raise ConfigInvalid("preset", "pass --list or --name NAME")
    doc = preset_config(args.name, _parse_params(args.param))
    # normalize through the parser so the dump always matches the schema
    sys.stdout.write(to_json(parse_dict(doc)))
    return EXIT_OK


# --- parser -------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--preset", help="built-in configuration name")
    shared.add_argument(
        "--param",
        action="append",
        metavar="KEY=VALUE",
        help="preset parameter (repeatable)",
    )
    shared.add_argument("--config", help="path to a JSON configuration document")
    shared.add_argument(
        "--format",
        choices=("table", "csv", "json"),
        default="table",
        help="output format (default: table)",
    )

    parser = argparse.ArgumentParser(
        prog="kempner-lab",
        description="Exact mixed-radix missing-digit sets: counting, density, "
        "reciprocal-sum brackets, and convergence classification.",
    )
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("encode", parents=[shared], help="digit vector of an integer")
    p.add_argument("n", type=int)
    p.set_defaults(handler=_cmd_encode)

    p = sub.add_parser("decode", parents=[shared], help="integer value of a digit vector")
    p.add_argument("digits", help="comma separated, least significant first")
    p.set_defaults(handler=_cmd_decode)

    p = sub.add_parser("count", parents=[shared], help="exact member counts")
    p.add_argument("--k", type=int, help="count one block of (k+1)-digit members")
    p.add_argument("--upto", type=int, help="count members <= N")
    p.set_defaults(handler=_cmd_count)

    p = sub.add_parser("member", parents=[shared], help="membership test")
    p.add_argument("n", type=int)
    p.set_defaults(handler=_cmd_member)

    p = sub.add_parser("sum", parents=[shared], help="exact partial reciprocal sum")
    p.add_argument("--upto", type=int)
    p.add_argument("--budget", type=int, help="max members to enumerate")
    p.set_defaults(handler=_cmd_sum)

    p = sub.add_parser("blocks", parents=[shared], help="per-block bracket table")
    p.add_argument("--max-k", type=int, dest="max_k")
    p.add_argument("--check", action="store_true", help="cross-check small blocks against the oracle")
    p.set_defaults(handler=_cmd_blocks)

    p = sub.add_parser("classify", parents=[shared], help="convergence/divergence verdict")
    p.add_argument("--delta", help="threshold exponent margin, e.g. 0.4 or 2/5")
    p.set_defaults(handler=_cmd_classify)

    p = sub.add_parser("density", parents=[shared], help="A(n)/n at given points")
    p.add_argument("--at", required=True, help="comma separated evaluation points")
    p.set_defaults(handler=_cmd_density)

    p = sub.add_parser("verify", parents=[shared], help="cross-check fast paths against the oracle")
    p.add_argument("--upto", type=int)
    p.set_defaults(handler=_cmd_verify)

    p = sub.add_parser("preset", parents=[shared], help="list or show built-in presets")
    p.add_argument("--list", action="store_true")
    p.add_argument("--name")
    p.set_defaults(handler=_cmd_preset)

    return parser


def main(argv=None) -> int:
    if hasattr(sys, "set_int_max_str_digits"):
        sys.set_int_max_str_digits(2_000_000)
    parser = _build_parser()
    args = parser.parse_args(argv)
    if not hasattr(args, "handler"):
        parser.print_help()
        return EXIT_INVALID
    try:
        return args.handler(args)
    except KempnerLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
