"""Command-line front end: instance I/O, solvers, checkers, reports.

Exit codes: 0 success, 1 a requested check failed, 2 unreadable or invalid
input, 3 no applicable algorithm or an enumeration guard tripped,
4 an internal invariant was violated.

All rationals travel as canonical "p/q" strings (integers may be plain
JSON numbers), so files round-trip exactly.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
from fractions import Fraction

from . import bivalued as bivalued_mod
from . import lp as lp_mod
from . import oracle as oracle_mod
from . import twotypes as twotypes_mod
from . import verify as verify_mod
from .core import (
    Allocation,
    Bivalued,
    FairDivisionError,
    Instance,
    InternalInvariantError,
    MoreThanTwoTypes,
    NotBivalued,
    SingleType,
    TooLargeError,
    TwoType,
    allocation_matrix,
    classify,
    make_allocation,
    make_instance,
    reduce_unconstrained,
    round_robin_by_preference,
)
from .graph import compute_potentials

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INPUT = 2
EXIT_INAPPLICABLE = 3
EXIT_INTERNAL = 4


class InputError(Exception):
    pass


# --- rational + file codecs ---------------------------------------------------

def rational_to_json(x: Fraction):
    if x.denominator == 1:
        return int(x)
    return f"{x.numerator}/{x.denominator}"


def rational_from_json(obj) -> Fraction:
    if isinstance(obj, bool):
        raise InputError(f"not a rational: {obj!r}")
    if isinstance(obj, int):
        return Fraction(obj)
    if isinstance(obj, str):
        try:
            return Fraction(obj)
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"cannot parse rational {obj!r}") from exc
    if isinstance(obj, float):
        if obj.is_integer():
            return Fraction(int(obj))
        raise InputError(f"refusing inexact float {obj!r}; use a 'p/q' string")
    raise InputError(f"not a rational: {obj!r}")


def load_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


def parse_instance(data: dict, require_balanced_shape: bool = True) -> Instance:
    if not isinstance(data, dict):
        raise InputError("instance file must be a JSON object")
    try:
        n = data["n"]
        m = data["m"]
        rows = data["valuations"]
    except KeyError as exc:
        raise InputError(f"instance file misses key {exc}") from exc
    if not (isinstance(n, int) and isinstance(m, int)):
        raise InputError("n and m must be integers")
    if not isinstance(rows, list) or len(rows) != n or any(
        not isinstance(r, list) or len(r) != m for r in rows
    ):
        raise InputError("valuations must be an n x m array")
    values = [[rational_from_json(v) for v in row] for row in rows]
    if any(v < 0 for row in values for v in row):
        raise InputError("valuations must be nonnegative")
    if require_balanced_shape and m % n != 0:
        raise InputError(f"m={m} is not a multiple of n={n} (use the reduce command)")
    return make_instance(n, m, values)


def instance_to_json(inst: Instance) -> dict:
    return {
        "n": inst.n,
        "m": inst.m,
        "valuations": [[rational_to_json(v) for v in row] for row in inst.values],
    }


def parse_allocation(data: dict, inst: Instance) -> Allocation:
    if not isinstance(data, dict) or "allocation" not in data:
        raise InputError("allocation file must be a JSON object with an 'allocation' key")
    bundles = data["allocation"]
    if not isinstance(bundles, list) or len(bundles) != inst.n:
        raise InputError(f"allocation must list {inst.n} bundles")
    try:
        alloc = make_allocation([[int(j) for j in b] for b in bundles])
    except (TypeError, ValueError) as exc:
        raise InputError(f"bad allocation: {exc}") from exc
    if not alloc.is_partition_of(inst.m):
        raise InputError("allocation does not partition the goods")
    return alloc


def allocation_to_json(alloc: Allocation) -> list:
    return [sorted(b) for b in alloc.bundles]


def dump_json(obj, path: str | None) -> None:
    text = json.dumps(obj, indent=2) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


# --- solve --------------------------------------------------------------------

def _certificate(inst: Instance, alpha, gamma, pot) -> dict | None:
    if alpha is None:
        return None
    return {
        "alpha": [rational_to_json(a) for a in alpha],
        "gamma": rational_to_json(gamma) if gamma is not None else None,
        "q": [rational_to_json(v) for v in pot.q],
        "p": [rational_to_json(v) for v in pot.p],
    }


def _dispatch(inst: Instance, algorithm: str):
    """Returns (allocation, alpha | None, gamma | None, potentials | None)."""
    cls = classify(inst)
    if algorithm == "auto":
        if isinstance(cls, SingleType):
            algorithm = "round-robin"
        elif isinstance(cls, Bivalued):
            algorithm = "bivalued"
        elif isinstance(cls, TwoType):
            algorithm = "two-types"
        else:
            raise MoreThanTwoTypes(
                "no certified solver applies; rerun with --algorithm round-robin "
                "for an EF1-only allocation"
            )

    if algorithm == "bivalued":
        alloc, alpha = bivalued_mod.solve_bivalued(inst)
        pot = compute_potentials(inst, alloc, alpha)
        return alloc, alpha, None, pot
    if algorithm == "two-types":
        alloc, gamma, pot = twotypes_mod.solve_two_types(inst)
        view = twotypes_mod._two_type_view(inst)
        alpha = twotypes_mod._alpha_for(view, inst.n, gamma)
        return alloc, alpha, gamma, pot
    if algorithm == "round-robin":
        alloc = round_robin_by_preference(inst)
        if isinstance(cls, SingleType):
            alpha = tuple(Fraction(1) for _ in inst.agents())
            pot = compute_potentials(inst, alloc, alpha)
            return alloc, alpha, Fraction(1), pot
        return alloc, None, None, None
    raise InputError(f"unknown algorithm {algorithm!r}")


def cmd_solve(args) -> int:
    inst = parse_instance(load_json(args.input))
    try:
        alloc, alpha, gamma, pot = _dispatch(inst, args.algorithm)
    except (NotBivalued, MoreThanTwoTypes) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INAPPLICABLE

    checks = {
        "ef1": verify_mod.is_ef1(inst, alloc).holds,
        "fpo": lp_mod.check_fpo(inst, alloc).is_fpo,
        "balanced": alloc.is_balanced(inst),
    }
    if alpha is not None:
        cert_ok = verify_mod.certify_fpo(inst, alloc, alpha).holds
        slack_ok = lp_mod.verify_complementary_slackness(
            inst, allocation_matrix(inst, alloc), pot, alpha
        )
        if not (cert_ok and slack_ok):
            print("error: certificate failed re-verification", file=sys.stderr)
            return EXIT_INTERNAL
    result = {
        "allocation": allocation_to_json(alloc),
        "certificate": _certificate(inst, alpha, gamma, pot),
        "checks": checks,
    }
    dump_json(result, args.output)
    if all(checks.values()):
        return EXIT_OK
    if args.algorithm == "round-robin":
        # round robin only promises EF1; an uncertified efficiency check may
        # legitimately fail, which is not a success
        print("note: round-robin output is not fPO-certified", file=sys.stderr)
        return EXIT_INAPPLICABLE
    print("error: solver output failed its own checks", file=sys.stderr)
    return EXIT_INTERNAL


# --- check --------------------------------------------------------------------

def _print_verdict(name: str, verdict, quiet: bool) -> None:
    if quiet:
        return
    if verdict.holds:
        print(f"{name}: holds")
    else:
        print(f"{name}: fails  witness: {verdict.witness}")


def cmd_check(args) -> int:
    inst = parse_instance(load_json(args.instance))
    alloc = parse_allocation(load_json(args.allocation), inst)
    requested = False
    all_hold = True

    if args.ef1:
        requested = True
        v = verify_mod.is_ef1(inst, alloc)
        _print_verdict("ef1", v, args.quiet)
        all_hold &= v.holds
    if args.fpo:
        requested = True
        res = lp_mod.check_fpo(inst, alloc, mode="unconstrained" if args.unconstrained else "balanced")
        if res.is_fpo:
            if not args.quiet:
                print("fpo: holds")
        else:
            if not args.quiet:
                dominating = [[rational_to_json(v) for v in row] for row in res.dominating.x]
                print(f"fpo: fails  dominated by fractional allocation {dominating} "
                      f"(total surplus {rational_to_json(res.improvement)})")
            all_hold = False
    if args.po:
        requested = True
        try:
            v = verify_mod.is_po_bruteforce(inst, alloc, max_states=args.max_states)
        except TooLargeError as exc:
            print(f"po: not decided, enumeration guard tripped ({exc}); "
                  "PO checking is intractable in general", file=sys.stderr)
            return EXIT_INAPPLICABLE
        _print_verdict("po", v, args.quiet)
        all_hold &= v.holds
    if args.pef1 is not None:
        requested = True
        data = load_json(args.pef1)
        if not isinstance(data, dict) or "prices" not in data:
            raise InputError("prices file must be a JSON object with a 'prices' key")
        prices = [rational_from_json(v) for v in data["prices"]]
        if len(prices) != inst.m:
            raise InputError(f"need {inst.m} prices")
        v = verify_mod.is_p_ef1(prices, alloc)
        _print_verdict("pef1", v, args.quiet)
        all_hold &= v.holds

    if not requested:
        raise InputError("no checks requested (use --ef1/--fpo/--po/--pef1)")
    return EXIT_OK if all_hold else EXIT_CHECK_FAILED


# --- enumerate ----------------------------------------------------------------

def cmd_enumerate(args) -> int:
    inst = parse_instance(load_json(args.input))
    try:
        report = oracle_mod.full_report(inst, max_states=args.max_states)
    except TooLargeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INAPPLICABLE

    if args.format == "json":
        payload = [
            {
                "allocation": allocation_to_json(r.allocation),
                "values": [rational_to_json(v) for v in r.values],
                "ef1": r.ef1,
                "po": r.po,
                "fpo": r.fpo,
                "nash": rational_to_json(r.nash),
                "utilitarian": rational_to_json(r.utilitarian),
            }
            for r in report.records
        ]
        dump_json(payload, args.output)
    else:
        buf = io.StringIO()
        writer = csv.writer(buf)
        header = ["allocation"] + [f"v{i}" for i in inst.agents()] + [
            "ef1", "po", "fpo", "nash", "utilitarian",
        ]
        writer.writerow(header)
        for r in report.records:
            bundles = "|".join(" ".join(str(j) for j in sorted(b)) for b in r.allocation.bundles)
            writer.writerow(
                [bundles]
                + [rational_to_json(v) for v in r.values]
                + [int(r.ef1), int(r.po), int(r.fpo)]
                + [rational_to_json(r.nash), rational_to_json(r.utilitarian)]
            )
        text = buf.getvalue()
        if args.output is None:
            sys.stdout.write(text)
        else:
            with open(args.output, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
    return EXIT_OK


# --- gen ----------------------------------------------------------------------

def cmd_gen(args) -> int:
    if args.n < 1 or args.m < 1 or args.m % args.n != 0:
        raise InputError("need n >= 1 and m a positive multiple of n")
    if args.max_value < 1:
        raise InputError("max-value must be at least 1")
    rng = random.Random(args.seed)
    n, m, top = args.n, args.m, args.max_value

    if args.klass == "general":
        rows = [[rng.randint(0, top) for _ in range(m)] for _ in range(n)]
    elif args.klass == "bivalued":
        rows = []
        for _ in range(n):
            b = rng.randint(0, top - 1)
            a = rng.randint(b + 1, top)
            rows.append([a if rng.random() < 0.5 else b for _ in range(m)])
    elif args.klass == "two-types":
        if n < 2:
            raise InputError("two-types generation needs n >= 2")
        u1 = [rng.randint(0, top) for _ in range(m)]
        u2 = u1
        while u2 == u1:
            u2 = [rng.randint(0, top) for _ in range(m)]
        n1 = rng.randint(1, n - 1)
        types = [1] * n1 + [2] * (n - n1)
        rng.shuffle(types)
        rows = [u1 if t == 1 else u2 for t in types]
    else:
        raise InputError(f"unknown class {args.klass!r}")

    dump_json({"n": n, "m": m, "valuations": rows}, args.output)
    return EXIT_OK


# --- reduce -------------------------------------------------------------------

def cmd_reduce(args) -> int:
    inst = parse_instance(load_json(args.input), require_balanced_shape=False)
    reduced, dummies = reduce_unconstrained(inst)
    dump_json(instance_to_json(reduced), args.output)
    mapping = {
        "original_n": inst.n,
        "original_m": inst.m,
        "dummy_goods": sorted(dummies),
    }
    dump_json(mapping, args.output + ".mapping.json")
    return EXIT_OK


# --- entry point ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fairbalance",
        description="Exact EF1 + fractionally Pareto-optimal balanced allocations",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="compute an EF1 + fPO balanced allocation")
    p.add_argument("input")
    p.add_argument("--algorithm", default="auto",
                   choices=["auto", "bivalued", "two-types", "round-robin"])
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("check", help="verify properties of a given allocation")
    p.add_argument("instance")
    p.add_argument("allocation")
    p.add_argument("--ef1", action="store_true")
    p.add_argument("--fpo", action="store_true")
    p.add_argument("--unconstrained", action="store_true",
                   help="check fPO without the balanced constraint")
    p.add_argument("--po", action="store_true")
    p.add_argument("--pef1", metavar="PRICES_FILE", default=None)
    p.add_argument("--max-states", type=int, default=10 ** 6)
    p.add_argument("--quiet", action="store_true")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("enumerate", help="list every balanced allocation with flags")
    p.add_argument("input")
    p.add_argument("--format", default="csv", choices=["csv", "json"])
    p.add_argument("--output", default=None)
    p.add_argument("--max-states", type=int, default=10 ** 4)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("gen", help="generate a pseudo-random instance")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--class", dest="klass", default="general",
                   choices=["bivalued", "two-types", "general"])
    p.add_argument("--max-value", type=int, default=9)
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("reduce", help="append dummy goods to balance an instance")
    p.add_argument("input")
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_reduce)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (TooLargeError, NotBivalued, MoreThanTwoTypes) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INAPPLICABLE
    except (InternalInvariantError, lp_mod.LPError, FairDivisionError, AssertionError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
