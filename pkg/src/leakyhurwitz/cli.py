"""Command-line interface: exact counts, covers, chamber data, self-test.

Exit codes: 0 success, 2 invalid problem or usage, 3 missing vertex fixture,
4 wall or reference-point error, 5 self-test failure.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from .chambers import (Wall, WallError, chamber_polynomial, classify,
                       wall_crossing, wall_crossing_formula, walls)
from .covers import (Problem, ProblemError, check_cover, validate_problem,
                     weighted_cover_to_json)
from .enumeration import enumerate_covers, enumerate_types
from .exactarith import LinForm, rat_str
from .intersections import psi_integral, psi_kappa_integral, recursion_rhs
from .vertexdata import (FixtureError, MissingVertexData, default_fixtures,
                         load_fixtures, oracle_from)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_MISSING_FIXTURE = 3
EXIT_WALL = 4
EXIT_SELFTEST = 5

FIXTURES_ENV = "LEAKY_FIXTURES"


def _int_list(text: str) -> tuple[int, ...]:
    text = text.strip()
    if not text:
        return ()
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="leakyhurwitz",
        description="Exact k-leaky double Hurwitz descendant counts.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, profile=True):
        p.add_argument("-g", "--genus", type=int, default=0)
        p.add_argument("-k", "--leak", type=int, default=0)
        if profile:
            p.add_argument("-x", "--profile", type=_int_list, required=True,
                           help="comma-separated signed degree profile")
            p.add_argument("-n", "--markings", type=int, default=None,
                           help="number of markings (inferred from -x)")
        p.add_argument("-e", "--psi", type=_int_list, default=None,
                       help="comma-separated psi exponents (default: zeros)")
        p.add_argument("--fixtures", default=None,
                       help=f"vertex fixture JSON (default: ${FIXTURES_ENV} or builtin)")
        p.add_argument("--format", choices=("json", "table"), default="json")
        p.add_argument("--jobs", type=int, default=1)

    p_number = sub.add_parser("number", help="compute the descendant count")
    common(p_number)

    p_covers = sub.add_parser("covers", help="list every cover with its multiplicity")
    common(p_covers)
    p_covers.add_argument("--keep-zero", action="store_true",
                          help="keep covers whose multiplicity is 0")

    p_poly = sub.add_parser("polynomial", help="genus-0 chamber polynomial at -x")
    common(p_poly)

    p_walls = sub.add_parser("walls", help="list the genus-0 walls")
    p_walls.add_argument("-n", "--markings", type=int, required=True)
    p_walls.add_argument("-k", "--leak", type=int, default=0)
    p_walls.add_argument("--format", choices=("json", "table"), default="json")

    p_wc = sub.add_parser("wallcross", help="wall crossing, computed and closed form")
    p_wc.add_argument("-n", "--markings", type=int, default=None,
                      help="number of markings (inferred from -e if omitted)")
    p_wc.add_argument("-k", "--leak", type=int, default=0)
    p_wc.add_argument("-e", "--psi", type=_int_list, default=None)
    p_wc.add_argument("--subset", type=_int_list, required=True)
    p_wc.add_argument("--format", choices=("json", "table"), default="json")

    p_cls = sub.add_parser("classify", help="genus-0 vanishing classification")
    common(p_cls)

    p_self = sub.add_parser("selftest", help="run the invariant suite")
    p_self.add_argument("--format", choices=("json", "table"), default="table")

    return parser


def _problem(args) -> Problem:
    if args.markings is not None and args.markings != len(args.profile):
        raise ProblemError(
            f"-n {args.markings} disagrees with the profile length "
            f"{len(args.profile)}")
    e = args.psi if args.psi is not None else (0,) * len(args.profile)
    return validate_problem(Problem.of(args.genus, args.leak, args.profile, e))


def _oracle(args):
    table = default_fixtures()
    path = getattr(args, "fixtures", None) or os.environ.get(FIXTURES_ENV)
    if path:
        table = table.merged(load_fixtures(path))
    return oracle_from(table)


def _emit(args, payload, table_lines) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        for line in table_lines:
            print(line)


def _enumerate(p: Problem, oracle, jobs: int):
    types = enumerate_types(p)
    if jobs <= 1 or len(types) <= 1:
        return enumerate_covers(p, oracle, types=types)
    shards = [types[i::jobs] for i in range(jobs) if types[i::jobs]]
    with ThreadPoolExecutor(max_workers=len(shards)) as pool:
        parts = list(pool.map(
            lambda shard: enumerate_covers(p, oracle, types=shard), shards))
    out = [wc for part in parts for wc in part]
    out.sort(key=lambda wc: wc.cover.sort_key())
    return out


def cmd_number(args) -> int:
    p = _problem(args)
    covers = _enumerate(p, _oracle(args), args.jobs)
    total = sum((wc.multiplicity for wc in covers), Fraction(0))
    _emit(args, {"H": rat_str(total), "covers": len(covers)},
          [f"H = {rat_str(total)} ({len(covers)} covers)"])
    return EXIT_OK


def cmd_covers(args) -> int:
    p = _problem(args)
    covers = _enumerate(p, _oracle(args), args.jobs)
    if not args.keep_zero:
        covers = [wc for wc in covers if wc.multiplicity != 0]
    records = [weighted_cover_to_json(wc) for wc in covers]
    lines = []
    for i, wc in enumerate(covers):
        lines.append(f"cover {i}: aut={wc.aut} "
                     f"edges={[(a, b, w) for a, b, w in wc.cover.edges]} "
                     f"mult={rat_str(wc.multiplicity)}")
    _emit(args, records, lines)
    return EXIT_OK


def cmd_polynomial(args) -> int:
    p = _problem(args)
    poly = chamber_polynomial(p)
    _emit(args, {"normal_form": str(poly), "terms": poly.to_terms(),
                 "total_degree": poly.total_degree()},
          [f"H = {poly} on the chamber of x = {list(p.x)}"])
    return EXIT_OK


def cmd_walls(args) -> int:
    n, k = args.markings, args.leak
    found = walls(n, k)

    def baked(form: LinForm) -> str:
        return str(LinForm.of(dict(form.coeffs), 0, form.const + form.k_coeff * k))

    payload = [{"subset": list(w.subset), "form": baked(w.form)} for w in found]
    _emit(args, payload,
          [f"{list(w.subset)}: {baked(w.form)} = 0" for w in found])
    return EXIT_OK


def cmd_wallcross(args) -> int:
    subset = args.subset
    if args.markings is not None:
        n = args.markings
    elif args.psi is not None:
        n = len(args.psi)
    else:
        raise ProblemError("wallcross needs -n or -e to fix the marking count")
    e = args.psi if args.psi is not None else (0,) * n
    k = args.leak
    p = validate_problem(Problem.of(0, k, (k * (n - 2),) + (0,) * (n - 1), e))
    wall = Wall.of(n, subset)
    computed = wall_crossing(p, wall)
    closed = wall_crossing_formula(p, wall)
    payload = {"subset": list(wall.subset),
               "computed": str(computed), "formula": str(closed),
               "terms_computed": computed.to_terms(),
               "terms_formula": closed.to_terms(),
               "equal": computed == closed}
    _emit(args, payload,
          [f"wall {list(wall.subset)}", f"computed: {computed}",
           f"formula : {closed}", f"equal   : {computed == closed}"])
    return EXIT_OK


def cmd_classify(args) -> int:
    p = _problem(args)
    verdict = classify(p)
    _emit(args, {"classification": verdict}, [verdict])
    return EXIT_OK


def _selftest_properties():
    def golden_count():
        p = Problem.of(1, 1, (7, -3, -1), (1, 0, 0))
        covers = enumerate_covers(p)
        mults = sorted(wc.multiplicity for wc in covers)
        want = sorted([Fraction(-1, 24), Fraction(1, 2), Fraction(2),
                       Fraction(3), Fraction(175, 24)])
        return mults == want and sum(mults) == Fraction(51, 4)

    def chamber_example():
        p = Problem.of(0, 1, (6, -1, -1, 1, -2), (1, 0, 0, 0, 0))
        poly = chamber_polynomial(p)
        return str(poly) == "3*x1 - 3"

    def wall_crossing_example():
        p = Problem.of(0, 1, (6, -1, -1, 1, -2), (1, 0, 0, 0, 0))
        wall = Wall.of(5, (1, 2, 3))
        d = wall_crossing(p, wall)
        return d == wall_crossing_formula(p, wall) and str(d) == "2*x1 + 2*x2 + 2*x3 - 4"

    def psi_kappa_multinomial():
        import itertools
        for n in range(3, 7):
            for e in itertools.combinations_with_replacement(range(n - 2), n):
                if psi_kappa_integral(n, e, 0) != psi_integral(n, e):
                    return False
        return True

    def recursion_identity():
        rng = random.Random("selftest-recursion")
        for _ in range(40):
            n = rng.randint(4, 5)
            k = rng.randint(-2, 2)
            te = rng.randint(1, n - 3)
            e = [0] * n
            for _ in range(te):
                e[rng.randrange(n)] += 1
            f = n - 3 - te
            x = [rng.randint(-5, 5) for _ in range(n - 1)]
            x.append(k * (n - 2) - sum(x))
            p = Problem.of(0, k, x, e)
            s = next(i + 1 for i in range(n) if e[i] > 0)
            lhs = x[s - 1] * (n - 2) * psi_kappa_integral(n, tuple(e), f)
            if lhs != recursion_rhs(p, s, f):
                return False
        return True

    def turnaround():
        rng = random.Random("selftest-turnaround")
        oracle = oracle_from()
        for _ in range(20):
            n = rng.randint(3, 5)
            k = rng.randint(-2, 2)
            te = rng.randint(0, n - 3)
            e = [0] * n
            for _ in range(te):
                e[rng.randrange(n)] += 1
            x = [rng.randint(-4, 4) for _ in range(n - 1)]
            x.append(k * (n - 2) - sum(x))
            p = Problem.of(0, k, x, e)
            forward = sum((wc.multiplicity for wc in enumerate_covers(p, oracle)),
                          Fraction(0))
            backward = sum((wc.multiplicity
                            for wc in enumerate_covers(p.turned_around(), oracle)),
                           Fraction(0))
            if forward != backward:
                return False
        return True

    def classifier_grid():
        import itertools
        for k in (2, 3):
            for n in (3, 4):
                total = k * (n - 2)
                for x in itertools.product(range(1, 3 * k + 1), repeat=n):
                    if sum(x) != total:
                        continue
                    p = Problem.of(0, k, x)
                    vanishes = sum((wc.multiplicity
                                    for wc in enumerate_covers(p)),
                                   Fraction(0)) == 0
                    if (classify(p) == "Zero") != vanishes:
                        return False
        return True

    def enumeration_invariants():
        p = Problem.of(1, 1, (7, -3, -1), (1, 0, 0))
        first = enumerate_types(p)
        second = enumerate_types(p)
        if first != second:
            return False
        for wc in enumerate_covers(p):
            check_cover(p, wc.cover)
        return True

    return [("golden_count", golden_count),
            ("chamber_example", chamber_example),
            ("wall_crossing_example", wall_crossing_example),
            ("psi_kappa_multinomial", psi_kappa_multinomial),
            ("recursion_identity", recursion_identity),
            ("turnaround", turnaround),
            ("classifier_grid", classifier_grid),
            ("enumeration_invariants", enumeration_invariants)]


def cmd_selftest(args) -> int:
    results = []
    failed = 0
    for name, prop in _selftest_properties():
        try:
            ok = bool(prop())
        except Exception as exc:  # a crashed property is a failed property
            ok = False
            print(f"FAIL {name}: {exc}", file=sys.stderr)
        results.append({"name": name, "ok": ok})
        if not ok:
            failed += 1
    if args.format == "json":
        print(json.dumps({"results": results, "failed": failed},
                         indent=2, sort_keys=True))
    else:
        for r in results:
            print(f"{'ok  ' if r['ok'] else 'FAIL'} {r['name']}")
        print(f"{len(results) - failed}/{len(results)} properties hold")
    return EXIT_SELFTEST if failed else EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {"number": cmd_number, "covers": cmd_covers,
                "polynomial": cmd_polynomial, "walls": cmd_walls,
                "wallcross": cmd_wallcross, "classify": cmd_classify,
                "selftest": cmd_selftest}
    try:
        return handlers[args.command](args)
    except (ProblemError, FixtureError, ValueError) as exc:
        if isinstance(exc, WallError):
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_WALL
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except MissingVertexData as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISSING_FIXTURE


if __name__ == "__main__":
    sys.exit(main())
