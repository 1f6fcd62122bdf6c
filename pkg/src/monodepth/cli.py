"""Command line interface.

Exit codes: 0 success, 1 verification failure, 2 usage error,
3 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from . import family, fuzz, stability
from .certificates import VarCountTooLarge, associated_primes, depth_bracket
from .core import MonomialIdeal, colon, parse_monomial, power
from .homology import DEFAULT_CAP, CapExceeded

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3


class UsageError(Exception):
    pass


def read_ideal(path: str) -> MonomialIdeal:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise UsageError(f"cannot read ideal file {path}: {e}") from None
    try:
        if path.endswith(".json") or text.lstrip().startswith("{"):
            return MonomialIdeal.from_json(text)
        return MonomialIdeal.from_text(text)
    except (ValueError, KeyError) as e:
        raise UsageError(f"bad ideal file {path}: {e}") from None


def _proper(ideal: MonomialIdeal) -> MonomialIdeal:
    if not ideal.is_proper():
        raise UsageError("the ideal must be proper and nonzero")
    return ideal


def _csv(rows, header) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _ideal_csv(ideal: MonomialIdeal) -> str:
    return _csv([g.exps for g in ideal.gens], ideal.ring.vars)


# ---------------------------------------------------------------- commands
# each returns (report dict, text summary, csv text, exit code)


def cmd_verify(args):
    def progress(rec):
        if args.format == "text" and args.progress:
            print(f"  k={rec.k} depth={rec.depth} ({rec.seconds:.1f}s)", file=sys.stderr)

    rep = family.verify_theorem(args.n, args.kmax, args.engine, args.cap, progress=progress)
    report = rep.to_json(timings=args.timings)
    lines = [f"I({args.n}) depth(S/I^k), k = 1..{args.kmax}, engine policy {args.engine}"]
    for r in rep.records:
        bad = [c for c, ok in r.checks.items() if not ok]
        status = "ok" if not bad else "FAIL " + ",".join(bad)
        t = f"  {r.seconds:.2f}s" if args.timings else ""
        lines.append(f"  k={r.k:<3} expected {r.expected}  computed [{r.lower},{r.upper}]  "
                     f"{r.engine:<20} {status}{t}")
    lines.append(f"depth sequence {rep.depth_sequence}; strict local maxima {rep.strict_local_maxima}")
    lines.append("PASS" if rep.passed else "FAIL")
    rows = [(r.k, r.expected, r.lower, r.upper, r.engine) for r in rep.records]
    table = _csv(rows, ["k", "expected", "computed_lower", "computed_upper", "engine"])
    return report, "\n".join(lines), table, EXIT_OK if rep.passed else EXIT_FAIL


def cmd_depth(args):
    ideal = _proper(read_ideal(args.ideal))
    br = depth_bracket(ideal, budget=args.budget, engine=args.engine, cap=args.cap)
    report = {"ideal": ideal.to_json(), "field": "QQ", **br.to_json()}
    text = (f"depth(S/I) in [{br.lower}, {br.upper}]"
            f"  lower by {br.lower_certificate.kind}, upper by {br.upper_certificate.kind}")
    table = _csv([(br.lower, br.upper, br.lower_certificate.kind, br.upper_certificate.kind,
                   "" if br.exact is None else br.exact)],
                 ["lower", "upper", "lower_certificate", "upper_certificate", "exact"])
    return report, text, table, EXIT_OK


def cmd_power(args):
    if args.k < 1:
        raise UsageError("--k must be >= 1")
    ideal = read_ideal(args.ideal)
    p = power(ideal, args.k)
    report = {"k": args.k, "ideal": p.to_json(), "count": len(p)}
    return report, p.to_text().rstrip("\n"), _ideal_csv(p), EXIT_OK


def cmd_colon(args):
    ideal = read_ideal(args.ideal)
    if (args.by is None) == (args.by_ideal is None):
        raise UsageError("give exactly one of --by MONOMIAL or --by-ideal FILE")
    if args.by is not None:
        try:
            by = parse_monomial(ideal.ring, args.by)
        except (ValueError, KeyError) as e:
            raise UsageError(str(e)) from None
    else:
        by = read_ideal(args.by_ideal)
        if by.ring != ideal.ring:
            raise UsageError("both ideals must use the same ring line")
        if by.is_zero():
            raise UsageError("colon by the zero ideal")
    q = colon(ideal, by)
    report = {"ideal": q.to_json(), "count": len(q)}
    return report, q.to_text().rstrip("\n"), _ideal_csv(q), EXIT_OK


def cmd_ass(args):
    ideal = _proper(read_ideal(args.ideal))
    ass = associated_primes(ideal, args.budget)
    report = {
        "ring": list(ideal.ring.vars),
        "ass": ass.to_json(),
        "witnesses": {" ".join(p): str(w) for p, w in ass.witnesses.items()},
    }
    text = "\n".join("(" + ", ".join(p) + ")" for p in ass.primes)
    table = _csv([(" ".join(p), len(p), str(ass.witnesses[p])) for p in ass.primes],
                 ["prime", "height", "witness"])
    return report, text, table, EXIT_OK


def cmd_stability(args):
    ideal = _proper(read_ideal(args.ideal))
    rep = stability.stability_report(ideal, args.kmax, args.engine, args.cap)
    report = rep.to_json()
    lines = []
    for k, (a, b) in enumerate(zip(rep.ass, rep.depth_series), 1):
        lines.append(f"k={k}: depth [{b.lower},{b.upper}]  Ass: " +
                     " ".join("(" + ",".join(p) + ")" for p in a.primes))
    idx = rep.observed_stability_index
    lines.append(f"observed stability index: {idx if idx is not None else 'not observed'} (horizon {args.kmax})")
    for p, k in rep.persistence_violations:
        lines.append(f"persistence violation: ({','.join(p)}) in Ass(I^{k}) but not Ass(I^{k + 1})")
    rows = [(p_k, " ".join(p)) for p, p_k in rep.persistence_violations]
    table = _csv(rows, ["k", "prime"])
    return report, "\n".join(lines), table, EXIT_OK


def cmd_conjecture(args):
    ideal = _proper(read_ideal(args.ideal))
    rec = stability.conjecture_scan(ideal, args.kmax, args.engine, args.cap)
    text = (f"depth(S/I^k) = {rec['depth_quotient']}; depth(I^k) = {rec['depth_ideal']}\n"
            f"constant for {rec['varcount']} <= k <= {args.kmax}: {rec['consistent']} ({rec['status']})")
    rows = [(k, d, m) for k, (d, m) in enumerate(zip(rec["depth_quotient"], rec["depth_ideal"]), 1)]
    return rec, text, _csv(rows, ["k", "depth_quotient", "depth_ideal"]), EXIT_OK


def cmd_fuzz(args):
    results = fuzz.run(args.seed, args.count)
    bad = [r for r in results if not (r["in_bracket"] and r["socle_matches_ass"])]
    report = {"seed": args.seed, "count": args.count, "failures": bad}
    text = f"{args.count} random ideals, seed {args.seed}: {len(bad)} failures"
    rows = [(r["ideal"], r["exact"], *r["bracket"], r["in_bracket"]) for r in results]
    table = _csv(rows, ["ideal", "exact", "lower", "upper", "in_bracket"])
    return report, text, table, EXIT_OK if not bad else EXIT_FAIL


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--out", help="write the JSON report to this file")
    shared.add_argument("--format", choices=["json", "csv", "text"], default="text",
                        help="stdout format (default text)")
    shared.add_argument("--engine", choices=["auto", "exact", "certificates"], default="auto")
    shared.add_argument("--cap", type=int, default=DEFAULT_CAP, help="lcm lattice size cap")
    shared.add_argument("--seed", type=int, default=0, help="seed for the fuzz command")

    p = argparse.ArgumentParser(prog="monodepth", description="Depth of powers of monomial ideals.")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify-theorem", parents=[shared], help="check the depth table of I(n)")
    v.add_argument("--n", type=int, required=True)
    v.add_argument("--kmax", type=int, required=True)
    v.add_argument("--timings", action="store_true", help="include per-k seconds in the report")
    v.add_argument("--progress", action="store_true", help="print per-k progress to stderr")
    v.set_defaults(func=cmd_verify)

    budget = dict(type=int, default=1 << 16, help="max number of variable subsets for Ass")
    d = sub.add_parser("depth", parents=[shared], help="certified depth of S/I")
    d.add_argument("--ideal", required=True)
    d.add_argument("--budget", **budget)
    d.set_defaults(func=cmd_depth)

    pw = sub.add_parser("power", parents=[shared], help="minimal generators of I^k")
    pw.add_argument("--ideal", required=True)
    pw.add_argument("--k", type=int, required=True)
    pw.set_defaults(func=cmd_power)

    c = sub.add_parser("colon", parents=[shared], help="colon ideal I : m or I : J")
    c.add_argument("--ideal", required=True)
    c.add_argument("--by", help="monomial, e.g. a^4*b^4")
    c.add_argument("--by-ideal", help="ideal file")
    c.set_defaults(func=cmd_colon)

    a = sub.add_parser("ass", parents=[shared], help="associated primes")
    a.add_argument("--ideal", required=True)
    a.add_argument("--budget", **budget)
    a.set_defaults(func=cmd_ass)

    s = sub.add_parser("stability", parents=[shared], help="Ass(I^k) and depth for k <= kmax")
    s.add_argument("--ideal", required=True)
    s.add_argument("--kmax", type=int, required=True)
    s.set_defaults(func=cmd_stability)

    cs = sub.add_parser("conjecture-scan", parents=[shared],
                        help="is depth constant from k = #variables on?")
    cs.add_argument("--ideal", required=True)
    cs.add_argument("--kmax", type=int, required=True)
    cs.set_defaults(func=cmd_conjecture)

    f = sub.add_parser("fuzz", parents=[shared], help="exact engine vs certificates on random ideals")
    f.add_argument("--count", type=int, default=50)
    f.set_defaults(func=cmd_fuzz)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    if getattr(args, "kmax", 1) < 1 or args.cap < 1:
        print("error: --kmax and --cap must be positive", file=sys.stderr)
        return EXIT_USAGE
    try:
        report, text, table, code = args.func(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (CapExceeded, VarCountTooLarge) as e:
        print(f"resource cap: {e}", file=sys.stderr)
        return EXIT_CAP
    dumped = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if args.out:
        Path(args.out).write_text(dumped)
    if args.format == "json":
        sys.stdout.write(dumped)
    elif args.format == "csv":
        sys.stdout.write(table)
    else:
        print(text)
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
