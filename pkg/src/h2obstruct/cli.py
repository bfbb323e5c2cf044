"""Command-line front end.

    h2obstruct analyze --pretzel 13,4,11 --gamma 2 --format text
    h2obstruct scan --pretzel-range 1,15 1,6 1,15 > scan.csv
    h2obstruct mq --matrix '[[17,-4],[-4,15]]'

Exit status is 0 whatever the verdict, 2 on bad input, 3 when an
internal consistency check fails.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import sys
from concurrent.futures import ProcessPoolExecutor

from .diagram import goeritz_from_json
from .errors import H2Error, InputError, InvariantViolation, error_name
from .obstruction import CSV_COLUMNS, analyze, check_against_oracle, dumps
from .quadform import group_of, mq_table

EXIT_INPUT = 2
EXIT_INTERNAL = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _triple(text):
    try:
        vals = [int(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected p,q,r integers, got {text!r}") from None
    if len(vals) != 3:
        raise argparse.ArgumentTypeError(f"expected three integers, got {text!r}")
    return vals


def _span(text):
    try:
        lo, hi = (int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a range lo,hi, got {text!r}") from None
    if lo > hi or lo < 1:
        raise argparse.ArgumentTypeError(f"bad range {text!r}")
    return lo, hi


def _nonneg(text):
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return v


def _add_input(p, required=True):
    g = p.add_mutually_exclusive_group(required=required)
    g.add_argument("--pretzel", type=_triple, metavar="p,q,r")
    g.add_argument("--pd", metavar="CODE", help='PD code, e.g. "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)"')
    g.add_argument("--matrix", metavar="JSON", help="symmetric integer matrix as a JSON array")
    g.add_argument("--unknot", action="store_true")
    g.add_argument("--input", metavar="FILE", help="JSON job object ('-' for stdin)")
    p.add_argument("--f0", type=_nonneg, help="index of the deleted black face (PD input)")


def _add_options(p):
    p.add_argument("--gamma", type=_nonneg, help="crosscap number")
    p.add_argument("--gamma-star", type=_nonneg, help="4-dimensional crosscap number")
    p.add_argument("--bands", type=_nonneg, help="length of a known unknotting band sequence")
    p.add_argument("--oracle", action="store_true", help="cross-check M_Q by brute force")
    p.add_argument("--max-bound", type=_nonneg, help="give up when the enumeration bound exceeds this")


def build_parser():
    parser = _Parser(prog="h2obstruct",
                     description="Obstructions to H(2)-unknotting number one.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    a = sub.add_parser("analyze", help="run both obstructions on one knot")
    _add_input(a)
    _add_options(a)
    a.add_argument("--format", choices=("json", "csv", "text"), default="json")

    s = sub.add_parser("scan", help="CSV scan over a box of pretzel knots")
    s.add_argument("--pretzel-range", type=_span, nargs=3, required=True,
                   metavar=("a,b", "c,d", "e,f"))
    _add_options(s)
    s.add_argument("--jobs", type=int, default=1)

    m = sub.add_parser("mq", help="print the certified M_Q table")
    _add_input(m)
    m.add_argument("--oracle", action="store_true")
    m.add_argument("--max-bound", type=_nonneg)
    return parser


def job_from_args(args) -> dict:
    if args.input:
        try:
            text = sys.stdin.read() if args.input == "-" else open(args.input, encoding="utf-8").read()
            job = json.loads(text)
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read job: {exc}") from None
        if args.f0 is not None and isinstance(job, dict):
            job["f0"] = args.f0
        return job
    if args.pretzel is not None:
        job = {"pretzel": args.pretzel}
    elif args.pd is not None:
        job = {"pd": args.pd}
    elif args.matrix is not None:
        try:
            job = {"matrix": json.loads(args.matrix)}
        except json.JSONDecodeError as exc:
            raise InputError(f"--matrix is not valid JSON: {exc}") from None
    else:
        job = {"unknot": True}
    if args.f0 is not None:
        job["f0"] = args.f0
    return job


def _csv(rows) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


def _run_analyze(args, out):
    g = goeritz_from_json(job_from_args(args))
    report = analyze(g, args.gamma, args.gamma_star, args.bands,
                     max_bound=args.max_bound, oracle=args.oracle)
    if args.format == "json":
        out.write(report.to_json() + "\n")
    elif args.format == "csv":
        out.write(_csv([report.csv_row()]))
    else:
        out.write(report.to_text() + "\n")


def scan_row(triple, gamma=None, gamma_star=None, bands=None, max_bound=None, oracle=False):
    """One CSV row; input errors become a skip reason."""
    try:
        g = goeritz_from_json({"pretzel": list(triple)})
        return analyze(g, gamma, gamma_star, bands, max_bound=max_bound, oracle=oracle).csv_row()
    except InputError as exc:
        row = dict.fromkeys(CSV_COLUMNS, "")
        row.update(p=triple[0], q=triple[1], r=triple[2], skip_reason=error_name(exc))
        return row


def _scan_row_star(args):
    return scan_row(*args)


def _run_scan(args, out):
    triples = itertools.product(*(range(lo, hi + 1) for lo, hi in args.pretzel_range))
    work = [(t, args.gamma, args.gamma_star, args.bands, args.max_bound, args.oracle)
            for t in triples]
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            rows = list(pool.map(_scan_row_star, work, chunksize=8))
    else:
        rows = [_scan_row_star(w) for w in work]
    out.write(_csv(rows))


def _run_mq(args, out):
    g = goeritz_from_json(job_from_args(args))
    G = group_of(g.Q)
    table = mq_table(g.Q, G, max_bound=args.max_bound)
    if args.oracle:
        check_against_oracle(g.Q, G, table)
    out.write(dumps(table.to_dict()) + "\n")


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    runner = {"analyze": _run_analyze, "scan": _run_scan, "mq": _run_mq}[args.command]
    try:
        runner(args, out)
    except InvariantViolation as exc:
        print(f"{error_name(exc)}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except H2Error as exc:
        print(f"{error_name(exc)}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
