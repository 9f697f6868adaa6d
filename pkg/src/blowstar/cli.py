"""Batch command-line front end.

``blowstar run problem.json`` executes one task and prints the
certificate; ``blowstar verify certificate.json`` replays a certificate's
witnesses.  Negative mathematical verdicts are successes (exit 0); only
malformed or semantically invalid input exits nonzero.

Exit codes: 0 verdict produced (run and verify alike), 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import BlowstarError, NotInNagataRing, ParseError, UsageError
from .orders import GREVLEX, LEX
from .certs import (
    dumps_certificate,
    load_problem_text,
    run_problem,
    verify_certificate,
)


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="blowstar",
        description="Exact blowup-chart / Nagata-ring calculus with re-checkable certificates.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    runp = sub.add_parser("run", help="execute a problem file and print its certificate")
    runp.add_argument("file", help="problem file (JSON)")
    runp.add_argument(
        "--order",
        choices=["lex", "grevlex"],
        default="grevlex",
        help="monomial order for engine-level tasks (default grevlex)",
    )
    runp.add_argument(
        "--jobs", type=int, default=1, help="parallelize per-chart work (threads)"
    )
    runp.add_argument(
        "--oracle",
        action="store_true",
        help="cross-check membership/relevance verdicts by bounded brute-force search",
    )
    runp.add_argument(
        "--deg-bound",
        type=int,
        default=4,
        help="total-degree bound for the --oracle search (default 4)",
    )
    runp.add_argument(
        "-o", "--output", default=None, help="write the certificate here instead of stdout"
    )

    verp = sub.add_parser("verify", help="re-check a certificate's witnesses")
    verp.add_argument("file", help="certificate file (JSON)")
    return parser


def _read(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None


def _cmd_run(args):
    problem = load_problem_text(_read(args.file))
    if args.jobs < 1:
        raise UsageError("--jobs must be at least 1")
    if args.deg_bound < 0:
        raise UsageError("--deg-bound must be non-negative")
    order = LEX if args.order == "lex" else GREVLEX
    try:
        cert = run_problem(
            problem,
            order=order,
            jobs=args.jobs,
            oracle=args.oracle,
            deg_bound=args.deg_bound,
        )
    except NotInNagataRing as e:
        # refutation attached: a precondition failed, so this is usage, not a verdict
        refutation = {
            "error": str(e),
            "content_gb": [str(g) for g in (e.cert.content_gb or ())],
        }
        print(json.dumps(refutation, sort_keys=True, indent=2), file=sys.stderr)
        return 2
    text = dumps_certificate(cert)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_verify(args):
    try:
        cert = json.loads(_read(args.file))
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e.msg}", e.lineno, e.colno) from None
    result = verify_certificate(cert)
    out = {"valid": result.ok}
    if not result.ok:
        out["failed_check"] = result.failed_check
    print(json.dumps(out, sort_keys=True, indent=2))
    return 0


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        return _cmd_verify(args)
    except (UsageError, ParseError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except BlowstarError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
