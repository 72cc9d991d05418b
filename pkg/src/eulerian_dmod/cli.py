"""Command-line front end.

Subcommands:

  verify       run a verification suite and emit a report
  koszul       Koszul homology of a catalog or JSON module
  euler-check  Eulerian / generalized Eulerian classification
  tor-r        Tor over R against a singleton-profile monomial ideal
  tor-a1       Tor over A_1 for catalog pairs
  ext-a1       Ext over A_1 for catalog pairs
  evidence     the aggregated conjecture-evidence battery

Exit codes: 0 all pass, 1 any fail, 2 usage error.  Reports are
deterministic JSON by default (--format csv|pretty for the others).
"""

from __future__ import annotations

import argparse
import sys

from .catalog import a1_catalog, catalog_module
from .cech import parse_ideal, parse_pipeline, lyubeznik_pipeline
from .euler import eulerian_check, ge_offset_detect
from .homalg import evidence_suite, ext_A1, hm_of_tor_report, sharp, tor_A1
from .koszul import concentration_check, koszul_homology
from .multigraded import GradedDimVector, module_from_json, shift
from .report import CONJECTURE, FAIL, PASS, Instance, VerificationReport, dims_table, emit_report
from .suites import SUITES, Options, run_verify


def _parse_window(text: str) -> tuple[int, int]:
    lo, _, hi = text.partition("..")
    try:
        return int(lo), int(hi)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad window {text!r}; use lo..hi") from exc


def _parse_ops(text: str) -> list[tuple[str, int]]:
    ops = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        if chunk[0] not in "xd" or not chunk[1:].isdigit():
            raise argparse.ArgumentTypeError(f"bad operator {chunk!r}; use x1 or d2")
        ops.append((chunk[0], int(chunk[1:])))
    if not ops:
        raise argparse.ArgumentTypeError("empty operator list")
    return ops


def _parse_shift(text: str) -> tuple[int, ...]:
    return tuple(int(c) for c in text.split(","))


def _load_module(args) -> "StraightModule":
    if getattr(args, "module_json", None):
        with open(args.module_json, "r", encoding="utf-8") as fh:
            return module_from_json(fh.read())
    return catalog_module(args.module, args.n)


def _emit(report: VerificationReport, args) -> int:
    text = emit_report(report, args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return report.exit_code()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eulerian-dmod",
        description="Exact Koszul/De Rham/Tor/Ext computations for graded Weyl-algebra modules",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=("json", "csv", "pretty"), default="json")
        p.add_argument("--out", help="write the report to a file instead of stdout")

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("--suite", default="all", help=f"one of {', '.join(SUITES)}")
    p.add_argument("--max-n", type=int, default=3, help="variable-count bound (hard cap 6)")
    p.add_argument("--window", type=_parse_window, default=(-12, 6))
    p.add_argument("--shift", type=int, default=None,
                   help="total shift for the negative Eulerian battery")
    common(p)

    p = sub.add_parser("koszul", help="Koszul homology of a module")
    p.add_argument("--module", default="R", help="catalog name, e.g. R, E, Rx1, H1(x1)")
    p.add_argument("--module-json", help="load the module from a JSON file")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--ops", type=_parse_ops, required=True, help='e.g. "x1,x2,d3"')
    p.add_argument("--window", type=_parse_window, default=(-12, 6))
    p.add_argument("--expect", type=int, default=None,
                   help="assert concentration at this degree")
    common(p)

    p = sub.add_parser("euler-check", help="Eulerian classification of a module")
    p.add_argument("--module", default="R")
    p.add_argument("--module-json")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--shift", type=_parse_shift, default=None, help="e.g. 1,0")
    common(p)

    p = sub.add_parser("tor-r", help="H^l_m(Tor_nu(H^i_I(R), H^g_J(R)))")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--ideal-i", required=True, help='e.g. "x1"')
    p.add_argument("--spot-i", type=int, required=True)
    p.add_argument("--ideal-j", required=True, help='e.g. "x2"')
    common(p)

    p = sub.add_parser("tor-a1", help="Tor over A_1 for catalog modules")
    p.add_argument("--module", default="E1", choices=("lR", "Rx", "E1"))
    p.add_argument("--against", default="Rx", choices=("lR", "Rx", "E1"))
    common(p)

    p = sub.add_parser("ext-a1", help="Ext over A_1 for catalog modules")
    p.add_argument("--module", default="E1", choices=("lR", "Rx", "E1"))
    p.add_argument("--against", default="E1", choices=("lR", "Rx", "E1"))
    common(p)

    p = sub.add_parser("evidence", help="the conjecture-evidence battery")
    p.add_argument("--max-n", type=int, default=4)
    common(p)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors already
        return int(exc.code or 0)
    try:
        return _dispatch(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def _dispatch(args) -> int:
    if args.command == "verify":
        if args.suite not in SUITES:
            print(f"error: unknown suite {args.suite!r}", file=sys.stderr)
            return 2
        opts = Options(max_n=args.max_n, window=args.window, shift=args.shift)
        return _emit(run_verify(args.suite, opts), args)

    if args.command == "koszul":
        M = _load_module(args)
        report = VerificationReport("koszul")
        mods = koszul_homology(M, args.ops, window=args.window)
        verdict = PASS
        if args.expect is not None:
            verdict = PASS if concentration_check(mods, args.expect).passed else FAIL
        report.add(Instance(
            theorem="koszul-homology",
            description=f"ops {','.join(k + str(i) for k, i in args.ops)} on {args.module}",
            tables=dims_table(mods),
            expected=args.expect,
            verdict=verdict,
        ))
        return _emit(report, args)

    if args.command == "euler-check":
        M = _load_module(args)
        if args.shift:
            vec = args.shift
            if len(vec) != M.n:
                vec = vec + (0,) * (M.n - len(vec))
            M = shift(M, vec)
        verdict = eulerian_check(M)
        detected = ge_offset_detect(M)
        report = VerificationReport("euler-check")
        report.add(Instance(
            theorem="eulerian-check",
            description=f"{args.module}: {verdict}, restoring shift {detected}",
            verdict=PASS if verdict.ok() else FAIL,
        ))
        return _emit(report, args)

    if args.command == "tor-r":
        ideal_i, notices_i = parse_ideal(args.ideal_i, args.n)
        ideal_j, notices_j = parse_ideal(args.ideal_j, args.n)
        for note in notices_i + notices_j:
            print(f"notice: {note}", file=sys.stderr)
        rep = hm_of_tor_report(ideal_i, args.spot_i, ideal_j, args.n)
        report = VerificationReport("tor-r")
        tables = {
            f"l={l},nu={nu}": GradedDimVector({-args.n: a} if a > 0 else {})
            for (l, nu), a in rep.multiplicities.items()
        }
        report.add(Instance(
            theorem="thm-second",
            description=f"H^l_m(Tor_nu(H^{args.spot_i}_{ideal_i}(R), H^{rep.g}_{ideal_j}(R)))",
            tables=tables,
            verdict=PASS if rep.recognizer_ok else FAIL,
        ))
        return _emit(report, args)

    if args.command in ("tor-a1", "ext-a1"):
        cat = a1_catalog()
        P, _ = cat[args.module]
        _, N = cat[args.against]
        report = VerificationReport(args.command)
        if args.command == "tor-a1":
            dims = tor_A1(sharp(P), N)
            check = concentration_check(dims, -1)
            report.add(Instance(
                theorem="thm-first",
                description=f"Tor^A1(({args.module})#, {args.against})",
                tables=dims_table(dims),
                expected=-1,
                verdict=PASS if check.passed else FAIL,
            ))
        else:
            dims = ext_A1(P, N)
            check = concentration_check(dims, 0)
            report.add(Instance(
                theorem="conj-ext",
                description=f"Ext^nu({args.module}, {args.against}): "
                            + ("concentrated at 0" if check.passed else "off-zero mass"),
                tables=dims_table(dims),
                expected=0,
                verdict=CONJECTURE,
            ))
        return _emit(report, args)

    if args.command == "evidence":
        return _emit(evidence_suite(args.max_n), args)

    raise AssertionError(f"unhandled command {args.command}")


if __name__ == "__main__":
    sys.exit(main())
