"""Command-line front end.

Matrices are written ``a11,a12;a21,a22`` (quote them in the shell).

Exit codes: 0 success, 1 input error, 2 verification or claim failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import random
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from math import gcd
from typing import List, Optional, Sequence

from . import bezout, modring
from .errors import Isr1Error, ModulusTooLarge, NotCoprime, VerificationFailed
from .mat2 import Mat2, format_matrix, parse_matrix
from .zdecider import (
    ISR1,
    clean_decompose,
    decide_isr1,
    euclidean_criterion,
    sample_matrices,
    verify_witness,
)

DEFAULT_SEED = 20240601
SEED_ENV = "ISR1_SEED"

SCAN_COLUMNS = ("a", "b", "euclidean", "divisibility", "agree", "witness_found")

EXIT_OK, EXIT_INPUT, EXIT_VERIFY = 0, 1, 2

_MATRIX_TOKEN = re.compile(r"^-\d+\s*,")


class InputError(Exception):
    pass


def _matrix(text: str) -> Mat2:
    try:
        return parse_matrix(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _rows(M: Mat2) -> str:
    return f"[[{M.a11}, {M.a12}], [{M.a21}, {M.a22}]]"


def _emit(text: str) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return DEFAULT_SEED
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"{SEED_ENV}={raw!r} is not an integer") from None


# decide

def cmd_decide(args: argparse.Namespace) -> int:
    try:
        dec = decide_isr1(args.matrix)
    except VerificationFailed as exc:
        print(f"internal verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    if args.format == "json":
        _emit(json.dumps(dec.to_dict()))
        return EXIT_OK
    lines = [
        f"matrix:   {format_matrix(dec.matrix)}",
        f"status:   {dec.status}",
        f"det:      {dec.det}",
        f"content:  {dec.content}",
    ]
    if dec.witness is not None:
        lines += [
            f"witness E: {_rows(dec.witness.E)}",
            f"unitizer Y: {_rows(dec.witness.Y)}",
            f"sign:     {dec.witness.sign:+d}",
        ]
    elif dec.unitizer is not None:
        lines.append(f"trivial unitizer: {_rows(dec.unitizer)}")
    if dec.reason:
        lines.append(f"reason:   {dec.reason}")
    if dec.terminal_pair:
        lines.append(f"terminal pair: {tuple(dec.terminal_pair)}")
    _emit("\n".join(lines))
    return EXIT_OK


# bezout

def _describe(sols: bezout.ShiftedProductSolutions) -> str:
    if isinstance(sols, bezout.ZeroProductFamily):
        parts = []
        if sols.k is not None:
            parts.append(f"k = {sols.k}, l free")
        if sols.l is not None:
            parts.append(f"l = {sols.l}, k free")
        return " or ".join(parts) if parts else "no solutions"
    return ", ".join(map(str, sols)) if sols else "no solutions"


def cmd_bezout(args: argparse.Namespace) -> int:
    a, b = args.a, args.b
    fam = bezout.ext_gcd(a, b)
    out = {"a": a, "b": b, "gcd": fam.g, "base_solution": [fam.x0, fam.z0]}
    if args.minimal or args.divisibility:
        if a < 1 or b < 1:
            raise InputError("--minimal/--divisibility need positive a and b")
        if fam.g != 1:
            raise InputError(f"{a} and {b} are not coprime (gcd {fam.g})")
    if args.minimal:
        out["minimal_pairs"] = [[p.x, p.z] for p in bezout.minimal_pairs(a, b)]
    if args.divisibility:
        res = bezout.divisibility_check(a, b)
        sol = res.solution()
        out["divisibility"] = {
            "isr1": res.holds,
            "z_divides_x_minus_1": _describe(res.minus),
            "z_divides_x_plus_1": _describe(res.plus),
            "solution": list(sol) if sol else None,
        }
    if args.format == "json":
        _emit(json.dumps(out))
        return EXIT_OK
    lines = [f"gcd({a}, {b}) = {fam.g}", f"base solution: {a}*({fam.x0}) + {b}*({fam.z0}) = {fam.g}"]
    if fam.g == 1:
        lines.append(f"family: (x, z) = ({fam.x0} + {b}k, {fam.z0} - {a}k)")
    if args.minimal:
        lines.append("minimal pairs: " + ", ".join(f"({x}, {z})" for x, z in out["minimal_pairs"]))
    if args.divisibility:
        d = out["divisibility"]
        z0 = f"{a}k - {fam.z0}" if fam.z0 >= 0 else f"{a}k + {-fam.z0}"
        lines.append(f"({z0})({a}l + {b}) = {a - 1}: {d['z_divides_x_minus_1']}")
        lines.append(f"({z0})({a}l + {b}) = {-(a + 1)}: {d['z_divides_x_plus_1']}")
        if d["solution"]:
            x, z, s = d["solution"]
            lines.append(f"solution x={x}, z={z}: z divides x {'-' if s == 1 else '+'} 1")
        lines.append(f"divisibility isr1: {str(d['isr1']).lower()}")
    _emit("\n".join(lines))
    return EXIT_OK


# scan

def scan_row(a: int, b: int) -> dict:
    euclid = euclidean_criterion(a, b).accepted
    divis = bezout.divisibility_isr1(a, b)
    dec = decide_isr1(Mat2(a, b, 0, 0))
    found = dec.status == ISR1 and dec.witness is not None
    return {
        "a": a,
        "b": b,
        "euclidean": euclid,
        "divisibility": divis,
        "agree": euclid == divis == found,
        "witness_found": found,
    }


def _scan_block(args) -> List[dict]:
    a, top = args
    return [scan_row(a, b) for b in range(1, top + 1) if gcd(a, b) == 1]


def scan(top: int, jobs: int = 1) -> List[dict]:
    blocks = [(a, top) for a in range(1, top + 1)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_scan_block, blocks, chunksize=8))
    else:
        parts = [_scan_block(blk) for blk in blocks]
    return [row for part in parts for row in part]


def cmd_scan(args: argparse.Namespace) -> int:
    if not 2 <= args.max <= 2000:
        raise InputError("--max must lie in [2, 2000]")
    rows = scan(args.max, args.jobs)
    if args.format == "json":
        _emit(json.dumps(rows))
    else:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=SCAN_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: (str(v).lower() if isinstance(v, bool) else v) for k, v in row.items()})
        sys.stdout.write(buf.getvalue())
    bad = sum(not r["agree"] for r in rows)
    if bad:
        print(f"{bad} disagreement(s)", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


# oracle

def _report_text(report: modring.OracleReport) -> str:
    lines = [f"M_2(Z/{report.n}) {report.mode} oracle, conventions {', '.join(report.conventions)}"]
    lines += [f"  {k}: {v}" for k, v in report.counts.items()]
    for claim, ok in report.claims.items():
        tag = " (open question)" if claim in modring.OPEN_QUESTION_CLAIMS else ""
        lines.append(f"  claim {claim}: {'pass' if ok else 'FAIL'}{tag}")
    for v in report.violations:
        lines.append(f"  violation {v.claim}: {' / '.join(map(str, v.matrices))} {v.detail}")
    if report.mode == "targeted":
        for e in report.elements:
            lines.append(f"  {e.matrix}: unit={e.unit} clean={e.clean} strongly_clean={e.strongly_clean}")
            for c, r in e.left_isr1.items():
                extra = f" failing X={r.failing_x}" if r.failing_x else ""
                lines.append(f"    left isr1 [{c}]: {r.holds}{extra}")
            for c, r in e.right_isr1.items():
                extra = f" failing X={r.failing_x}" if r.failing_x else ""
                lines.append(f"    right isr1 [{c}]: {r.holds}{extra}")
    return "\n".join(lines)


def cmd_oracle(args: argparse.Namespace) -> int:
    n = args.mod
    conventions = {modring.C1, args.convention}
    if args.full == bool(args.matrix):
        raise InputError("give exactly one of --full or --matrix")
    targets = None
    if args.matrix:
        targets = [modring.ModMat(n, tuple(M)) for M in args.matrix]
    try:
        report = modring.oracle_report(n, conventions, targets)
    except ModulusTooLarge as exc:
        raise InputError(str(exc)) from None
    _emit(report.to_json() if args.format == "json" else _report_text(report))
    return EXIT_VERIFY if report.unexpected_violations else EXIT_OK


# witness

def cmd_witness(args: argparse.Namespace) -> int:
    A = args.matrix
    dec = decide_isr1(A)
    if dec.status != ISR1 or dec.witness is None:
        print(f"not applicable: {format_matrix(A)} has status {dec.status} "
              "and no nontrivial witness", file=sys.stderr)
        return EXIT_INPUT
    seed = args.seed if args.seed is not None else default_seed()
    rng = random.Random(seed)
    samples = sample_matrices(rng, args.samples, args.bound)
    check = verify_witness(A, dec.witness, samples)
    Ec, U = clean_decompose(A)
    w = dec.witness
    lines = [
        f"matrix:     {format_matrix(A)}",
        f"witness E:  {_rows(w.E)}",
        f"unitizer Y: {_rows(w.Y)}",
        f"sign:       {w.sign:+d}",
        f"clean:      {_rows(A)} = {_rows(Ec)} + {_rows(U)}",
        f"samples:    {args.samples} (seed {seed}, |entries| <= {args.bound})",
    ]
    for X, value in zip(samples, check.dets):
        lines.append(f"  X={format_matrix(X)}  det(A + Y(XA - I)) = {value}")
    lines.append("result: ok" if check.ok else f"result: FAILED ({check.failure})")
    _emit("\n".join(lines))
    return EXIT_OK if check.ok else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="isr1",
        description="Idempotent stable range one for 2x2 integer matrices.",
        epilog="Matrices are written 'a11,a12;a21,a22'. Exit codes: 0 ok, 1 input error, "
               "2 verification or claim failure.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decide", help="classify a matrix as unit / isr1 / not_sr1 / not_isr1")
    p.add_argument("matrix", type=_matrix)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("bezout", help="Bezout family, minimal pairs and the divisibility test")
    p.add_argument("a", type=int)
    p.add_argument("b", type=int)
    p.add_argument("--minimal", action="store_true", help="list minimal pairs")
    p.add_argument("--divisibility", action="store_true", help="decide isr1 via divisibility")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_bezout)

    p = sub.add_parser(
        "scan",
        help="cross-check both criteria on every coprime pair up to --max",
        description="One row per coprime pair 1 <= a, b <= max. CSV columns: "
                    + ", ".join(SCAN_COLUMNS) + ". Exits 2 if any row disagrees.",
    )
    p.add_argument("--max", type=int, required=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--jobs", type=int, default=1, help="worker processes (output order is unchanged)")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("oracle", help="exhaustive definitional checks over M_2(Z/n)")
    p.add_argument("--mod", type=int, required=True)
    p.add_argument("--full", action="store_true", help="classify every matrix (n <= 4)")
    p.add_argument("--matrix", type=_matrix, action="append", help="targeted check (n <= 12); repeatable")
    p.add_argument("--convention", choices=modring.CONVENTIONS, default=modring.C1,
                   help="c1: A + E(XA - I); c2: A + E(I - XA). c2 is always compared against c1")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("witness", help="print and verify the witness, unitizer and clean decomposition")
    p.add_argument("matrix", type=_matrix)
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--bound", type=int, default=100, help="sampled X entries lie in [-bound, bound]")
    p.add_argument("--seed", type=int, default=None,
                   help=f"Mersenne Twister seed (default ${SEED_ENV} or {DEFAULT_SEED})")
    p.set_defaults(func=cmd_witness)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    # argparse takes "-4,2;2,-1" for an option flag; a leading space defuses that
    argv = [f" {tok}" if tok.startswith("-") and _MATRIX_TOKEN.match(tok) else tok for tok in argv]
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (InputError, NotCoprime) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except VerificationFailed as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except Isr1Error as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
