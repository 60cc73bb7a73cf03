"""Command-line front end: ``cuspcert certify | classify | search``.

The human-readable summary goes to standard output, or to standard error
when ``--out -`` sends the report itself to standard output.

Exit status: 0 when every certificate passes, 1 when any fails, 2 on
invalid arguments, 3 when an enumeration threshold is exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass
from typing import Optional, Sequence

from . import __version__
from .caselib import (
    DEFAULT_Q,
    SCHEMA,
    Certificate,
    certify_range,
    paper_witness,
    resolve_twist,
    valid_ranks,
)
from .genpos import GeneralPositionTester, count_general_position, rational_weyl_group
from .torus import (
    FAMILIES,
    QUOTIENT_THRESHOLD,
    build_family,
    character_group,
    evaluate_polynomial,
    is_anisotropic,
    is_prime_power,
    order_polynomial,
    torus_order,
    twist,
)
from .weyl import ENUMERATION_THRESHOLD, TooLargeError, twisted_conjugacy_classes

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_TOO_LARGE = 0, 1, 2, 3

CSV_HEADER = ("family", "rank", "q", "anisotropic", "torus_order", "wtk_order", "general_position", "verdict")


@dataclass
class RunConfig:
    command: str
    families: tuple[str, ...]
    ranks: tuple[int, ...]
    qs: tuple[int, ...]
    twist: str = "paper"
    out: Optional[str] = None
    fmt: str = "json"
    oracle: bool = True
    enumeration_threshold: int = ENUMERATION_THRESHOLD
    oracle_threshold: int = QUOTIENT_THRESHOLD
    workers: int = 1
    timestamp: bool = True


# -- argument parsing --------------------------------------------------------

def _int_range(text: str) -> list[int]:
    if ".." in text:
        lo, hi = text.split("..", 1)
        a, b = int(lo), int(hi)
        if a > b:
            raise ValueError(f"empty range {text}")
        return list(range(a, b + 1))
    return [int(text)]


def parse_ranks(text: str) -> list[int]:
    try:
        ranks = _int_range(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad rank {text!r}: {exc}") from None
    if ranks[0] < 1:
        raise argparse.ArgumentTypeError("ranks start at 1")
    return ranks


def parse_qs(text: str) -> list[int]:
    """A single prime power, or a range ``a..b`` (its prime powers are kept)."""
    try:
        qs = _int_range(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad q {text!r}: {exc}") from None
    if ".." not in text:
        if not is_prime_power(qs[0]):
            raise argparse.ArgumentTypeError(f"q = {qs[0]} is not a prime power")
        return qs
    qs = [q for q in qs if is_prime_power(q)]
    if not qs:
        raise argparse.ArgumentTypeError(f"range {text} contains no prime power")
    return qs


def parse_twist(text: str) -> str:
    if text in ("paper", "coxeter", "bourbaki"):
        return text
    if text.startswith("index:") and text[6:].isdigit():
        return text
    raise argparse.ArgumentTypeError(f"twist must be paper, coxeter, bourbaki or index:<k>, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cuspcert",
        description="Certify anisotropic tori and characters in general position for classical groups.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--family", action="append", choices=FAMILIES,
                        help="family to run (repeatable; default all)")
    common.add_argument("--rank", action="append", type=parse_ranks,
                        help="root-system rank or range a..b (repeatable)")
    common.add_argument("--q", action="append", type=parse_qs,
                        help="prime power or range a..b (repeatable)")
    common.add_argument("--out", help="report path ('-' for standard output)")
    common.add_argument("--format", dest="fmt", choices=("json", "csv"), default="json")
    common.add_argument("--enum-threshold", type=int, default=ENUMERATION_THRESHOLD,
                        help="largest group enumerated element by element")
    common.add_argument("--oracle-threshold", type=int, default=QUOTIENT_THRESHOLD,
                        help="largest character group enumerated by the orbit oracle")

    p = sub.add_parser("certify", parents=[common], help="certify witness cases")
    p.add_argument("--twist", type=parse_twist, default="paper")
    p.add_argument("--oracle", action=argparse.BooleanOptionalAction, default=True,
                   help="cross-check general position with the orbit oracle")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--no-timestamp", dest="timestamp", action="store_false")

    p = sub.add_parser("classify", parents=[common], help="twisted conjugacy classes and their tori")

    p = sub.add_parser("search", parents=[common], help="enumerate characters in general position")
    p.add_argument("--twist", type=parse_twist, default="paper")
    return parser


def _flatten(groups, default) -> tuple[int, ...]:
    if not groups:
        return tuple(default)
    return tuple(sorted({x for g in groups for x in g}))


def make_config(args: argparse.Namespace) -> RunConfig:
    families = tuple(sorted(set(args.family), key=FAMILIES.index)) if args.family else FAMILIES
    workers = getattr(args, "workers", 1)
    env = os.environ.get("CUSPCERT_THREADS")
    if env:
        workers = int(env)
    return RunConfig(
        command=args.command,
        families=families,
        ranks=_flatten(args.rank, range(1, 9)),
        qs=_flatten(args.q, DEFAULT_Q if args.command == "certify" else (2,)),
        twist=getattr(args, "twist", "paper"),
        out=args.out,
        fmt=args.fmt,
        oracle=getattr(args, "oracle", True),
        enumeration_threshold=args.enum_threshold,
        oracle_threshold=args.oracle_threshold,
        workers=max(1, workers),
        timestamp=getattr(args, "timestamp", True),
    )


# -- reports -----------------------------------------------------------------

def emit_json(certs: Sequence[Certificate]) -> str:
    doc = {"schema": SCHEMA, "certificates": [c.to_dict() for c in certs]}
    return json.dumps(doc, sort_keys=True, indent=1) + "\n"


def parse_json(text: str) -> list[Certificate]:
    doc = json.loads(text)
    if doc.get("schema") != SCHEMA:
        raise ValueError(f"unsupported schema {doc.get('schema')!r}")
    return [Certificate.from_dict(d) for d in doc["certificates"]]


def csv_row(c: Certificate) -> tuple:
    return (c.family, c.rank, c.q, str(c.anisotropic).lower(), c.torus_order,
            c.rational_weyl_group["order"], str(c.general_position).lower(), c.verdict)


def emit_csv(certs: Sequence[Certificate]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    writer.writerows(csv_row(c) for c in certs)
    return buf.getvalue()


def parse_csv(text: str) -> list[dict]:
    return list(csv.DictReader(io.StringIO(text)))


def _write(out: Optional[str], text: str) -> None:
    if out is None:
        return
    if out == "-":
        sys.stdout.write(text)
        return
    with open(out, "w", encoding="utf-8") as fh:
        fh.write(text)


def _say(cfg: RunConfig, text: str) -> None:
    # keep stdout clean when the report itself goes there
    print(text, file=sys.stderr if cfg.out == "-" else sys.stdout)


def exit_status(certs: Sequence[Certificate]) -> int:
    return EXIT_OK if all(c.passed for c in certs) else EXIT_FAIL


# -- commands ----------------------------------------------------------------

def cmd_certify(cfg: RunConfig) -> int:
    certs = certify_range(
        cfg.families,
        cfg.ranks,
        cfg.qs,
        workers=cfg.workers,
        twist_name=cfg.twist,
        oracle=cfg.oracle,
        enumeration_threshold=cfg.enumeration_threshold,
        oracle_threshold=cfg.oracle_threshold,
        timestamp=cfg.timestamp,
    )
    for c in certs:
        if not c.passed:
            _say(cfg, f"FAIL {c.family} rank {c.rank} q={c.q}: {'; '.join(c.failures)}")
    n_pass = sum(c.passed for c in certs)
    _say(cfg, f"{len(certs)} cases: {n_pass} PASS, {len(certs) - n_pass} FAIL")
    _write(cfg.out, emit_csv(certs) if cfg.fmt == "csv" else emit_json(certs))
    return exit_status(certs)


def classify(family: str, rank: int, qs: Sequence[int], threshold: int = ENUMERATION_THRESHOLD) -> dict:
    """Class table of the rational maximal tori of one group."""
    spec = build_family(family, rank)
    table = twisted_conjugacy_classes(spec.weyl, spec.F0, threshold)
    rows = []
    for k, cls in enumerate(table.classes):
        w = cls.representative
        T = twist(spec, w, qs[0])
        poly = order_polynomial(spec, w)
        rows.append({
            "index": k,
            "representative": w.to_json(),
            "size": cls.size,
            "anisotropic": is_anisotropic(T),
            "order_polynomial": poly,
            "torus_orders": {str(q): evaluate_polynomial(poly, q) for q in qs},
        })
    return {"family": family, "rank": rank, "ambient_dim": spec.ambient_dim, "classes": rows}


def cmd_classify(cfg: RunConfig) -> int:
    reports = []
    for f in cfg.families:
        for r in valid_ranks(f, cfg.ranks):
            rep = classify(f, r, cfg.qs, cfg.enumeration_threshold)
            reports.append(rep)
            n_aniso = sum(row["anisotropic"] for row in rep["classes"])
            _say(cfg, f"{f} rank {r}: {len(rep['classes'])} classes, {n_aniso} anisotropic")
            for row in rep["classes"]:
                orders = " ".join(f"{q}:{o}" for q, o in row["torus_orders"].items())
                flag = "aniso" if row["anisotropic"] else "     "
                _say(cfg, f"  [{row['index']:3d}] {str(row['representative']):24s} size {row['size']:<8d} {flag} |T| {orders}")
    if cfg.fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(("family", "rank", "index", "representative", "size", "anisotropic", "q", "torus_order"))
        for rep in reports:
            for row in rep["classes"]:
                for q, o in row["torus_orders"].items():
                    writer.writerow((rep["family"], rep["rank"], row["index"], " ".join(map(str, row["representative"])),
                                     row["size"], str(row["anisotropic"]).lower(), q, o))
        _write(cfg.out, buf.getvalue())
    else:
        _write(cfg.out, json.dumps({"schema": SCHEMA, "classify": reports}, sort_keys=True, indent=1) + "\n")
    return EXIT_OK


def search(family: str, rank: int, q: int, twist_name: str = "paper", threshold: int = QUOTIENT_THRESHOLD) -> dict:
    """General-position characters of one torus, one lattice vector per free orbit."""
    spec = build_family(family, rank)
    w = resolve_twist(family, rank, twist_name)
    T = twist(spec, w, q)
    W_T = rational_weyl_group(T)
    res = count_general_position(T, W_T, threshold)
    cg = character_group(T)
    v = paper_witness(family, rank).witness_vector
    witness_image = [int(x) for x in cg.project(v)]
    reps = [[int(x) for x in y] for y in res.orbit_representatives]
    free = GeneralPositionTester(T, W_T).by_orbit_oracle(v, threshold).in_general_position
    return {
        "family": family,
        "rank": rank,
        "q": q,
        "twist": w.to_json(),
        "torus_order": torus_order(T),
        "moduli": list(res.moduli),
        "wtk_order": W_T.order,
        "count": res.count,
        "orbits": [{"coordinates": y, "lattice_vector": list(cg.lift(y))} for y in reps],
        "witness": list(v),
        "witness_image": witness_image,
        "witness_in_general_position": free,
    }


def cmd_search(cfg: RunConfig) -> int:
    reports = []
    for f in cfg.families:
        for r in valid_ranks(f, cfg.ranks):
            for q in cfg.qs:
                rep = search(f, r, q, cfg.twist, cfg.oracle_threshold)
                reports.append(rep)
                _say(cfg, f"{f} rank {r} q={q}: |T(k)| = {rep['torus_order']}, |W_T(k)| = {rep['wtk_order']}, "
                      f"{rep['count']} in general position ({len(rep['orbits'])} orbits); "
                      f"witness {rep['witness']} -> {rep['witness_image']} "
                      f"{'free' if rep['witness_in_general_position'] else 'NOT free'}")
                for o in rep["orbits"]:
                    _say(cfg, f"    {o['coordinates']}  lifts to {o['lattice_vector']}")
    if cfg.fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(("family", "rank", "q", "torus_order", "wtk_order", "count", "orbits", "witness_in_general_position"))
        for rep in reports:
            writer.writerow((rep["family"], rep["rank"], rep["q"], rep["torus_order"], rep["wtk_order"],
                             rep["count"], len(rep["orbits"]), str(rep["witness_in_general_position"]).lower()))
        _write(cfg.out, buf.getvalue())
    else:
        _write(cfg.out, json.dumps({"schema": SCHEMA, "search": reports}, sort_keys=True, indent=1) + "\n")
    return EXIT_OK


COMMANDS = {"certify": cmd_certify, "classify": cmd_classify, "search": cmd_search}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = make_config(args)
        return COMMANDS[cfg.command](cfg)
    except TooLargeError as exc:
        print(f"cuspcert: threshold exceeded: {exc}", file=sys.stderr)
        return EXIT_TOO_LARGE
    except ValueError as exc:
        print(f"cuspcert: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
