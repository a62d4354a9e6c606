"""Command-line entry point.

stdout only ever carries JSON (or a raw certificate); prose goes to stderr.
Exit codes: 0 success or Valid, 1 Invalid or a negative result, 2 usage or
internal error.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from typing import Sequence

from . import certificate as cert_mod
from . import embeddings as emb
from . import exactmath as em
from .family import Family, InadmissibleParameter, check_admissible, is_admissible, pnr_poly, script_P
from .identities import identity_suite
from .search import (
    BoundExhausted, PrimeInadmissible, SearchConfig, SearchExhausted, find_bauer_prime,
    parse_conditions, read_config_file, run_search,
)

log = logging.getLogger("classforge")

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, sort_keys=True, ensure_ascii=False) + "\n")


def _jobs(value: int | None) -> int:
    if value is not None:
        return value
    raw = os.environ.get("CLASSFORGE_JOBS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise UsageError(f"CLASSFORGE_JOBS must be an integer, got {raw!r}") from None


def _poly_json(f) -> dict:
    return {"coefficients": [em.int_to_decimal(int(c)) for c in f.coeffs], "text": str(f)}


def _family_arg(s: str) -> Family:
    try:
        return Family.parse(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"unknown family {s!r}") from None


# ---------------------------------------------------------------------------
# subcommands

def cmd_search(args) -> int:
    cfg = {}
    if args.config:
        raw = read_config_file(args.config)
        SearchConfig.from_mapping(raw)          # validates keys and values
        cfg = {k: int(v) for k, v in raw.items()}
    for key in ("scan_bound", "m_max", "factor_budget", "jobs"):
        if getattr(args, key) is not None:
            cfg[key] = getattr(args, key)
    if "jobs" not in cfg:
        cfg["jobs"] = _jobs(None)
    config = SearchConfig(**cfg)
    try:
        cert = run_search(args.family, args.r, config, args.q)
    except (SearchExhausted, BoundExhausted) as exc:
        log.error("search failed: %s", exc)
        return EXIT_NEGATIVE
    data = cert_mod.serialize(cert)
    if args.out:
        with open(args.out, "wb") as fh:
            fh.write(data + b"\n")
        log.info("certificate written to %s", args.out)
    else:
        sys.stdout.buffer.write(data + b"\n")
        sys.stdout.flush()
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.file == "-":
        raw = sys.stdin.buffer.read()
    else:
        with open(args.file, "rb") as fh:
            raw = fh.read()
    try:
        cert = cert_mod.parse(raw)
    except cert_mod.MalformedCertificate as exc:
        _emit({"verdict": "Malformed", "reason": str(exc), "checks": []})
        return EXIT_NEGATIVE
    v = cert_mod.verify_certificate(cert)
    _emit({
        "verdict": "Valid" if v else "Invalid",
        "reason": v.reason,
        "checks": list(v.checks),
        "family": cert.family.value,
        "r": cert.r,
        "n_digits": len(em.int_to_decimal(abs(cert.n))),
    })
    if not v:
        log.error("certificate rejected: %s", v.reason)
    return EXIT_OK if v else EXIT_NEGATIVE


def cmd_identities(args) -> int:
    records = identity_suite(args.family)
    for rec in records:
        if not rec["ok"]:
            log.error("%s: %s failed (%s)", rec["family"], rec["name"], rec["detail"])
    ok = all(rec["ok"] for rec in records)
    _emit({"ok": ok, "checks": records})
    return EXIT_OK if ok else EXIT_NEGATIVE


def _quartic_record(n: int, budget: int) -> dict:
    try:
        return {"n": n, "certified": emb.quartic_regulator_positive(n, budget), "claim": "R > 0"}
    except emb.PrecisionExhausted as exc:
        return {"n": n, "certified": False, "claim": "R > 0", "reason": str(exc)}


def _cubic_record(n: int, budget: int) -> dict:
    try:
        return {"n": n, "certified": emb.cubic_independence_check(n, budget), "claim": "R != 0"}
    except emb.PrecisionExhausted as exc:
        return {"n": n, "certified": False, "claim": "R != 0", "reason": str(exc)}


def cmd_scan_regulator(args) -> int:
    fam = args.family
    ns = [n for n in range(args.n_min, args.n_max) if is_admissible(fam, n)]
    if not ns:
        raise UsageError("no admissible n in the requested range")
    if fam is Family.SEXTIC:
        records = emb.sextic_independence_scan(ns, args.precision_budget, _jobs(args.jobs))
    elif fam is Family.QUARTIC:
        records = [_quartic_record(n, args.precision_budget) for n in ns]
    else:
        records = [_cubic_record(n, args.precision_budget) for n in ns]
    failed = [r["n"] for r in records if not r["certified"]]
    if failed:
        log.error("not certified for n in %s", failed)
    _emit({"family": fam.value, "count": len(records), "all_certified": not failed, "records": records})
    return EXIT_OK if not failed else EXIT_NEGATIVE


def cmd_emit_pnr(args) -> int:
    check_admissible(args.family, args.n)
    f = pnr_poly(args.family, args.n, args.r)
    _emit({"family": args.family.value, "n": args.n, "r": args.r, **_poly_json(f)})
    return EXIT_OK


def cmd_script_p(args) -> int:
    f = script_P(args.family, args.r)
    _emit({"family": args.family.value, "r": args.r, **_poly_json(f)})
    return EXIT_OK


def cmd_find_primes(args) -> int:
    conds = parse_conditions(args.cond)
    avoid = {int(a) for a in args.avoid.split(",") if a.strip()} if args.avoid else set()
    found, floor = [], args.floor
    try:
        for _ in range(args.count):
            w = find_bauer_prime(args.p, conds, avoid, args.bound, floor)
            found.append({"p": w.p, "ell": w.ell,
                          "transcript": {str(b): s.value for b, s in w.transcript}})
            floor = w.ell
    except BoundExhausted as exc:
        log.error("%s", exc)
        _emit({"p": args.p, "conditions": args.cond, "primes": found, "exhausted": True})
        return EXIT_NEGATIVE
    _emit({"p": args.p, "conditions": args.cond, "primes": found, "exhausted": False})
    return EXIT_OK


# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="classforge", description="Certificates for ideal classes of prescribed order.")
    p.add_argument("-v", "--verbose", action="store_true", help="progress messages on stderr")
    # also accepted after the subcommand; SUPPRESS keeps the top-level value otherwise
    common = _Parser(add_help=False)
    common.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, **kw):
        return sub.add_parser(name, parents=[common], **kw)

    s = add("search", help="search for a certificate")
    s.add_argument("--family", type=_family_arg, required=True)
    s.add_argument("--r", type=int, required=True)
    s.add_argument("--q", type=int, help="ramified prime (cyclic families)")
    s.add_argument("--config", help="key = value file with SearchConfig fields; flags override it")
    s.add_argument("--out", help="write the certificate here instead of stdout")
    s.add_argument("--jobs", type=int, help="worker processes (default $CLASSFORGE_JOBS or 1)")
    s.add_argument("--scan-bound", type=int)
    s.add_argument("--m-max", type=int)
    s.add_argument("--factor-budget", type=int)
    s.set_defaults(func=cmd_search)

    v = add("verify", help="re-verify a certificate file ('-' for stdin)")
    v.add_argument("file")
    v.set_defaults(func=cmd_verify)

    i = add("identities", help="run the symbolic identity suite")
    i.add_argument("--family", type=_family_arg)
    i.set_defaults(func=cmd_identities)

    r = add("scan-regulator", help="interval-certified regulator scan over n_min <= n < n_max")
    r.add_argument("--family", type=_family_arg, required=True)
    r.add_argument("--n-max", type=int, required=True)
    r.add_argument("--n-min", type=int, default=1)
    r.add_argument("--precision-budget", type=int, default=1024)
    r.add_argument("--jobs", type=int)
    r.set_defaults(func=cmd_scan_regulator)

    e = add("emit-pnr", help="print p_{n,r}")
    e.add_argument("--family", type=_family_arg, required=True)
    e.add_argument("--n", type=int, required=True)
    e.add_argument("--r", type=int, required=True)
    e.set_defaults(func=cmd_emit_pnr)

    sp = add("script-p", help="print the quadratic-in-X^r polynomial behind the ramified variant")
    sp.add_argument("--family", type=_family_arg, required=True)
    sp.add_argument("--r", type=int, required=True)
    sp.set_defaults(func=cmd_script_p)

    f = add("find-primes", help="primes ell = 1 mod p realising a symbol pattern")
    f.add_argument("--p", type=int, required=True)
    f.add_argument("--cond", required=True, help="e.g. 2:R,3:N")
    f.add_argument("--avoid", help="comma-separated primes to skip")
    f.add_argument("--bound", type=int, default=1_000_000)
    f.add_argument("--floor", type=int, default=0)
    f.add_argument("--count", type=int, default=1)
    f.set_defaults(func=cmd_find_primes)
    return p


def dispatch(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:      # --help
        return EXIT_OK if not exc.code else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except (UsageError, InadmissibleParameter, PrimeInadmissible, ValueError, OSError) as exc:
        print(f"classforge {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:       # internal error: keep stdout clean
        print(f"classforge {args.command}: internal error: {exc!r}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(dispatch())
