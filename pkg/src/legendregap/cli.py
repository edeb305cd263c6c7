"""Command line front end.

Subcommands: verify (sweep the identity over a range of n), breakdown
(print every signed carry term at one n), series (emit per-n rows as text,
csv, or json), selftest (run the built-in cross-checks).

Exit status: 0 on success, 1 when a mathematical check fails, 2 on bad
usage or I/O trouble.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass

from .carrysum import ConsistencyError, carry_breakdown
from .identity import (
    DEFAULT_SHADOW_THRESHOLD,
    ENGINES,
    evaluate_identity,
    series,
    verify_range,
)
from .primes import sieve_primes
from .selftest import run_selftest

FORMATS = ("text", "csv", "json")


@dataclass
class RunConfig:
    command: str
    lo: int = 1
    hi: int = 100
    n: int = 6
    engine: str = "sieve"
    fmt: str = "text"
    out: str | None = None
    workers: int | None = None
    naive_threshold: int = DEFAULT_SHADOW_THRESHOLD
    verbose: bool = False
    quick: bool = False
    inject_fault: bool = False

    def validate(self) -> None:
        if self.command in ("verify", "series"):
            if self.lo < 1:
                raise ValueError(f"--from must be >= 1, got {self.lo}")
            if self.hi < self.lo:
                raise ValueError(
                    f"--to must be >= --from, got [{self.lo}, {self.hi}]"
                )
        if self.command == "breakdown" and self.n < 1:
            raise ValueError(f"--n must be >= 1, got {self.n}")
        if self.engine not in ENGINES:
            raise ValueError(f"unknown engine {self.engine!r}")
        if self.fmt not in FORMATS:
            raise ValueError(f"unknown format {self.fmt!r}")
        if not 0 <= self.naive_threshold <= 20:
            raise ValueError(
                f"--naive-threshold must be in [0, 20], got {self.naive_threshold}"
            )
        if self.workers is not None and self.workers < 1:
            raise ValueError(f"--workers must be >= 1, got {self.workers}")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="legendregap",
        description="Verify the exact identity tying the prime count between "
        "consecutive squares to the count on (n, 2n] and a signed carry sum.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser, with_engine: bool = True) -> None:
        if with_engine:
            p.add_argument(
                "--engine",
                choices=ENGINES,
                default="sieve",
                help="prime counting route (default: sieve)",
            )
        p.add_argument(
            "--format",
            dest="fmt",
            choices=FORMATS,
            default="text",
            help="output format (default: text)",
        )
        p.add_argument("--out", default=None, help="write output to this file")
        p.add_argument(
            "--naive-threshold",
            type=int,
            default=DEFAULT_SHADOW_THRESHOLD,
            metavar="K",
            help="cross-check the carry walk against the 2^a subset sum "
            "while pi(n) <= K (default: %(default)s, max 20)",
        )
        p.add_argument(
            "-v", "--verbose", action="store_true", help="print per-n records"
        )

    p_verify = sub.add_parser("verify", help="check the identity over a range")
    p_verify.add_argument("--from", dest="lo", type=int, default=1, metavar="N")
    p_verify.add_argument("--to", dest="hi", type=int, default=100, metavar="N")
    p_verify.add_argument(
        "--workers",
        type=int,
        default=None,
        help="process count for the sweep (default: LEGENDREGAP_WORKERS "
        "or one per CPU on large ranges)",
    )
    add_common(p_verify)

    p_break = sub.add_parser(
        "breakdown", help="print every signed carry term at one n"
    )
    p_break.add_argument("--n", type=int, required=True)
    add_common(p_break, with_engine=False)

    p_series = sub.add_parser(
        "series", help="emit per-n gap, interval count, and carry sum"
    )
    p_series.add_argument("--from", dest="lo", type=int, default=1, metavar="N")
    p_series.add_argument("--to", dest="hi", type=int, default=100, metavar="N")
    p_series.add_argument(
        "--workers", type=int, default=None, help=argparse.SUPPRESS
    )
    add_common(p_series)

    p_self = sub.add_parser("selftest", help="run the built-in cross-checks")
    p_self.add_argument(
        "--quick", action="store_true", help="smaller bounds, a few seconds"
    )
    p_self.add_argument(
        "--inject-fault", action="store_true", help=argparse.SUPPRESS
    )
    p_self.add_argument("-v", "--verbose", action="store_true")
    return parser


def _config_from_args(argv: list[str] | None) -> RunConfig:
    ns = _build_parser().parse_args(argv)
    cfg = RunConfig(command=ns.command)
    for field in (
        "lo",
        "hi",
        "n",
        "engine",
        "fmt",
        "out",
        "workers",
        "verbose",
        "quick",
        "inject_fault",
    ):
        if hasattr(ns, field):
            setattr(cfg, field, getattr(ns, field))
    if hasattr(ns, "naive_threshold"):
        cfg.naive_threshold = ns.naive_threshold
    cfg.validate()
    return cfg


def _record_line(r) -> str:
    holds = "true" if r.holds else "false"
    return (
        f"n={r.n} engine={r.oracle_path} pi_n2={r.pi_n2} pi_next2={r.pi_next2} "
        f"pi_n={r.pi_n} pi_2n={r.pi_2n} phi_T={r.phi_t} lhs={r.lhs} "
        f"rhs={r.rhs} holds={holds}"
    )


def _run_verify(cfg: RunConfig, out) -> int:
    summary = verify_range(
        cfg.lo,
        cfg.hi,
        engine=cfg.engine,
        workers=cfg.workers,
        shadow_threshold=cfg.naive_threshold,
    )
    if cfg.fmt == "json":
        doc = {
            "from": summary.lo,
            "to": summary.hi,
            "engine": summary.engine,
            "checked": summary.checked,
            "failures": len(summary.failures),
            "elapsed": round(summary.elapsed, 3),
            "max_terms": summary.max_terms,
            "max_terms_n": summary.max_terms_n,
        }
        if cfg.verbose:
            doc["records"] = [
                {
                    "n": r.n,
                    "engine": r.oracle_path,
                    "pi_n2": r.pi_n2,
                    "pi_next2": r.pi_next2,
                    "pi_n": r.pi_n,
                    "pi_2n": r.pi_2n,
                    "phi_t": r.phi_t,
                    "lhs": r.lhs,
                    "rhs": r.rhs,
                    "holds": r.holds,
                }
                for r in summary.records
            ]
        json.dump(doc, out, indent=2)
        out.write("\n")
    else:
        if cfg.verbose:
            for r in summary.records:
                out.write(_record_line(r) + "\n")
        for r in summary.failures:
            out.write("FAIL " + _record_line(r) + "\n")
        out.write(
            f"checked={summary.checked} failures={len(summary.failures)} "
            f"elapsed={summary.elapsed:.3f}\n"
        )
    return 1 if summary.failures else 0


def _fmt_neg(v: int) -> str:
    return f"({v})" if v < 0 else f"{v}"


def _run_breakdown(cfg: RunConfig, out) -> int:
    n = cfg.n
    table = sieve_primes((n + 1) ** 2)
    bd = carry_breakdown(n, table)
    rec = evaluate_identity(
        n, engine="sieve", table=table, shadow_threshold=cfg.naive_threshold
    )
    if cfg.fmt == "json":
        doc = {
            "n": n,
            "m1": bd.m1,
            "m2": bd.m2,
            "phi_t": bd.total,
            "terms": [
                {
                    "beta": e.term.beta,
                    "factors": list(e.term.factors),
                    "k": e.term.k,
                    "r1": e.r1,
                    "r2": e.r2,
                    "carry": e.carry,
                    "signed": e.signed,
                }
                for e in bd.terms
            ],
        }
        json.dump(doc, out, indent=2)
        out.write("\n")
        return 0
    if cfg.fmt == "csv":
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["beta", "k", "r1", "r2", "carry", "signed"])
        for e in bd.terms:
            writer.writerow(
                [e.term.beta, e.term.k, e.r1, e.r2, e.carry, e.signed]
            )
        return 0
    for e in bd.terms:
        sign = "+" if e.term.sign == 1 else "-"
        out.write(
            f"beta={e.term.beta} r1={e.r1} r2={e.r2} carry={e.carry} sign={sign}\n"
        )
    out.write(f"phi_T={bd.total}\n")
    out.write(
        f"pi({(n + 1) ** 2}) - pi({n * n}) = pi({2 * n}) - pi({n}) + 1 - phi_T\n"
    )
    out.write(
        f"{rec.pi_next2} - {rec.pi_n2} = {rec.pi_2n} - {rec.pi_n} + 1 "
        f"- {_fmt_neg(bd.total)}\n"
    )
    out.write(f"{rec.lhs} = {rec.rhs}\n")
    return 0 if rec.holds else 1


def _run_series(cfg: RunConfig, out) -> int:
    points = series(
        cfg.lo,
        cfg.hi,
        engine=cfg.engine,
        workers=cfg.workers,
        shadow_threshold=cfg.naive_threshold,
    )
    if cfg.fmt == "csv":
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["n", "legendre_gap", "bertrand_count", "phi_t"])
        for p in points:
            writer.writerow([p.n, p.legendre_gap, p.bertrand_count, p.phi_t])
    elif cfg.fmt == "json":
        doc = [
            {
                "n": p.n,
                "legendre_gap": p.legendre_gap,
                "bertrand_count": p.bertrand_count,
                "phi_t": p.phi_t,
            }
            for p in points
        ]
        json.dump(doc, out, indent=2)
        out.write("\n")
    else:
        for p in points:
            out.write(
                f"n={p.n} legendre_gap={p.legendre_gap} "
                f"bertrand_count={p.bertrand_count} phi_t={p.phi_t}\n"
            )
    return 0


def main(argv: list[str] | None = None) -> int:
    try:
        cfg = _config_from_args(argv)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        if cfg.command == "selftest":
            ok = run_selftest(
                quick=cfg.quick,
                verbose=cfg.verbose,
                inject_fault=cfg.inject_fault,
                out=sys.stdout,
            )
            return 0 if ok else 1
        if cfg.out is not None:
            with open(cfg.out, "w", encoding="utf-8", newline="") as fh:
                return _dispatch(cfg, fh)
        return _dispatch(cfg, sys.stdout)
    except ConsistencyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def _dispatch(cfg: RunConfig, out) -> int:
    if cfg.command == "verify":
        return _run_verify(cfg, out)
    if cfg.command == "breakdown":
        return _run_breakdown(cfg, out)
    if cfg.command == "series":
        return _run_series(cfg, out)
    raise ValueError(f"unknown command {cfg.command!r}")


if __name__ == "__main__":
    raise SystemExit(main())
