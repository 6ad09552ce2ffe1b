"""Command-line front end: ``jacobsthal {exact,bounds,verify,witness,report,cache}``.

Exit status is 0 on success, 1 when a verification suite finds a failing
check and 2 for usage or input errors.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import os
import sys
import time
from dataclasses import dataclass
from pathlib import Path

from . import analysis
from .bounds import SUITE_NAMES, BoundContext, best_bound, evaluate_suite
from .errors import CapacityError, DomainError, IndeterminateError, JacobsthalError, RadicalParseError
from .exact import crt_witness, g_exact
from .primes import CACHE_ENV, build_prime_table, cache_path, decode_cache
from .radical import parse_radical

log = logging.getLogger("jacobsthal")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
FORMATS = ("human", "csv", "json")
ENV_PREFIX = "JACOBSTHAL_"
CONFIG_ENV = "JACOBSTHAL_CONFIG"


@dataclass
class RunConfig:
    sieve_limit: int = 10**7
    scan_budget: int = 10**10
    threads: int = dataclasses.field(default_factory=lambda: os.cpu_count() or 1)
    cache_dir: str | None = None
    output_format: str = "human"
    full_appendix: bool = False

    def validate(self) -> "RunConfig":
        if self.sieve_limit < 2 or self.scan_budget < 1 or self.threads < 1:
            raise DomainError("sieve_limit, scan_budget and threads must be positive")
        if self.output_format not in FORMATS:
            raise DomainError(f"output_format must be one of {', '.join(FORMATS)}")
        return self

    def to_json(self) -> str:
        return json.dumps(dataclasses.asdict(self), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        return cls(**_coerce_fields(json.loads(text))).validate()


_FIELD_TYPES = {"sieve_limit": int, "scan_budget": int, "threads": int, "cache_dir": str, "output_format": str, "full_appendix": bool}


def _parse_bool(v) -> bool:
    if isinstance(v, bool):
        return v
    return str(v).strip().lower() in ("1", "true", "yes", "on")


def _coerce_fields(raw: dict) -> dict:
    out = {}
    for key, value in raw.items():
        if key not in _FIELD_TYPES:
            raise DomainError(f"unknown config key {key!r}")
        typ = _FIELD_TYPES[key]
        if value is None:
            out[key] = None
        elif typ is bool:
            out[key] = _parse_bool(value)
        elif typ is int:
            out[key] = int(float(value)) if isinstance(value, str) and "e" in value.lower() else int(value)
        else:
            out[key] = typ(value)
    return out


def load_config(args: argparse.Namespace, environ=None) -> RunConfig:
    """Defaults < config file < JACOBSTHAL_* environment < command-line flags."""
    environ = os.environ if environ is None else environ
    merged: dict = {}
    path = getattr(args, "config", None) or environ.get(CONFIG_ENV)
    if path:
        merged.update(json.loads(Path(path).read_text()))
    for key in _FIELD_TYPES:
        env_key = ENV_PREFIX + key.upper()
        if env_key in environ:
            merged[key] = environ[env_key]
    if CACHE_ENV in environ and "cache_dir" not in merged:
        merged["cache_dir"] = environ[CACHE_ENV]
    flags = {
        "sieve_limit": getattr(args, "sieve_limit", None),
        "scan_budget": getattr(args, "scan_budget", None),
        "threads": getattr(args, "threads", None),
        "cache_dir": getattr(args, "cache_dir", None),
        "output_format": getattr(args, "format", None),
        "full_appendix": True if getattr(args, "full", False) else None,
    }
    merged.update({k: v for k, v in flags.items() if v is not None})
    return RunConfig(**_coerce_fields(merged)).validate()


# ---------------------------------------------------------------------------
# rendering


def _emit(text: str, out=None) -> None:
    (out or sys.stdout).write(text if text.endswith("\n") else text + "\n")


def _render_rows_human(rows) -> str:
    lines = [f"{'input':<14} {'bound':<20} {'value':>18}  notes"]
    for label, rep in rows:
        value = rep.value.render() if rep.value else "-"
        notes = rep.reason if not rep.applicable else ("bound on L" if rep.target == "L" else "")
        if rep.advisory is not None:
            notes += f" (advisory {rep.advisory.render()})"
        lines.append(f"{label:<14} {rep.name:<20} {value:>18}  {notes}".rstrip())
    return "\n".join(lines)


def _render_rows(rows, fmt: str) -> str:
    if fmt == "csv":
        return analysis.table_to_csv(rows)
    if fmt == "json":
        return analysis.table_to_json(rows)
    return _render_rows_human(rows)


def _fmt_flag(args, cfg: RunConfig) -> str:
    if getattr(args, "json", False):
        return "json"
    if getattr(args, "csv", False):
        return "csv"
    return cfg.output_format


# ---------------------------------------------------------------------------
# subcommands


def cmd_exact(args, cfg: RunConfig) -> int:
    rad = parse_radical(args.radical)
    res = g_exact(rad, budget=cfg.scan_budget, threads=cfg.threads)
    fmt = _fmt_flag(args, cfg)
    payload = {"radical": list(rad.primes), "n": rad.n, **dataclasses.asdict(res)}
    if fmt == "json":
        _emit(json.dumps(payload, sort_keys=True))
    elif fmt == "csv":
        _emit("radical,n,g,L,a,b,witness_start\n" + f"\"{','.join(map(str, rad.primes))}\",{rad.n},{res.g},{res.L},{res.a},{res.b},{res.witness_start}")
    else:
        _emit(
            f"n = {rad.n}  (primes {rad})\n"
            f"g = {res.g}\nL = {res.L}\na = {res.a}\nb = {res.b}\n"
            f"witness: {res.witness_start + 1}..{res.witness_start + res.L} all share a prime with n"
        )
    return EXIT_OK


def _which(args) -> list[str] | None:
    if not getattr(args, "which", None):
        return None
    names = [w.strip() for w in args.which.split(",") if w.strip()]
    unknown = [w for w in names if w not in SUITE_NAMES and w != "exact"]
    if unknown:
        raise DomainError(f"unknown bound(s): {', '.join(unknown)}")
    return names


def cmd_bounds(args, cfg: RunConfig) -> int:
    rad = parse_radical(args.radical)
    ctx = BoundContext(exact_budget=cfg.scan_budget, threads=cfg.threads)
    names = _which(args)
    if names is None:
        names = list(SUITE_NAMES) + ["exact"]
    label = str(rad) if rad.k <= 8 else args.radical
    rows = [(label, r) for r in evaluate_suite(rad, names, ctx)]
    fmt = _fmt_flag(args, cfg)
    _emit(_render_rows(rows, fmt))
    if fmt == "human" and set(SUITE_NAMES) <= set(names):
        best = best_bound(rad, ctx, include_exact="exact" in names)
        _emit(f"best: {best.name} = {best.g_value().render()}")
    return EXIT_OK


def cmd_witness(args, cfg: RunConfig) -> int:
    rad = parse_radical(args.radical)
    perm = None
    if args.perm:
        try:
            perm = [int(v) for v in args.perm.split(",")]
        except ValueError:
            raise DomainError(f"cannot parse permutation {args.perm!r}") from None
    w = crt_witness(rad, perm)
    ok = w.validate() if w.length <= 10**6 else None
    fmt = _fmt_flag(args, cfg)
    if fmt == "json":
        _emit(json.dumps({"start": w.start, "length": w.length, "n": w.n, "assignment": {str(k): v for k, v in w.moduli_assignment.items()}, "valid": ok}, sort_keys=True))
    else:
        pairs = ", ".join(f"{q} | b+{v}" for q, v in w.moduli_assignment.items())
        _emit(f"start b = {w.start}\ninterval {w.start + 1}..{w.start + w.length}\n{pairs}\ngcd check: {'ok' if ok else ok}")
    return EXIT_OK if ok is not False else EXIT_FAIL


def parse_k_range(text: str) -> list[int]:
    """``"1..9"``, ``"3"`` or ``"2,5,7"``."""
    text = text.strip()
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            ks = list(range(int(a), int(b) + 1))
        else:
            ks = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise DomainError(f"cannot parse k range {text!r}") from None
    if not ks:
        raise DomainError(f"empty k range {text!r}")
    if min(ks) < 1:
        raise DomainError("k must be at least 1")
    return ks


def cmd_report(args, cfg: RunConfig) -> int:
    ks = parse_k_range(args.k)
    ctx = BoundContext(exact_budget=cfg.scan_budget, threads=cfg.threads)
    rows = analysis.bound_table(ks, _which(args), ctx)
    fmt = _fmt_flag(args, cfg)
    text = _render_rows(rows, fmt)
    if args.output:
        Path(args.output).write_text(text if text.endswith("\n") else text + "\n")
    else:
        _emit(text)
    return EXIT_OK


def _print_checks(checks, fmt: str) -> int:
    if fmt == "json":
        _emit(json.dumps([dataclasses.asdict(c) for c in checks], indent=1))
    else:
        for c in checks:
            _emit(f"[{'PASS' if c.passed else 'FAIL'}] {c.name}" + (f"  ({c.detail})" if c.detail else ""))
    failed = [c.name for c in checks if not c.passed]
    if failed:
        sys.stderr.write(f"{len(failed)} check(s) failed: {'; '.join(failed)}\n")
        return EXIT_FAIL
    return EXIT_OK


def cmd_verify(args, cfg: RunConfig) -> int:
    t0 = time.perf_counter()
    if args.suite == "appendix":
        checks = analysis.appendix_checks(full=cfg.full_appendix)
    elif args.suite == "crossovers":
        checks = analysis.crossover_checks()
    else:
        limit = args.limit or (10**6 if cfg.full_appendix else 10**5)
        res = analysis.soundness_sweep(limit, threads=cfg.threads)
        detail = f"{res.checked} radicals, {res.evaluations} bound evaluations, violations {res.violations[:10]}"
        checks = [analysis.Check(f"every applicable bound >= g for squarefree n <= {limit} and P_1..P_9", res.passed, detail)]
    log.info("verify %s finished in %.1fs", args.suite, time.perf_counter() - t0)
    return _print_checks(checks, _fmt_flag(args, cfg))


def cmd_cache(args, cfg: RunConfig) -> int:
    cdir = Path(cfg.cache_dir) if cfg.cache_dir else None
    if args.action == "build":
        if cdir is None:
            raise DomainError(f"no cache directory: pass --cache-dir or set {CACHE_ENV}")
        t0 = time.perf_counter()
        table = build_prime_table(cfg.sieve_limit, threads=cfg.threads, cache_dir=cdir)
        _emit(f"{table.count} primes up to {table.limit} -> {cache_path(cdir, cfg.sieve_limit)} ({time.perf_counter() - t0:.1f}s)")
        return EXIT_OK
    if cdir is None or not cdir.is_dir():
        _emit("no cache directory")
        return EXIT_OK
    status = EXIT_OK
    for p in sorted(cdir.glob("primes_*.bin")):
        try:
            limit, primes = decode_cache(p.read_bytes())
            _emit(f"{p.name}: limit {limit}, {len(primes)} primes, largest {int(primes[-1]) if len(primes) else '-'}, checksum ok")
        except (OSError, ValueError) as exc:
            _emit(f"{p.name}: unreadable ({exc})")
            status = EXIT_FAIL
    return status


# ---------------------------------------------------------------------------


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--sieve-limit", type=lambda s: int(float(s)), help="prime table bound (default 1e7)")
    p.add_argument("--scan-budget", type=lambda s: int(float(s)), help="largest n scanned exactly (default 1e10)")
    p.add_argument("--threads", type=int, help="worker threads (default: all cores)")
    p.add_argument("--format", choices=FORMATS, help="output format")
    p.add_argument("--cache-dir", help="prime cache directory")
    p.add_argument("--config", help="JSON config file")
    p.add_argument("--json", action="store_true", help="shorthand for --format json")
    p.add_argument("--csv", action="store_true", help="shorthand for --format csv")
    p.add_argument("-v", "--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="jacobsthal", description="Jacobsthal's function: exact values, bounds and checks.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("exact", help="scan a full period for g, L, a, b")
    p.add_argument("radical", help='"2,3,5", "P6" or a squarefree integer')
    _common(p)
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("bounds", help="evaluate the bound suite on one radical")
    p.add_argument("radical")
    p.add_argument("--which", help="comma-separated bound names")
    _common(p)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("verify", help="run a check suite")
    p.add_argument("suite", choices=("appendix", "soundness", "crossovers"))
    p.add_argument("--full", action="store_true", help="full-scale ranges (sieve to ~1.01e8)")
    p.add_argument("--limit", type=lambda s: int(float(s)), help="soundness sweep bound on n")
    _common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("witness", help="CRT start of k consecutive nontotatives")
    p.add_argument("radical")
    p.add_argument("--perm", help="permutation of 1..k assigning offsets to primes")
    _common(p)
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("report", help="bound table over primorials P_k")
    p.add_argument("--k", required=True, help='"1..9", "5" or "2,3,7"')
    p.add_argument("--which", help="comma-separated bound names")
    p.add_argument("-o", "--output", help="write to a file instead of stdout")
    _common(p)
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("cache", help="build or inspect the prime cache")
    p.add_argument("action", choices=("build", "inspect"))
    _common(p)
    p.set_defaults(func=cmd_cache)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        cfg = load_config(args)
        if cfg.cache_dir:
            os.environ[CACHE_ENV] = cfg.cache_dir
        return args.func(args, cfg)
    except (RadicalParseError, DomainError, CapacityError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except IndeterminateError as exc:
        sys.stderr.write(f"indeterminate: {exc}\n")
        return EXIT_FAIL
    except (JacobsthalError, OSError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
