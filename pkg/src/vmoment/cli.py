"""Command-line interface: one subcommand per operation family.

Configuration precedence: command-line flags, then an optional key=value
config file, then defaults.  Every report echoes the resolved config so a
run can be reproduced from its own output; two runs with identical config
produce byte-identical output except for the wall-time field.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from dataclasses import asdict, dataclass
from fractions import Fraction

from .constants import constants as math_constants
from .coefficients import coefficient_kind, error_term_kind, ErrorTermKind
from .errors import RangeError, ResourceError, VmomentError
from .error_terms import error_term, voronoi_truncated
from .moments import (QuadratureSpec, integrate_moment,
                      integrate_truncated_moment)
from .relations import (brute_force_enumerate, count_inequality_solutions,
                        count_bound_value, enumerate_relations, min_gap,
                        parity_check)
from .series import bk, exponent_book, main_term_coefficient, series_skl
from .tables import ArithTable, build_tables, load_cache, save_cache
from .verify import SUITE_TABLE_NEEDS, SUITES, run_suite

__version__ = "0.1.0"

ENV_CACHE = "VM_TABLE_CACHE"


@dataclass
class RunConfig:
    table_limit: int = 0        # 0 = size to the command's needs
    tau_limit: int = 0          # 0 = size to the command's needs
    table_cache: str | None = None
    y: float = 1e5
    chunk: int = 1 << 16
    quad_order: int = 8
    format: str = "json"
    threads: int = 0

    def spec(self) -> QuadratureSpec:
        return QuadratureSpec(order=self.quad_order, chunk_intervals=self.chunk,
                              workers=self.threads)


_CONFIG_FIELDS = {f: t for f, t in RunConfig.__annotations__.items()}


def _parse_config_file(path: str) -> dict:
    out = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key = value")
            key, val = (part.strip() for part in line.split("=", 1))
            key = key.replace("-", "_")
            if key not in _CONFIG_FIELDS:
                raise ValueError(f"{path}:{lineno}: unknown config key {key!r}")
            out[key] = val
    return out


def _coerce(key: str, val):
    if val is None:
        return None
    target = _CONFIG_FIELDS[key]
    if target.startswith("int"):
        return int(val)
    if target.startswith("float"):
        return float(val)
    return str(val)


def resolve_config(args: argparse.Namespace) -> RunConfig:
    file_vals = _parse_config_file(args.config) if getattr(args, "config", None) else {}
    cfg = RunConfig()
    for key in _CONFIG_FIELDS:
        flag = getattr(args, key, None)
        if flag is not None:
            setattr(cfg, key, _coerce(key, flag))
        elif key in file_vals:
            setattr(cfg, key, _coerce(key, file_vals[key]))
    if cfg.table_cache is None:
        cfg.table_cache = os.environ.get(ENV_CACHE) or None
    if cfg.format not in ("json", "csv"):
        raise ValueError(f"format must be json or csv, got {cfg.format!r}")
    return cfg


# ---------------------------------------------------------------------------
# table acquisition


def acquire_table(cfg: RunConfig, need_limit: int, need_tau: int) -> ArithTable:
    limit = max(int(need_limit), cfg.table_limit, 1)
    tau_limit = min(max(int(need_tau), cfg.tau_limit), limit)
    if cfg.table_cache and os.path.exists(cfg.table_cache):
        table = load_cache(cfg.table_cache)
        if table.limit >= limit and table.tau_limit >= tau_limit:
            return table
    table = build_tables(limit, tau_limit)
    if cfg.table_cache:
        try:
            save_cache(table, cfg.table_cache)
        except ResourceError as exc:
            print(f"warning: not caching table: {exc}", file=sys.stderr)
    return table


# ---------------------------------------------------------------------------
# report plumbing


def _flatten(prefix: str, obj, rows: list[tuple[str, str]]) -> None:
    if isinstance(obj, dict):
        for key, val in obj.items():
            _flatten(f"{prefix}.{key}" if prefix else str(key), val, rows)
    elif isinstance(obj, (list, tuple)):
        for i, val in enumerate(obj):
            _flatten(f"{prefix}[{i}]", val, rows)
    else:
        rows.append((prefix, "" if obj is None else repr(obj)
                     if isinstance(obj, str) else json.dumps(obj)))


def emit_report(command: str, cfg: RunConfig, result: dict,
                table: ArithTable | None, started: float) -> None:
    report = {
        "command": command,
        "version": __version__,
        "config": asdict(cfg),
        "table": None if table is None else
        {"limit": table.limit, "tau_limit": table.tau_limit},
        "result": result,
        "wall_time_s": round(time.time() - started, 6),
    }
    if cfg.format == "json":
        print(json.dumps(report, indent=2))
    else:
        rows: list[tuple[str, str]] = []
        _flatten("", report, rows)
        print("key,value")
        for key, val in rows:
            print(f"{key},{val}")


# ---------------------------------------------------------------------------
# subcommand handlers


def cmd_sieve(args, cfg: RunConfig) -> int:
    started = time.time()
    table = acquire_table(cfg, args.limit, args.tau_limit
                          if args.tau_limit is not None else 0)
    result = {
        "limit": table.limit,
        "tau_limit": table.tau_limit,
        "divisor_sum_at_limit": int(table.d.sum()),
        "constants": math_constants(),
    }
    emit_report("sieve", cfg, result, table, started)
    return 0


def cmd_error_term(args, cfg: RunConfig) -> int:
    started = time.time()
    kind = error_term_kind(args.kind)
    x = float(args.x)
    need = math.ceil(4 * x) if kind is ErrorTermKind.ALTERNATING else math.ceil(x)
    need_tau = math.ceil(x) if kind is ErrorTermKind.CUSP else 0
    y = args.y
    if y is not None:
        coeff = kind.coefficient_kind
        if coeff.tag == "cusp":
            need_tau = max(need_tau, math.ceil(y))
        else:
            need = max(need, math.ceil(y))
    table = acquire_table(cfg, need, need_tau)
    exact = error_term(table, kind, x)
    result = {"kind": kind.value, "x": x, "exact": exact}
    if y is not None:
        truncated = voronoi_truncated(table, kind.coefficient_kind, x, float(y))
        result.update(y=float(y), truncated=truncated,
                      difference=exact - truncated)
    emit_report("error-term", cfg, result, table, started)
    return 0


def cmd_relations(args, cfg: RunConfig) -> int:
    started = time.time()
    if args.relations_cmd == "enumerate":
        gen = brute_force_enumerate if args.brute else enumerate_relations
        rels = list(gen(args.k, args.l, float(args.y)))
        if cfg.format == "csv":
            header = ",".join(f"n{i + 1}" for i in range(args.k))
            print(f"{header},kernels,parity")
            for rel in rels:
                kern = ";".join(f"{h}:{'+'.join(map(str, ss))}"
                                for h, ss in sorted(rel.kernel_classes().items()))
                print(",".join(map(str, rel.numbers))
                      + f",{kern},{'even' if parity_check(rel) else 'odd'}")
            return 0
        result = {
            "k": args.k, "l": args.l, "y": float(args.y),
            "count": len(rels),
            "relations": [
                {"numbers": list(r.numbers),
                 "kernels": {str(h): ss for h, ss in sorted(r.kernel_classes().items())},
                 "parity": "even" if parity_check(r) else "odd"}
                for r in rels],
        }
        emit_report("relations.enumerate", cfg, result, None, started)
        return 0
    if args.relations_cmd == "gap":
        pattern = tuple(int(c) for c in args.pattern)
        res = min_gap(args.k, pattern, args.N)
        result = {"k": args.k, "pattern": args.pattern, "N": args.N,
                  "alpha_min": res["alpha_min"],
                  "witness": list(res["witness"]),
                  "certified_digits": res["certified_digits"]}
        emit_report("relations.gap", cfg, result, None, started)
        return 0
    ranges = tuple(int(v) for v in args.N.split(","))
    pattern = tuple(int(c) for c in args.pattern)
    cnt = count_inequality_solutions(ranges, pattern, args.delta)
    result = {"ranges": list(ranges), "pattern": args.pattern,
              "delta": args.delta, "count": cnt,
              "envelope": count_bound_value(ranges, args.delta)}
    emit_report("relations.count", cfg, result, None, started)
    return 0


def _series_table(cfg: RunConfig, kind_name: str, y: float) -> ArithTable:
    kind = coefficient_kind(kind_name)
    if kind.tag == "cusp":
        return acquire_table(cfg, math.ceil(y), math.ceil(y))
    return acquire_table(cfg, math.ceil(y), 0)


def cmd_series(args, cfg: RunConfig) -> int:
    started = time.time()
    y = float(args.y if args.y is not None else cfg.y)
    table = _series_table(cfg, args.kind, y)
    kind = coefficient_kind(args.kind)
    est = series_skl(table, kind, args.k, args.l, y)
    result = {"kind": args.kind, "k": args.k, "l": args.l, "y": y,
              "value": est.value, "tail_estimate": est.tail_estimate,
              "extrapolated": est.extrapolated}
    emit_report("series", cfg, result, table, started)
    return 0


def cmd_bk(args, cfg: RunConfig) -> int:
    started = time.time()
    y = float(args.y if args.y is not None else cfg.y)
    table = _series_table(cfg, args.kind, y)
    kind = coefficient_kind(args.kind)
    val = bk(table, kind, args.k, y)
    result = {"kind": args.kind, "k": args.k, "y": y, "value": val.value}
    if args.breakdown:
        result["breakdown"] = [
            {"l": l, "weight": w, "series": s, "term": t}
            for (l, w, s, t) in val.breakdown]
    emit_report("bk", cfg, result, table, started)
    return 0


def cmd_coeff(args, cfg: RunConfig) -> int:
    started = time.time()
    y = float(args.y if args.y is not None else cfg.y)
    kind_name = {1: "d", 3: "r", 4: "a", 5: "d"}[args.theorem]
    table = _series_table(cfg, kind_name, y)
    coeff = main_term_coefficient(args.theorem, args.k, table, y,
                                  kappa=args.kappa)
    result = {"theorem": args.theorem, "k": args.k, "kappa": args.kappa,
              "y": y, "value": coeff.value, "formula": coeff.formula}
    emit_report("coeff", cfg, result, table, started)
    return 0


def cmd_exponents(args, cfg: RunConfig) -> int:
    started = time.time()
    book = exponent_book(args.k, Fraction(args.a0))
    result = {
        "k": book.k,
        "a0": str(book.a0),
        "k0": book.k0,
        "b_k": {"rational": str(book.b_k), "decimal": float(book.b_k)},
        "sigma": {"rational": str(book.sigma), "decimal": float(book.sigma)},
        "delta1": {"rational": str(book.delta1), "decimal": float(book.delta1)},
        "delta2": {"rational": str(book.delta2), "decimal": float(book.delta2)},
    }
    emit_report("exponents", cfg, result, None, started)
    return 0


def cmd_moment(args, cfg: RunConfig) -> int:
    started = time.time()
    kind = error_term_kind(args.kind)
    t_val = float(args.T)
    need = math.ceil(4 * t_val) if kind is ErrorTermKind.ALTERNATING else math.ceil(t_val)
    need_tau = math.ceil(t_val) if kind is ErrorTermKind.CUSP else 0
    coeff_y = float(args.y if args.y is not None else min(cfg.y, 1e4))
    if kind is not ErrorTermKind.CUSP:
        need = max(need, math.ceil(coeff_y))
    table = acquire_table(cfg, need, need_tau)
    rep = integrate_moment(table, kind, args.k, t_val, cfg.spec(), coeff_y)
    result = {"kind": rep.kind, "k": rep.k, "T": rep.T, "y": rep.y,
              "empirical": rep.empirical, "predicted": rep.predicted,
              "ratio": rep.ratio, "chunk_count": rep.chunk_count,
              "quadrature_order": rep.quadrature_order, "note": rep.note}
    emit_report("moment", cfg, result, table, started)
    return 0


def cmd_moment_r1(args, cfg: RunConfig) -> int:
    started = time.time()
    y = float(args.y)
    table = acquire_table(cfg, math.ceil(y), 0)
    rep = integrate_truncated_moment(table, coefficient_kind(args.kind),
                                     args.h, float(args.T), y, cfg.spec())
    result = {"kind": rep.kind, "h": rep.k, "T": rep.T, "y": rep.y,
              "empirical": rep.empirical, "predicted": rep.predicted,
              "ratio": rep.ratio, "chunk_count": rep.chunk_count,
              "quadrature_order": rep.quadrature_order}
    emit_report("moment-r1", cfg, result, table, started)
    return 0


def cmd_verify(args, cfg: RunConfig) -> int:
    started = time.time()
    need_limit, need_tau = SUITE_TABLE_NEEDS[args.suite]
    table = acquire_table(cfg, need_limit, need_tau) if need_limit > 1 else None
    checks = run_suite(args.suite, table, cfg.spec())
    n_pass = sum(c.passed for c in checks)
    if cfg.format == "json":
        result = {"suite": args.suite,
                  "passed": n_pass, "failed": len(checks) - n_pass,
                  "checks": [{"name": c.name, "passed": c.passed,
                              "detail": c.detail} for c in checks]}
        emit_report("verify", cfg, result, table, started)
    else:
        for c in checks:
            print(f"{'PASS' if c.passed else 'FAIL'}  {c.name}  [{c.detail}]")
        print(f"{n_pass}/{len(checks)} checks passed")
    return 0 if n_pass == len(checks) else 1


# ---------------------------------------------------------------------------
# parser


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", help="key = value config file")
    sub.add_argument("--table-limit", dest="table_limit", type=int)
    sub.add_argument("--tau-limit", dest="tau_limit", type=int)
    sub.add_argument("--table-cache", dest="table_cache",
                     help=f"binary table cache path (default ${ENV_CACHE})")
    sub.add_argument("--chunk", dest="chunk", type=int,
                     help="unit intervals per quadrature chunk")
    sub.add_argument("--quad-order", dest="quad_order", type=int)
    sub.add_argument("--threads", dest="threads", type=int,
                     help="worker threads for chunked integration (0 = serial)")
    sub.add_argument("--format", dest="format", choices=("json", "csv"))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vmoment",
        description="Lattice-point and divisor error terms, square-root "
                    "relation series, and power-moment checks")
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="cmd", required=True)

    p = subs.add_parser("sieve", help="build (and optionally cache) the tables")
    p.add_argument("--limit", type=int, required=True)
    p.add_argument("--tau-limit-build", dest="tau_limit", type=int, default=None)
    _add_common(p)
    p.set_defaults(fn=cmd_sieve)

    p = subs.add_parser("error-term", help="exact error term at a point")
    p.add_argument("--kind", required=True,
                   choices=[k.value for k in ErrorTermKind])
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--y", type=float, help="also evaluate the truncated expansion")
    _add_common(p)
    p.set_defaults(fn=cmd_error_term)

    p = subs.add_parser("relations", help="square-root relation tools")
    rsubs = p.add_subparsers(dest="relations_cmd", required=True)
    pe = rsubs.add_parser("enumerate")
    pe.add_argument("--k", type=int, required=True)
    pe.add_argument("--l", type=int, required=True)
    pe.add_argument("--y", type=float, required=True)
    pe.add_argument("--brute", action="store_true",
                    help="use the all-tuples oracle instead")
    _add_common(pe)
    pg = rsubs.add_parser("gap")
    pg.add_argument("--k", type=int, required=True)
    pg.add_argument("--pattern", required=True, help="sign bits, e.g. 011")
    pg.add_argument("--N", type=int, required=True)
    _add_common(pg)
    pc = rsubs.add_parser("count")
    pc.add_argument("--N", required=True, help="comma-separated ranges, e.g. 8,8,8")
    pc.add_argument("--pattern", required=True)
    pc.add_argument("--delta", type=float, required=True)
    _add_common(pc)
    p.set_defaults(fn=cmd_relations)
    for q in (pe, pg, pc):
        q.set_defaults(fn=cmd_relations)

    p = subs.add_parser("series", help="truncated relation series value")
    p.add_argument("--kind", required=True, choices=("d", "r", "a", "dstar"))
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--y", type=float)
    _add_common(p)
    p.set_defaults(fn=cmd_series)

    p = subs.add_parser("bk", help="binomial-cosine series combination")
    p.add_argument("--kind", required=True, choices=("d", "r", "a", "dstar"))
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--y", type=float)
    p.add_argument("--breakdown", action="store_true")
    _add_common(p)
    p.set_defaults(fn=cmd_bk)

    p = subs.add_parser("coeff", help="predicted moment main-term coefficient")
    p.add_argument("--theorem", type=int, required=True, choices=(1, 3, 4, 5))
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--kappa", type=int)
    p.add_argument("--y", type=float)
    _add_common(p)
    p.set_defaults(fn=cmd_coeff)

    p = subs.add_parser("exponents", help="exact error-exponent bookkeeping")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--a0", required=True, help="rational, e.g. 184/19")
    _add_common(p)
    p.set_defaults(fn=cmd_exponents)

    p = subs.add_parser("moment", help="empirical vs predicted power moment")
    p.add_argument("--kind", required=True,
                   choices=[k.value for k in ErrorTermKind])
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--T", type=float, required=True)
    p.add_argument("--y", type=float, help="series truncation for the coefficient")
    _add_common(p)
    p.set_defaults(fn=cmd_moment)

    p = subs.add_parser("moment-r1", help="moment of the truncated expansion")
    p.add_argument("--kind", default="d", choices=("d", "r", "a", "dstar"))
    p.add_argument("--h", type=int, required=True)
    p.add_argument("--T", type=float, required=True)
    p.add_argument("--y", type=float, required=True)
    _add_common(p)
    p.set_defaults(fn=cmd_moment_r1)

    p = subs.add_parser("verify", help="run a named check battery")
    p.add_argument("--suite", required=True, choices=sorted(SUITES))
    _add_common(p)
    p.set_defaults(fn=cmd_verify)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
    except (ValueError, OSError) as exc:
        parser.exit(2, f"error: {exc}\n")
    try:
        return args.fn(args, cfg)
    except (RangeError, ResourceError) as exc:
        if cfg.format == "json":
            print(json.dumps({"error": {"type": type(exc).__name__,
                                        "message": str(exc)}}, indent=2))
        else:
            print(f"error: {exc}", file=sys.stderr)
        return 1
    except VmomentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        parser.exit(2, f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
