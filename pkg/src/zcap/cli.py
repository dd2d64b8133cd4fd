"""Command-line front end: ``zcap <command> [options]``.

Every command writes a JSON run report (sorted keys) to stdout or to the
file given by ``--out``.  Exit status: 0 success, 1 usage error, 2 domain
error (for instance capacity >= 1 or a target that is not interpolable).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
import warnings
from fractions import Fraction

from . import __version__
from .config import Config
from .core import parse_set
from .errors import ZcapError

__all__ = ["main", "build_parser", "RunReport"]


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(f"{self.prog}: error: {message}")


def _clean(obj, digits):
    """JSON-ready copy: floats rounded to ``digits`` significant digits,
    big integers as decimal strings, tuples as lists."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return obj if abs(obj) < 2 ** 53 else str(obj)
    if isinstance(obj, Fraction):
        return _clean(float(obj), digits)
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return str(obj)
        return float(f"{obj:.{digits}g}")
    if isinstance(obj, dict):
        return {str(k): _clean(v, digits) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v, digits) for v in obj]
    if hasattr(obj, "item"):
        return _clean(obj.item(), digits)
    return str(obj)


class RunReport:
    """command, config snapshot, optional wall time, result payload, warnings."""

    def __init__(self, command, config: Config, result=None, warnings_=(), wall_time=None, error=None):
        self.command = command
        self.config = config
        self.result = result
        self.warnings = list(warnings_)
        self.wall_time = wall_time
        self.error = error

    def to_dict(self) -> dict:
        d = {
            "command": self.command,
            "config": self.config.as_dict(),
            "result": self.result,
            "warnings": self.warnings,
            "version": __version__,
        }
        if self.wall_time is not None:
            d["wall_time"] = self.wall_time
        if self.error is not None:
            d["error"] = self.error
        return d

    def to_json(self) -> str:
        return json.dumps(_clean(self.to_dict(), self.config.precision), sort_keys=True, indent=2) + "\n"

    def to_csv(self) -> str:
        res = _clean(self.result or {}, self.config.precision)
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        rows = res.get("rows") if isinstance(res, dict) else None
        if rows:
            keys = list(rows[0])
            w.writerow(keys)
            for r in rows:
                w.writerow([r[k] for k in keys])
        else:
            w.writerow(["key", "value"])
            for k in sorted(res):
                v = res[k]
                w.writerow([k, json.dumps(v, sort_keys=True) if isinstance(v, (dict, list)) else v])
        return buf.getvalue()


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def _cmd_cheb(args, cfg):
    from .chebyshev import chebyshev

    res = chebyshev(parse_set(args.set), args.degree, cfg, method=args.method)
    return res.to_dict()


def _cmd_capacity(args, cfg):
    from .capacity import capacity

    return capacity(parse_set(args.set), args.n_max, args.fekete_n, cfg).to_dict()


def _cmd_smallnorm(args, cfg):
    from .smallnorm import construct_small_norm, exhaustive_small_norm

    K = parse_set(args.set)
    if args.oracle:
        p = exhaustive_small_norm(K, args.max_deg, args.coeff_bound, cfg)
        if p is None:
            return {"found": False, "method": "exhaustive"}
        from .core import sup_norm

        return {"found": True, "method": "exhaustive", "coefficients": p.to_json(),
                "norm": sup_norm(p, K, cfg).value}
    delta = cfg.delta if args.delta is None else args.delta
    return construct_small_norm(K, delta, cfg).to_dict(full=args.trace)


def _cmd_kernel(args, cfg):
    from .kernel import enumerate_kernel

    return enumerate_kernel(parse_set(args.set), args.max_deg, cfg).to_dict()


def _cmd_approx(args, cfg):
    from .approximate import approximate, parse_target

    K = parse_set(args.set)
    f = parse_target(args.target)
    return approximate(f, K, args.epsilon, cfg).to_dict()


def _cmd_selftest(args, cfg):
    from .acceptance import run_all

    results = run_all(args.filter, cfg)
    for r in results:
        print(r.line(), file=sys.stderr)
    return {"criteria": [r.to_dict() for r in results], "passed": all(r.passed for r in results)}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", help="key = value file overriding the defaults")
    common.add_argument("--out", default=None,
                        help="'json' or 'csv' selects the format; anything else is an output file")
    common.add_argument("--format", choices=["json", "csv"], default=None, help="output format")
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--precision", type=int, default=None, help="significant digits (6-17)")
    common.add_argument("--threads", type=int, default=None, help="worker cap (default $ZCAP_THREADS or 1)")
    common.add_argument("--timing", action="store_true", help="include wall time (breaks byte-identity)")

    p = _Parser(prog="zcap", description="Integer polynomial approximation on compact sets of the line.")
    p.add_argument("--version", action="version", version=f"zcap {__version__}")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    c = sub.add_parser("cheb", parents=[common], help="Chebyshev polynomial T_n(K)")
    c.add_argument("--set", required=True)
    c.add_argument("--degree", type=int, required=True)
    c.add_argument("--method", choices=["auto", "exchange", "closed_form"], default="auto")
    c.set_defaults(func=_cmd_cheb)

    c = sub.add_parser("capacity", parents=[common], help="capacity estimates d1, d2")
    c.add_argument("--set", required=True)
    c.add_argument("--n-max", type=int, default=16)
    c.add_argument("--fekete-n", type=int, default=None)
    c.add_argument("--multistarts", type=int, default=None)
    c.set_defaults(func=_cmd_capacity)

    c = sub.add_parser("smallnorm", parents=[common], help="integer polynomial of sup-norm < 1")
    c.add_argument("--set", required=True)
    c.add_argument("--delta", type=float, default=None)
    c.add_argument("--oracle", action="store_true", help="exhaustive search instead of the construction")
    c.add_argument("--max-deg", type=int, default=None)
    c.add_argument("--coeff-bound", type=int, default=None)
    c.add_argument("--trace", action="store_true")
    c.set_defaults(func=_cmd_smallnorm)

    c = sub.add_parser("kernel", parents=[common], help="Fekete kernel J(K)")
    c.add_argument("--set", required=True)
    c.add_argument("--max-deg", type=int, default=None)
    c.set_defaults(func=_cmd_kernel)

    c = sub.add_parser("approx", parents=[common], help="integer polynomial approximation of a target")
    c.add_argument("--set", required=True)
    c.add_argument("--target", required=True, help="'poly:c0,c1,...' (ascending) or a CSV file with x,y")
    c.add_argument("--epsilon", type=float, required=True)
    c.add_argument("--max-bideg", type=int, default=None)
    c.set_defaults(func=_cmd_approx)

    c = sub.add_parser("selftest", parents=[common], help="run the acceptance suite")
    c.add_argument("--filter", default=None, help="substring of criterion names (or an id)")
    c.set_defaults(func=_cmd_selftest)
    return p


def _config_from(args) -> Config:
    cfg = Config()
    if args.config:
        cfg = Config.from_file(args.config, cfg)
    changes = {}
    for name, attr in (("seed", "seed"), ("precision", "precision"), ("threads", "threads"),
                       ("multistarts", "multistarts"), ("max_bideg", "max_bideg")):
        v = getattr(args, name, None)
        if v is not None:
            changes[attr] = v
    if getattr(args, "command", None) == "kernel" and args.max_deg is not None:
        changes["max_deg"] = args.max_deg
    if getattr(args, "command", None) == "smallnorm":
        if args.max_deg is not None:
            changes["oracle_max_deg"] = args.max_deg
        if args.coeff_bound is not None:
            changes["oracle_coeff_bound"] = args.coeff_bound
    fmt = args.format or (args.out if args.out in ("json", "csv") else None)
    if fmt:
        changes["out_format"] = fmt
    return cfg.replace(**changes)


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
        cfg = _config_from(args)
        if args.command == "smallnorm":
            args.max_deg = cfg.oracle_max_deg if args.max_deg is None else args.max_deg
            args.coeff_bound = cfg.oracle_coeff_bound if args.coeff_bound is None else args.coeff_bound
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"zcap: error: {exc}", file=sys.stderr)
        return 1

    t0 = time.perf_counter()
    code = 0
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        try:
            result = args.func(args, cfg)
            error = None
            if args.command == "selftest" and not result["passed"]:
                code = 1
        except ZcapError as exc:
            result, error, code = None, {"type": type(exc).__name__, "message": str(exc)}, 2
        except ValueError as exc:
            result, error, code = None, {"type": type(exc).__name__, "message": str(exc)}, 1
    wall = time.perf_counter() - t0 if args.timing else None
    msgs = sorted({f"{w.category.__name__}: {w.message}" for w in caught})
    report = RunReport(args.command, cfg, result, msgs, wall, error)
    text = report.to_csv() if cfg.out_format == "csv" else report.to_json()
    if args.out and args.out not in ("json", "csv"):
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if error is not None:
        print(f"zcap: {error['type']}: {error['message']}", file=sys.stderr)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
