"""Command-line entry point: ``qtoroidal verify ...`` and ``qtoroidal expand ...``."""

from __future__ import annotations

import argparse
import configparser
import sys
from pathlib import Path
from typing import Sequence

from qtoroidal import verifier as VF
from qtoroidal.fields import FieldHandle, apply_field_coefficient
from qtoroidal.fock import parse_state

__all__ = ["main", "build_parser"]

# flags the config file may set, with their converters
_CONFIG_KEYS = {
    "suite": str,
    "relations": str,
    "max-fock-degree": int,
    "weight-radius": int,
    "exponent-bound": int,
    "u-bound": int,
    "index-bound": int,
    "out": str,
    "jobs": int,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors exit with 2
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def _range(text: str) -> range:
    try:
        lo, hi = text.split("..")
        lo_i, hi_i = int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO..HI, got {text!r}")
    if lo_i > hi_i:
        raise argparse.ArgumentTypeError("empty range")
    return range(lo_i, hi_i + 1)


def _nonneg(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if n < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return n


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qtoroidal", description="Exact verification of the quantum toroidal algebra of type A1.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("verify", help="run verification suites and write a JSON report")
    v.add_argument("--suite", choices=VF.SUITES)
    v.add_argument("--relations", help="comma-separated subset, e.g. Q1,Q8,GKV,locality")
    v.add_argument("--max-fock-degree", type=_nonneg)
    v.add_argument("--weight-radius", type=_nonneg)
    v.add_argument("--exponent-bound", type=_nonneg)
    v.add_argument("--u-bound", type=_nonneg)
    v.add_argument("--index-bound", type=_nonneg)
    v.add_argument("--out", help="write the JSON report array here")
    v.add_argument("--jobs", type=_nonneg, help=f"worker processes (default: ${VF.JOBS_ENV} or 1)")
    v.add_argument("--config", type=Path, help="key = value file with defaults for the flags above")

    e = sub.add_parser("expand", help="print coefficients of one current on one vector")
    e.add_argument("--field", required=True, help="e.g. X0+, phi1-, phi0+^-1")
    e.add_argument("--vector", required=True, help='e.g. "e(0,0)" or "h[0,-1] e(1,0)"')
    e.add_argument("--range", type=_range, default=range(-3, 4), dest="exponents")
    return p


def _load_config(path: Path) -> dict:
    cp = configparser.ConfigParser()
    try:
        cp.read_string("[qtoroidal]\n" + path.read_text())
    except (OSError, configparser.Error) as exc:
        raise ValueError(f"cannot read config {path}: {exc}")
    out = {}
    for key, value in cp["qtoroidal"].items():
        if key not in _CONFIG_KEYS:
            raise ValueError(f"unknown config key {key!r}")
        try:
            out[key.replace("-", "_")] = _CONFIG_KEYS[key](value)
        except ValueError:
            raise ValueError(f"bad value for {key}: {value!r}")
    return out


def _verify(args, parser) -> int:
    conf = {}
    if args.config is not None:
        try:
            conf = _load_config(args.config)
        except ValueError as exc:
            parser.error(str(exc))

    def opt(name, default):
        val = getattr(args, name)
        if val is None:
            val = conf.get(name, default)
        return val

    d = VF.DEFAULT_WINDOW
    try:
        window = VF.Window(opt("max_fock_degree", d.max_fock_degree), opt("weight_radius", d.weight_radius),
                           opt("exponent_bound", d.exponent_bound), opt("u_bound", d.u_bound))
    except ValueError as exc:
        parser.error(str(exc))
    suite = opt("suite", "all")
    if suite not in VF.SUITES:
        parser.error(f"unknown suite {suite!r}")
    rel_text = opt("relations", None)
    relations = [r.strip() for r in rel_text.split(",") if r.strip()] if rel_text else None
    index_bound = opt("index_bound", 3)
    if index_bound < 1:
        parser.error("--index-bound must be at least 1")
    jobs = opt("jobs", None) or VF.default_jobs()
    try:
        reports = VF.run_suite(suite, window, relations, index_bound, jobs)
    except ValueError as exc:
        parser.error(str(exc))
    for r in reports:
        mark = "ok  " if r.as_expected else "FAIL"
        note = ""
        if r.expected == "fail":
            note = " (expected to fail)"
        elif r.informational:
            note = " (recorded only)"
        print(f"{mark} {r.suite:<10} {r.item:<48} {r.status}{note}")
    out = opt("out", None)
    if out:
        Path(out).write_text(VF.dumps(reports))
    code = VF.exit_code(reports)
    print(f"{sum(r.as_expected for r in reports)}/{len(reports)} items as expected")
    return code


def _expand(args, parser) -> int:
    try:
        handle = FieldHandle.parse(args.field)
        state = parse_state(args.vector)
    except ValueError as exc:
        parser.error(str(exc))
    for k in args.exponents:
        print(f"z^{k}: {apply_field_coefficient(handle, k, state).render()}")
    return 0


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "verify":
        return _verify(args, parser)
    return _expand(args, parser)


if __name__ == "__main__":
    sys.exit(main())
