"""``adjunctions`` command line.

Exit status: 0 all checks pass, 1 some check failed, 2 invalid config or
input, 3 numeric failure (the partial report is still written).
"""

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from .config import CONFIG_ENV, SUITES, ConfigError, load_config
from .matfiles import MatrixFileError, read_map, read_tensor
from .opspace import cb_norm_lower, haagerup_factorization
from .suites import NumericFailure, format_report, run

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3


def cache_dir():
    base = os.environ.get("XDG_CACHE_HOME") or os.path.join(os.path.expanduser("~"), ".cache")
    return Path(base) / "adjunctions"


def last_report_path():
    return cache_dir() / "last-report.txt"


def _u64(text):
    v = int(text)
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return v


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help=f"flat key = value config file (default: ${CONFIG_ENV})")
    common.add_argument("--seed", type=_u64)
    common.add_argument("--levels", type=int, help="matrix level cap")
    common.add_argument("--degree", type=int, help="degree bound for random polynomials")
    common.add_argument("--grid", metavar="M:EXTENT", help="grid points and extent for the SL(2,R) model")
    common.add_argument("--dim", type=int, help="truncation d of the K-type space")
    common.add_argument("--tol", type=float, help="override every floating tolerance")
    common.add_argument("--out", help="also write the output to this file")

    p = argparse.ArgumentParser(prog="adjunctions", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    v = sub.add_parser("verify", parents=[common], help="run verification suites")
    v.add_argument("suite", choices=("all",) + SUITES)
    c = sub.add_parser("cbnorm", parents=[common], help="lower bounds for the cb norm of a map")
    c.add_argument("map_file")
    h = sub.add_parser("haagerup", parents=[common], help="upper bound for a Haagerup tensor norm")
    h.add_argument("tensor_file")
    r = sub.add_parser("report", help="print a stored report")
    r.add_argument("--last", action="store_true", required=True)
    return p


def _config(args, suite="all"):
    overrides = {
        "suite": suite,
        "seed": args.seed,
        "levels": args.levels,
        "degree": args.degree,
        "grid": args.grid,
        "dim": args.dim,
        "tol": args.tol,
    }
    return load_config(args.config, overrides)


def _emit(text, out):
    sys.stdout.write(text)
    if out:
        Path(out).write_text(text)


def _store_last(text):
    path = last_report_path()
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    except OSError as exc:
        print(f"adjunctions: could not store report: {exc}", file=sys.stderr)


def cmd_verify(args):
    cfg = _config(args, args.suite)
    try:
        report = run(cfg)
        partial = False
    except NumericFailure as exc:
        print(f"adjunctions: numeric failure in {exc}", file=sys.stderr)
        report, partial = exc.partial, True
    text = format_report(report, partial=partial)
    _emit(text, args.out)
    _store_last(text)
    if partial:
        return EXIT_NUMERIC
    return EXIT_OK if report.ok else EXIT_FAIL


def _fmt(v):
    return repr(float(v))


def cmd_cbnorm(args):
    cfg = _config(args)
    T = read_map(args.map_file)
    res = cb_norm_lower(T, max_level=cfg.levels, restarts=cfg.restarts, iterations=cfg.iterations, seed=cfg.seed)
    lines = ["# adjunctions-cbnorm/1", f"# domain_dim={T.domain.dim} codomain_dim={T.codomain.dim}"]
    for n, (val, w) in enumerate(zip(res.levels, res.witnesses), 1):
        lines.append(f"level={n}\tlower={_fmt(val)}\twitness_value={_fmt(T.level_value(w))}")
    lines.append(f"cb_norm_lower={_fmt(res.best)}\tis_cb_norm={int(res.is_cb_norm)}")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_haagerup(args):
    cfg = _config(args)
    u, left, right = read_tensor(args.tensor_file)
    res = haagerup_factorization(u, left, right, restarts=cfg.haagerup_restarts,
                                 iterations=cfg.iterations, seed=cfg.seed)
    lines = [
        "# adjunctions-haagerup/1",
        f"level={u.shape[0]}\tinner_length={res.x.shape[1]}\tupper={_fmt(res.value)}",
    ]
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_report(args):
    path = last_report_path()
    if not path.exists():
        print("adjunctions: no stored report", file=sys.stderr)
        return EXIT_CONFIG
    sys.stdout.write(path.read_text())
    return EXIT_OK


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    handler = {"verify": cmd_verify, "cbnorm": cmd_cbnorm, "haagerup": cmd_haagerup, "report": cmd_report}
    try:
        return handler[args.command](args)
    except (ConfigError, MatrixFileError) as exc:
        print(f"adjunctions: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"adjunctions: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (np.linalg.LinAlgError, FloatingPointError) as exc:
        print(f"adjunctions: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
