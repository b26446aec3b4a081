"""Experiment runner: node files, mesh statistics, Lebesgue-constant scans
and verification reports, written as CSV (plus an optional JSON mirror and
a ready gnuplot script).

Exit codes: 0 ok, 1 check failure, 2 usage error, 3 numerical failure.
SPHEREPROJ_THREADS caps worker parallelism (see backend module).
"""

import argparse
import json
import math
import os
import subprocess
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .errors import NumericalError, SphereProjError
from .geometry import random_unit_points, surface_area
from .harmonics import basis_dimension, harmonic_basis_matrix
from .pointsets import (
    cap_count_certificate,
    mesh_stats,
    spiral_points,
    weight_ratio_certificate,
)
from .projections import (
    HyperinterpolationOperator,
    LeastSquaresOperator,
    build_ls_basis,
    lebesgue_constant_estimate,
)
from .quadrature import load_rule, save_rule, tensor_gl_rule, verify_exactness

LS_DEGREE_DEFAULT_GUARD = 40
LS_DEGREE_HARD_CAP = 80

_version_cache = None


def version_string() -> str:
    """Package version, git-describe style when a repository is present."""
    global _version_cache
    if _version_cache is None:
        tag = "sphereproj-%s" % __version__
        try:
            proc = subprocess.run(
                ["git", "rev-parse", "--short", "HEAD"],
                cwd=Path(__file__).resolve().parent,
                capture_output=True,
                text=True,
                timeout=5,
            )
            if proc.returncode == 0 and proc.stdout.strip():
                tag += "-g" + proc.stdout.strip()
        except Exception:
            pass
        _version_cache = tag
    return _version_cache


def _config_comment(command: str, config: dict) -> str:
    parts = " ".join("%s=%s" % (k, config[k]) for k in sorted(config))
    return "# %s %s %s" % (version_string(), command, parts)


def write_table(path: Path, comment: str, columns, rows, fmt: str):
    """CSV with one comment line and a header row; optional JSON mirror."""
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as fh:
        fh.write(comment + "\n")
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(row + "\n")
    if fmt == "json":
        payload = {
            "comment": comment.lstrip("# "),
            "columns": list(columns),
            "rows": [row.split(",") for row in rows],
        }
        with open(path.with_suffix(".json"), "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")


def _format_float(x: float) -> str:
    return "%.17g" % x


def _n_range(args) -> list:
    if args.n is not None:
        return [args.n]
    values = list(range(args.n_start, args.n_stop + 1, args.n_step))
    if not values:
        raise SphereProjError("empty degree range")
    return values


def cmd_nodes(args, out: Path, fmt: str) -> int:
    n = args.n if args.n is not None else 15
    rule = tensor_gl_rule(n)
    save_rule(rule, out / ("rule_n%d.txt" % n))
    lon = np.degrees(np.arctan2(rule.nodes[:, 1], rule.nodes[:, 0]))
    lat = np.degrees(np.arcsin(np.clip(rule.nodes[:, 2], -1.0, 1.0)))
    rows = [
        "%s,%s,%s" % (_format_float(a), _format_float(b), _format_float(w))
        for a, b, w in zip(lon, lat, rule.weights)
    ]
    comment = _config_comment("nodes", {"n": n, "N": len(rule), "seed": args.seed})
    write_table(out / ("nodes_n%d.csv" % n), comment, ["lon_deg", "lat_deg", "weight"], rows, fmt)
    print("wrote %d nodes for degree %d to %s" % (len(rule), n, out))
    return 0


def cmd_meshstats(args, out: Path, fmt: str) -> int:
    mult = args.eval_mult if args.eval_mult is not None else 16
    degrees = _n_range(args)
    rows = []
    for n in degrees:
        rule = tensor_gl_rule(n)
        proxy = spiral_points(mult * len(rule))
        stats = mesh_stats(rule.nodes, proxy)
        rows.append(
            "%d,%d,%s,%s,%s"
            % (
                n,
                stats.count,
                _format_float(stats.mesh_norm),
                _format_float(stats.separation),
                _format_float(stats.mesh_ratio),
            )
        )
    comment = _config_comment(
        "meshstats",
        {"n_values": ":".join(map(str, degrees)), "eval_mult": mult, "seed": args.seed},
    )
    write_table(out / "meshstats.csv", comment, ["n", "N", "delta", "gamma", "ratio"], rows, fmt)
    _write_meshstats_plot(out)
    print("wrote mesh statistics for %d degrees to %s" % (len(degrees), out))
    return 0


def cmd_lebesgue(args, out: Path, fmt: str) -> int:
    mult = args.eval_mult if args.eval_mult is not None else 4
    degrees = _n_range(args)
    operators = ["hyper", "LS"] if args.operators == "both" else [args.operators]
    guard = args.max_ls_degree
    if "LS" in operators:
        too_big = [n for n in degrees if n > guard]
        if too_big:
            print(
                "refusing least-squares run at n=%d: exceeds --max-ls-degree=%d"
                % (max(too_big), guard),
                file=sys.stderr,
            )
            return 2
    rows = []
    for n in degrees:
        rule = tensor_gl_rule(n)
        proxy = spiral_points(mult * len(rule))
        ops = []
        if "hyper" in operators:
            ops.append(HyperinterpolationOperator(rule, n))
        if "LS" in operators:
            ops.append(LeastSquaresOperator(build_ls_basis(rule.nodes, n)))
        for op in ops:
            report = lebesgue_constant_estimate(op, proxy)
            root = math.sqrt(n) if n > 0 else float("inf")
            rows.append(
                "%s,%d,%s,%s,%s"
                % (
                    op.tag,
                    n,
                    _format_float(report.estimate),
                    _format_float(report.estimate / root if n > 0 else report.estimate),
                    _format_float(math.sqrt(n)),
                )
            )
    comment = _config_comment(
        "lebesgue",
        {
            "n_values": ":".join(map(str, degrees)),
            "eval_mult": mult,
            "operators": "+".join(operators),
            "max_ls_degree": guard,
            "seed": args.seed,
        },
    )
    write_table(
        out / "lebesgue.csv",
        comment,
        ["operator", "n", "estimate", "estimate_over_sqrt_n", "sqrt_n"],
        rows,
        fmt,
    )
    _write_lebesgue_plot(out)
    print("wrote %d Lebesgue estimates to %s" % (len(rows), out))
    return 0


def cmd_verify(args, out: Path, fmt: str) -> int:
    if args.rule:
        rule = load_rule(args.rule)
        n = args.n if args.n is not None else rule.exactness // 2
        if rule.exactness < 2 * n:
            print(
                "FAIL exactness-declaration: rule exactness %d < 2n = %d"
                % (rule.exactness, 2 * n)
            )
            return 1
    else:
        n = args.n if args.n is not None else 10
        rule = tensor_gl_rule(n)

    checks = []

    def record(name, value, bound, ok):
        checks.append((name, value, bound, ok))

    area = surface_area(2)
    weight_sum = float(np.sum(rule.weights))
    record("weight-sum", abs(weight_sum - area) / area, 1e-10, abs(weight_sum - area) <= 1e-10 * area)

    exact_err = verify_exactness(rule)
    record("exactness", exact_err, 1e-10 * area, exact_err <= 1e-10 * area)

    basis = build_ls_basis(rule.nodes, n)
    gram = basis.node_values.T @ basis.node_values
    gram_dev = float(np.max(np.abs(gram - np.eye(basis.dimension))))
    record("gram-identity", gram_dev, 1e-9, gram_dev <= 1e-9)

    kernel_max = float(np.max(np.abs(basis.node_kernel_matrix())))
    record("node-kernel-bound", kernel_max, 1.0 + 1e-9, kernel_max <= 1.0 + 1e-9)

    rng = np.random.default_rng(args.seed)
    probe = random_unit_points(200, 2, rng)
    coeff = rng.uniform(-1.0, 1.0, (basis_dimension(2, n), 5))
    exact = harmonic_basis_matrix(n, probe) @ coeff
    node_vals = harmonic_basis_matrix(n, rule.nodes) @ coeff
    hyper = HyperinterpolationOperator(rule, n)
    lsq = LeastSquaresOperator(basis)
    repro = 0.0
    for j in range(coeff.shape[1]):
        scale = float(np.max(np.abs(exact[:, j]))) or 1.0
        for op in (hyper, lsq):
            err = float(np.max(np.abs(op.apply(node_vals[:, j], probe) - exact[:, j])))
            repro = max(repro, err / scale)
    record("projection-reproduction", repro, 1e-8, repro <= 1e-8)

    ratio = weight_ratio_certificate(rule)
    record("weight-ratio-certificate", ratio, float("inf"), ratio >= 1.0)
    caps = cap_count_certificate(rule.nodes, max(n, 1), spiral_points(4 * len(rule)))
    record("cap-count-certificate", caps, float("inf"), caps >= 1)

    lines = []
    failed = False
    for name, value, bound, ok in checks:
        status = "PASS" if ok else "FAIL"
        failed = failed or not ok
        lines.append("%s %s value=%.6g bound=%.6g" % (status, name, value, bound))
    report_text = "\n".join(lines)
    print(report_text)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / ("verify_n%d.txt" % n), "w") as fh:
        fh.write(_config_comment("verify", {"n": n, "seed": args.seed}) + "\n")
        fh.write(report_text + "\n")
    return 1 if failed else 0


def _write_lebesgue_plot(out: Path):
    script = """set datafile separator ','
set key left top
set xlabel 'degree n'
set ylabel 'Lebesgue constant estimate'
plot 'lebesgue.csv' skip 2 using 2:(strcol(1) eq 'hyper' ? $3 : 1/0) \\
         with points pt 5 title 'hyperinterpolation', \\
     ''  skip 2 using 2:(strcol(1) eq 'LS' ? $3 : 1/0) \\
         with points pt 7 title 'least squares', \\
     ''  skip 2 using 2:5 with dots title 'sqrt(n)'
pause -1
"""
    with open(out / "lebesgue.gp", "w") as fh:
        fh.write(script)


def _write_meshstats_plot(out: Path):
    script = """set datafile separator ','
set key right top
set logscale y
set xlabel 'degree n'
plot 'meshstats.csv' skip 2 using 1:3 with linespoints title 'mesh norm', \\
     ''  skip 2 using 1:4 with linespoints title 'separation', \\
     ''  skip 2 using 1:5 with linespoints title 'mesh ratio'
pause -1
"""
    with open(out / "meshstats.gp", "w") as fh:
        fh.write(script)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sphereproj",
        description="Polynomial projection experiments on the unit sphere",
    )
    parser.add_argument("--version", action="version", version=version_string())
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, default=None, help="single degree")
    common.add_argument("--n-start", type=int, default=None)
    common.add_argument("--n-stop", type=int, default=None)
    common.add_argument("--n-step", type=int, default=None)
    common.add_argument("--q", type=int, default=2, help="sphere dimension (only 2 supported here)")
    common.add_argument("--eval-mult", type=int, default=None, help="evaluation-set size multiplier")
    common.add_argument("--out", default="results", help="output directory")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=["csv", "json"], default="csv")

    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("nodes", parents=[common], help="write a tensor rule file and plot CSV")
    sub.add_parser("meshstats", parents=[common], help="mesh norm / separation / ratio scan")
    leb = sub.add_parser("lebesgue", parents=[common], help="Lebesgue constant scan")
    leb.add_argument("--operators", choices=["hyper", "LS", "both"], default="both")
    leb.add_argument(
        "--max-ls-degree",
        type=int,
        default=LS_DEGREE_DEFAULT_GUARD,
        help="guard for the least-squares factorization size (hard cap %d)" % LS_DEGREE_HARD_CAP,
    )
    ver = sub.add_parser("verify", parents=[common], help="run the invariant checks")
    ver.add_argument("--rule", default=None, help="verify a rule file instead of a tensor rule")
    return parser


_RANGE_DEFAULTS = {
    "meshstats": (5, 50, 5),
    "lebesgue": (10, 40, 10),
}


def _fill_range_defaults(args):
    start, stop, step = _RANGE_DEFAULTS.get(args.command, (10, 10, 1))
    if args.n_start is None:
        args.n_start = start
    if args.n_stop is None:
        args.n_stop = stop
    if args.n_step is None:
        args.n_step = step


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.q != 2:
        parser.error("experiments are defined on S^2; got --q %d" % args.q)
    if args.eval_mult is not None and args.eval_mult < 1:
        parser.error("--eval-mult must be >= 1")
    if args.n_step is not None and args.n_step < 1:
        parser.error("--n-step must be >= 1")
    if getattr(args, "max_ls_degree", 0) > LS_DEGREE_HARD_CAP:
        parser.error("--max-ls-degree may not exceed %d" % LS_DEGREE_HARD_CAP)
    _fill_range_defaults(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    handlers = {
        "nodes": cmd_nodes,
        "meshstats": cmd_meshstats,
        "lebesgue": cmd_lebesgue,
        "verify": cmd_verify,
    }
    try:
        return handlers[args.command](args, out, args.format)
    except NumericalError as exc:
        print("numerical failure: %s" % exc, file=sys.stderr)
        return 3
    except SphereProjError as exc:
        print("check failure: %s" % exc, file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
