"""Command-line front end: build towers, verify identities, export surfaces.

Exit codes: 0 all checks pass, 1 identity failure, 2 configuration error,
3 numerical failure (pole on a contour or sample point, overflow).
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import geometry as geo
from . import projector as prj
from . import surface as srf
from .errors import (ConfigError, CpsurfError, DegenerateMetric, PoleAtPoint,
                     PoleOnContour)
from .harmonic import HoloVector, tower, veronese

QUAD_CHECK_POINTS = 200
PATH_TOL = 1e-8


def _parse_composition(text):
    try:
        return [int(t) for t in text.split(",") if t.strip() != ""]
    except ValueError as exc:
        raise ConfigError(f"bad composition {text!r}") from exc


def _parse_weights(text):
    if text is None:
        return None
    try:
        return [float(t) for t in text.split(",") if t.strip() != ""]
    except ValueError as exc:
        raise ConfigError(f"bad weights {text!r}") from exc


def _parse_complex(text):
    try:
        return complex(text.replace(" ", ""))
    except ValueError as exc:
        raise ConfigError(f"bad complex number {text!r}") from exc


def _load_generator(args):
    """Holomorphic generator from --input: 'veronese' or a JSON file holding
    one ascending-degree coefficient list per component (numbers or
    [re, im] pairs)."""
    if args.input == "veronese":
        if args.n is None:
            raise ConfigError("--n is required with the veronese input")
        return veronese(args.n)
    try:
        with open(args.input) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read input file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"input file is not valid JSON: {exc}") from exc
    if not isinstance(data, list) or not all(isinstance(c, list) for c in data):
        raise ConfigError("input file must hold a list of coefficient lists")
    lists = []
    for comp in data:
        coeffs = []
        for c in comp:
            if isinstance(c, (int, float)):
                coeffs.append(complex(c))
            elif isinstance(c, list) and len(c) == 2:
                coeffs.append(complex(c[0], c[1]))
            else:
                raise ConfigError(f"bad coefficient {c!r}")
        lists.append(coeffs)
    f = HoloVector.from_coeff_lists(lists)
    if args.n is not None and args.n != f.n:
        raise ConfigError(f"--n {args.n} does not match {f.n} components")
    return f


def _build(args):
    f = _load_generator(args)
    tw = tower(f)
    indices = _parse_composition(args.composition)
    weights = _parse_weights(args.weights)
    if weights is not None and len(weights) != len(indices):
        raise ConfigError("weights length must match composition length")
    P = prj.sum_projector(tw, indices, weights)
    return f, tw, P


def _is_front_sum(P):
    idx = sorted(i for i, _ in P.composition)
    return P.idempotent and idx == list(range(len(idx)))


def _config_dict(args):
    return {"n": args.n, "input": args.input,
            "composition": args.composition, "weights": args.weights,
            "grid_radius": args.grid_radius, "grid_res": args.grid_res,
            "seed": args.seed}


def _emit(text, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json_text(obj):
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _run_checks(args, f, P):
    checks = []

    def add(name, residual, tol=prj.RESIDUAL_TOL):
        checks.append({"name": name, "residual": float(residual),
                       "pass": bool(residual <= tol)})

    add("hermiticity", prj.hermiticity_residual(P))
    if P.idempotent:
        add("idempotency", prj.idempotency_residual(P))
        add("trace_rank", prj.trace_rank_residual(P))
        add("euler_lagrange", prj.euler_lagrange_residual(P))
        rng = np.random.default_rng(args.seed)
        pts = (rng.uniform(-args.grid_radius, args.grid_radius,
                           (QUAD_CHECK_POINTS, 2)) @ [1.0, 1.0j])
        chart = srf.canonical_chart(P.n, P.rank)
        mats = P.eval_many(pts)
        res = max(srf.embed_matrix(m, chart).quadratic_residual()
                  for m in mats)
        add("canonical_quadratic", res)
        add("point_constraints",
            prj.constraint_equations_residual(P, pts), 1e-10)
    conf = geo.conformality_check(P)
    add("conformality", conf["residual"])
    if _is_front_sum(P):
        add("selfduality", prj.selfduality_residual(P))
        add("current_closedness", srf.current_closedness_residual(P))
    if args.input == "veronese":
        add("conservation_holomorphic",
            prj.conservation_check_homogeneous(f.as_rational_vector()))
    return checks


def cmd_verify(args):
    f, tw, P = _build(args)
    checks = _run_checks(args, f, P)
    try:
        curv = geo.curvature_report(P, args.grid_radius, args.grid_res)
    except DegenerateMetric:
        curv = None
    ok = all(c["pass"] for c in checks)
    report = {"config": _config_dict(args), "checks": checks,
              "curvature": curv, "pass": ok}
    _emit(_json_text(report), args.out)
    return 0 if ok else 1


def cmd_sample(args):
    _, tw, P = _build(args)
    if not P.idempotent:
        raise ConfigError("sampling requires unit weights (idempotent sum)")
    chart = srf.canonical_chart(P.n, P.rank)
    pts, rows = srf.sample_grid(P, chart, args.grid_radius, args.grid_res,
                                threads=args.threads)
    n = P.n
    cols = ["xi_re", "xi_im"] + [f"X_{i}" for i in range(1, n)]
    for i, j in srf.offdiag_pairs(n):
        cols += [f"X_{i}{j}_plus", f"X_{i}{j}_minus"]
    data = np.column_stack([pts.real, pts.imag, rows])
    if args.format == "csv":
        lines = [f"# N={n} r={P.rank} C={chart.C:.17g}", ",".join(cols)]
        for row in data:
            lines.append(",".join(f"{x:.17g}" for x in row))
        _emit("\n".join(lines) + "\n", args.out)
    else:
        report = {"N": n, "r": P.rank, "C": chart.C, "columns": cols,
                  "rows": [[float(x) for x in row] for row in data]}
        _emit(_json_text(report), args.out)
    return 0


def cmd_integrate(args):
    _, tw, P = _build(args)
    endpoint = _parse_complex(args.endpoint)
    verdict = srf.path_independence(P, endpoint)
    agree = verdict["max_disagreement"] <= PATH_TOL

    def mat(x):
        return [[[float(v.real), float(v.imag)] for v in row] for row in x]

    report = {"config": _config_dict(args),
              "endpoint": [endpoint.real, endpoint.imag],
              "harmonic": verdict["harmonic"],
              "el_residual": verdict["el_residual"],
              "max_disagreement": verdict["max_disagreement"],
              "path_independent": bool(agree),
              "X_straight": mat(verdict["X_straight"]),
              "X_lshape": mat(verdict["X_lshape"])}
    _emit(_json_text(report), args.out)
    return 0 if (agree or not verdict["harmonic"]) else 1


def cmd_report(args):
    from . import viz

    f, tw, P = _build(args)
    checks = _run_checks(args, f, P)
    try:
        curv = geo.curvature_report(P, args.grid_radius, args.grid_res)
    except DegenerateMetric:
        curv = None
    ok = all(c["pass"] for c in checks)

    base = os.path.splitext(args.out)[0] if args.out else "cpsurf_report"
    figures = [viz.curvature_heatmap(P, base + "_curvature.png",
                                     args.grid_radius)]
    figures.append(viz.metric_profile(P, base + "_metric.png",
                                      args.grid_radius))
    if P.idempotent:
        chart = srf.canonical_chart(P.n, P.rank)
        figures.append(viz.diagonal_profile(P, chart, base + "_coords.png",
                                            args.grid_radius))

    lines = [f"surface report: N={P.n}, composition={args.composition}, "
             f"input={args.input}", ""]
    lines.append(f"{'check':<28}{'residual':>14}  status")
    for c in checks:
        status = "pass" if c["pass"] else "FAIL"
        lines.append(f"{c['name']:<28}{c['residual']:>14.3e}  {status}")
    lines.append("")
    if curv is not None:
        if curv["constant"]:
            lines.append(f"curvature: constant, K = {curv['K']:.12g}, "
                         f"A = {curv['A']:.12g} (spread {curv['spread']:.3e})")
        else:
            lines.append(f"curvature: nonconstant (spread "
                         f"{curv['spread']:.6g} over the scan grid)")
    lines.append("figures: " + ", ".join(figures))
    lines.append("overall: " + ("pass" if ok else "FAIL"))
    _emit("\n".join(lines) + "\n", args.out)
    return 0 if ok else 1


def build_parser():
    parser = argparse.ArgumentParser(
        prog="cpsurf",
        description="harmonic projector surfaces: verification, sampling, "
                    "integration, and reports")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in (("verify", cmd_verify), ("sample", cmd_sample),
                     ("integrate", cmd_integrate), ("report", cmd_report)):
        p = sub.add_parser(name)
        p.add_argument("--n", type=int, default=None)
        p.add_argument("--input", default="veronese",
                       help="'veronese' or a JSON coefficient-list file")
        p.add_argument("--composition", default="0",
                       help="comma-separated tower indices")
        p.add_argument("--weights", default=None,
                       help="comma-separated real weights")
        p.add_argument("--grid-radius", type=float, default=3.0)
        p.add_argument("--grid-res", type=int, default=41)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
        p.add_argument("--out", default=None)
        p.add_argument("--format", choices=("csv", "json"), default="json")
        if name == "integrate":
            p.add_argument("--endpoint", default="1",
                           help="contour endpoint as a complex literal")
        p.set_defaults(func=fn)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.n is not None and args.n < 2:
        print("error: need n >= 2", file=sys.stderr)
        return 2
    if args.grid_res < 2 or args.grid_radius <= 0:
        print("error: need grid-res >= 2 and grid-radius > 0",
              file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except (PoleAtPoint, PoleOnContour, DegenerateMetric, OverflowError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except (ConfigError, CpsurfError, ValueError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
