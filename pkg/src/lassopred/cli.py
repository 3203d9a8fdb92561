"""Command-line entry point: one binary, one subcommand per capability.

All numeric CSV output is printed with 17 significant digits and JSON uses
shortest round-trip floats, so downstream consumers (figure scripts, diffs)
reconstruct the exact doubles.  Exit codes: 0 success, 1 domain errors
(below the phase transition, out of region), 2 usage errors.

The LASSOPRED_WORKERS environment variable sets the default worker count for
``validate``.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import __version__, gauss, gordon, harness, mapcalc
from .errors import DomainError
from .regularizers import L1, RegularizerSpec

_F17 = ".17g"


def _fmt(x):
    return format(float(x), _F17)


def _spec_from_args(args):
    if getattr(args, "spec", None):
        with open(args.spec) as fh:
            return RegularizerSpec.from_json_dict(json.load(fh))
    if args.n is None or args.k is None:
        raise ValueError("provide --spec FILE or both --n and --k")
    # canonical k-sparse structure; distance curves are invariant to the
    # particular support positions and signs
    return RegularizerSpec(
        kind=L1, n=args.n, support=tuple(range(args.k)), signs=np.ones(args.k)
    )


def _geometry_from_args(args):
    spec = _spec_from_args(args)
    if args.m is None:
        raise ValueError("this subcommand needs --m")
    return mapcalc.Geometry(
        spec=spec, m=args.m, mc_samples=args.samples, mc_seed=args.seed
    )


def _write(args, text):
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_rows(args, header, rows, default_format):
    fmt = args.format or default_format
    if fmt == "csv":
        lines = [",".join(header)]
        for row in rows:
            lines.append(",".join(_fmt(v) if isinstance(v, float) else str(v) for v in row))
        _write(args, "\n".join(lines) + "\n")
    else:
        docs = [dict(zip(header, row)) for row in rows]
        _write(args, json.dumps(docs, indent=2) + "\n")


def _emit_doc(args, doc, default_format="json"):
    fmt = args.format or default_format
    if fmt == "json":
        _write(args, json.dumps(doc, indent=2) + "\n")
    else:
        header = list(doc.keys())
        _emit_rows(args, header, [tuple(doc[k] for k in header)], "csv")


def _tau_grid(args, lo=0.0, hi=4.0):
    if args.tau:
        return list(args.tau)
    count = args.tau_points
    return list(np.linspace(lo if lo > 0 else hi / count, hi, count))


def _cmd_dist(args):
    spec = _spec_from_args(args)
    rows = []
    for tau in _tau_grid(args):
        if spec.kind == L1 and not args.mc:
            pair = gauss.dc_closed_l1(spec.n, spec.k, tau)
        else:
            pair = gauss.dc_monte_carlo(spec, tau, args.samples, args.seed)
        rows.append((pair.tau, pair.D, pair.C, pair.stderr_D, pair.stderr_C, pair.source))
    _emit_rows(args, ["tau", "D", "C", "stderr_D", "stderr_C", "source"], rows, "csv")
    return 0


def _cmd_map(args):
    geom = _geometry_from_args(args)
    tau_lo, tau_hi = mapcalc.region(geom)
    width = tau_hi - tau_lo
    pad = 1e-9 * width
    taus = np.linspace(tau_lo + pad, tau_hi - pad, args.points)
    rows = []
    for tau in taus:
        pair = geom.dc(tau)
        rows.append(
            (float(tau), mapcalc.map_tau(geom, float(tau)), pair.D, pair.C, tau_lo, tau_hi)
        )
    _emit_rows(args, ["tau", "map", "D", "C", "tau_lo", "tau_hi"], rows, "csv")
    return 0


def _lambda_grid(args, geom):
    if args.lam:
        return list(args.lam)
    lam_best, _, _ = mapcalc.tune(geom)
    return list(np.geomspace(lam_best / args.lam_span, lam_best * args.lam_span, args.lam_points))


def _cmd_predict(args):
    geom = _geometry_from_args(args)
    rows = []
    for lam in _lambda_grid(args, geom):
        pred = mapcalc.predict_nse(geom, lam)
        rows.append((pred.lam, pred.tau, pred.eta, int(pred.low_confidence)))
    _emit_rows(args, ["lambda", "tau", "eta", "low_confidence"], rows, "csv")
    return 0


def _cmd_tune(args):
    geom = _geometry_from_args(args)
    lam_best, tau_best, eta_min = mapcalc.tune(geom)
    _emit_doc(args, {"lambda_best": lam_best, "tau_best": tau_best, "eta_min": eta_min})
    return 0


def _cmd_phase(args):
    geom = _geometry_from_args(args)
    d_star, robust, minimax = mapcalc.phase_diagnostics(geom)
    _emit_doc(
        args,
        {
            "d_star": d_star,
            "robust": robust,
            "minimax_nse": minimax if math.isfinite(minimax) else None,
        },
    )
    if not robust:
        print(
            f"below the phase transition: m = {geom.m} does not exceed "
            f"min over tau of D(tau) = {d_star:.6g}",
            file=sys.stderr,
        )
        return 1
    return 0


def _cmd_gordon(args):
    geom = _geometry_from_args(args)
    closed = gordon.closed_form_saddle(geom, args.lam)
    alpha_cap = args.alpha_cap or 4.0 * closed.alpha_star
    beta_cap = args.beta_cap or 4.0 * closed.beta_star
    numeric = gordon.solve_saddle_numeric(geom, args.lam, alpha_cap, beta_cap)
    _emit_doc(
        args,
        {
            "lambda": args.lam,
            "closed_form": {
                "alpha_star": closed.alpha_star,
                "beta_star": closed.beta_star,
                "objective_value": closed.objective_value,
            },
            "nested_search": {
                "alpha_star": numeric.alpha_star,
                "beta_star": numeric.beta_star,
                "objective_value": numeric.objective_value,
            },
            "delta_alpha": numeric.alpha_star - closed.alpha_star,
            "delta_beta": numeric.beta_star - closed.beta_star,
            "delta_objective": numeric.objective_value - closed.objective_value,
        },
    )
    return 0


def _cmd_validate(args):
    with open(args.config) as fh:
        config = harness.ExperimentConfig.from_json_dict(json.load(fh))
    workers = args.workers or int(os.environ.get("LASSOPRED_WORKERS", "1"))
    summary = harness.run_experiment(
        config, out_csv=args.out, sidecar=args.sidecar, workers=workers
    )
    if args.out is None:
        sys.stdout.write(harness.summary_csv_text(summary))
    return 0


def _add_structure_flags(p, need_m):
    p.add_argument("--n", type=int, help="ambient dimension")
    p.add_argument("--k", type=int, help="number of nonzero coordinates")
    if need_m:
        p.add_argument("--m", type=int, help="number of measurements")
    p.add_argument("--spec", help="JSON file with a full regularizer spec (overrides --n/--k)")
    p.add_argument("--seed", type=int, default=0, help="Monte Carlo seed")
    p.add_argument("--samples", type=int, default=50_000, help="Monte Carlo sample count")


def _add_output_flags(p):
    p.add_argument("--out", help="output path (default: stdout)")
    p.add_argument("--format", choices=["csv", "json"], help="output format")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="lassopred",
        description="Predict and validate the asymptotic error of the generalized LASSO.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dist", help="distance/correlation table over a tau grid")
    _add_structure_flags(p, need_m=False)
    _add_output_flags(p)
    p.add_argument("--tau", type=float, action="append", help="tau value (repeatable)")
    p.add_argument("--tau-points", type=int, default=50, help="grid size when --tau absent")
    p.add_argument("--mc", action="store_true", help="force the Monte Carlo estimator")
    p.set_defaults(func=_cmd_dist)

    p = sub.add_parser("map", help="map(tau) table over the admissible interval")
    _add_structure_flags(p, need_m=True)
    _add_output_flags(p)
    p.add_argument("--points", type=int, default=200, help="grid size inside the interval")
    p.set_defaults(func=_cmd_map)

    p = sub.add_parser("predict", help="predicted error over a lambda grid")
    _add_structure_flags(p, need_m=True)
    _add_output_flags(p)
    p.add_argument("--lam", type=float, action="append", help="lambda value (repeatable)")
    p.add_argument("--lam-points", type=int, default=50)
    p.add_argument("--lam-span", type=float, default=10.0,
                   help="grid spans lambda_best/span .. lambda_best*span")
    p.set_defaults(func=_cmd_predict)

    p = sub.add_parser("tune", help="optimal parameter and minimax error")
    _add_structure_flags(p, need_m=True)
    _add_output_flags(p)
    p.set_defaults(func=_cmd_tune)

    p = sub.add_parser("phase", help="phase-transition diagnostics")
    _add_structure_flags(p, need_m=True)
    _add_output_flags(p)
    p.set_defaults(func=_cmd_phase)

    p = sub.add_parser("gordon", help="scalar saddle: closed form vs nested search")
    _add_structure_flags(p, need_m=True)
    _add_output_flags(p)
    p.add_argument("--lam", type=float, required=True)
    p.add_argument("--alpha-cap", type=float)
    p.add_argument("--beta-cap", type=float)
    p.set_defaults(func=_cmd_gordon)

    p = sub.add_parser("validate", help="run a Monte Carlo validation sweep")
    p.add_argument("--config", required=True, help="JSON experiment config")
    p.add_argument("--out", help="CSV output path (appended; resumable)")
    p.add_argument("--sidecar", help="JSON sidecar path")
    p.add_argument("--workers", type=int, help="process count (default: LASSOPRED_WORKERS or 1)")
    p.set_defaults(func=_cmd_validate)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
