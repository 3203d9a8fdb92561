"""Render publication-style figures from lassopred CLI outputs.

Three figure kinds, one per documented schema:

* ``map_region``     -- from ``lassopred map`` CSV (tau,map,D,C,tau_lo,tau_hi):
                        shades the admissible interval and plots the map curve
                        with a parameter-to-scale arrow.
* ``nse_validation`` -- from ``lassopred validate`` CSV
                        (sigma,lambda,mean_nse,stderr_nse,eta_pred,...):
                        measured NSE vs noise level with error bars against
                        the flat predicted limit.
* ``lambda_sweep``   -- same CSV swept over lambda at the smallest sigma,
                        with the optimal parameter marked (read from the JSON
                        sidecar).

No numbers are recomputed here: the CSV/JSON files are the single source of
numerical truth.  Rendering is deterministic (fixed styles, pinned SVG hash
salt, no timestamps), so re-rendering the same inputs is byte-identical.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "lassopred-figures"

import matplotlib.pyplot as plt

KINDS = ("map_region", "nse_validation", "lambda_sweep")

_SCHEMAS = {
    "map_region": ("tau", "map", "D", "C", "tau_lo", "tau_hi"),
    "nse_validation": ("sigma", "lambda", "mean_nse", "stderr_nse", "eta_pred"),
    "lambda_sweep": ("sigma", "lambda", "mean_nse", "stderr_nse", "eta_pred"),
}


class RenderError(Exception):
    """Bad inputs: missing columns, empty data, malformed sidecar."""


@dataclass
class FigureJob:
    kind: str
    input_path: str
    output_path: str
    sidecar_path: str | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise RenderError(f"unknown figure kind {self.kind!r}; expected one of {KINDS}")


def _read_rows(path, kind):
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        missing = [c for c in _SCHEMAS[kind] if c not in header]
        if missing:
            raise RenderError(
                f"{path} does not match the {kind} schema: missing columns {missing} "
                f"(found {header})"
            )
        rows = [{k: float(v) if k != "source" else v for k, v in row.items()} for row in reader]
    if not rows:
        raise RenderError(f"{path} has a header but no data rows; nothing to draw")
    return rows


def _read_sidecar(path):
    if path is None:
        return {}
    with open(path) as fh:
        return json.load(fh)


def _figure():
    return plt.subplots(figsize=(6.0, 4.0), dpi=100)


def _render_map_region(rows, sidecar, ax):
    taus = [r["tau"] for r in rows]
    maps = [r["map"] for r in rows]
    tau_lo, tau_hi = rows[0]["tau_lo"], rows[0]["tau_hi"]

    ax.axvspan(tau_lo, tau_hi, color="#cfe3f5", alpha=0.6,
               label="admissible scales")
    ax.plot(taus, maps, color="#1f5fa8", lw=1.8, label="map(tau)")

    # parameter-to-scale arrow at the median grid point
    mid = len(rows) // 2
    lam, tau = maps[mid], taus[mid]
    ax.annotate("", xy=(tau, lam), xytext=(taus[0], lam),
                arrowprops=dict(arrowstyle="->", color="#444444", lw=1.1))
    ax.annotate("", xy=(tau, min(maps)), xytext=(tau, lam),
                arrowprops=dict(arrowstyle="->", color="#444444", lw=1.1))
    ax.text(taus[0], lam, "lambda ", ha="right", va="center", fontsize=9)
    ax.text(tau, min(maps), " tau = inverse(lambda)", ha="left", va="bottom", fontsize=9)

    ax.set_xlabel("scale tau")
    ax.set_ylabel("regularization parameter")
    ax.set_title("scale/parameter bijection on the admissible interval")
    ax.legend(loc="upper left", fontsize=9)


def _render_nse_validation(rows, sidecar, ax):
    rows = sorted(rows, key=lambda r: r["sigma"])
    sigmas = [r["sigma"] for r in rows]
    means = [r["mean_nse"] for r in rows]
    errs = [r["stderr_nse"] for r in rows]
    eta = rows[0]["eta_pred"]

    ax.errorbar(sigmas, means, yerr=errs, fmt="o", ms=4.5, capsize=3,
                color="#b6452c", label="measured NSE (mean over trials)")
    ax.axhline(eta, color="#1f5fa8", lw=1.6, ls="--",
               label="predicted small-noise limit")
    ax.set_xscale("log")
    ax.set_xlabel("noise level sigma")
    ax.set_ylabel("normalized squared error")
    ax.set_title("measured error vs the predicted limit")
    ax.legend(loc="best", fontsize=9)


def _render_lambda_sweep(rows, sidecar, ax):
    smallest = min(r["sigma"] for r in rows)
    sweep = sorted((r for r in rows if r["sigma"] == smallest), key=lambda r: r["lambda"])
    lams = [r["lambda"] for r in sweep]
    means = [r["mean_nse"] for r in sweep]
    errs = [r["stderr_nse"] for r in sweep]
    etas = [r["eta_pred"] for r in sweep]

    ax.errorbar(lams, means, yerr=errs, fmt="o", ms=4.5, capsize=3,
                color="#b6452c", label=f"measured NSE at sigma = {smallest:g}")
    ax.plot(lams, etas, color="#1f5fa8", lw=1.6, label="predicted limit")
    lam_best = sidecar.get("lambda_best")
    if lam_best is not None:
        ax.axvline(lam_best, color="#3a7d44", lw=1.2, ls=":",
                   label="optimal parameter")
    ax.set_xscale("log")
    ax.set_xlabel("regularization parameter")
    ax.set_ylabel("normalized squared error")
    ax.set_title("parameter sweep: measurement vs prediction")
    ax.legend(loc="best", fontsize=9)


_RENDERERS = {
    "map_region": _render_map_region,
    "nse_validation": _render_nse_validation,
    "lambda_sweep": _render_lambda_sweep,
}


def render(job):
    """Render ``job`` and write the image; raises RenderError on bad inputs.

    All validation happens before the output file is touched, so a failed
    render never leaves a file behind.
    """
    rows = _read_rows(job.input_path, job.kind)
    sidecar = _read_sidecar(job.sidecar_path)

    fig, ax = _figure()
    try:
        _RENDERERS[job.kind](rows, sidecar, ax)
        fig.tight_layout()
        metadata = {"Date": None} if job.output_path.endswith(".svg") else {"CreationDate": None}
        fig.savefig(job.output_path, metadata=metadata)
    finally:
        plt.close(fig)
    return job.output_path


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="lassopred-figures",
        description="Render figures from lassopred CLI output files.",
    )
    parser.add_argument("--kind", required=True, choices=KINDS)
    parser.add_argument("--input", required=True, help="CSV produced by the lassopred CLI")
    parser.add_argument("--output", required=True, help="image path (.svg or .pdf)")
    parser.add_argument("--sidecar", help="JSON sidecar (lambda_best marker for lambda_sweep)")
    args = parser.parse_args(argv)
    try:
        render(FigureJob(
            kind=args.kind, input_path=args.input,
            output_path=args.output, sidecar_path=args.sidecar,
        ))
    except (RenderError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
