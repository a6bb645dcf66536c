"""Render the figure suite from simulation record CSVs.

Consumes only the documented record schema (RECORD_HEADER below; the
column set written by the simulation CLI) and, for the 3D track, an
optional reference-trajectory CSV.  Each figure id maps to one static
image:

  fig3-track3d       3D position track (dashed reference when a second
                     CSV with the reference schema is given)
  fig4-bnorm         position error norm vs time
  fig5-vnorm         velocity error norm vs time
  fig6-thrust        thrust vs time
  fig7-omega         angular velocity tracking error components vs time
  fig8-phi           attitude tracking error vs time
  fig9-taunorm       control torque magnitude vs time
  fig12-pd-vs-pid    attitude error overlay of two runs (two labeled curves)
  zero-dist-overlay  rate error and torque magnitude, two runs overlaid

Usage: so3pid-figures --figure <id> --input <csv>[,<csv2>] --output <path>
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

# column names of the two producer schemas, for reference:
#   records:   t,bx,by,bz,btilde_norm,vtilde_norm,f,taux,tauy,tauz,tau_norm,
#              omx,omy,omz,om_norm,phi,V,FIx,FIy,FIz,Dx,Dy,Dz,in_nbhd
#   reference: t,bdx,bdy,bdz,vdx,...,adz,Rd00..Rd22,omdx..domdz


class FigureError(ValueError):
    """Unknown figure id, missing file, or malformed input CSV."""


def load_columns(path) -> dict[str, np.ndarray]:
    """Read a headered CSV into named column arrays.

    Column lookup is by name, so files carrying at least the columns a
    figure needs render fine; anything else fails with the missing column
    named.  A header-only file yields empty columns.
    """
    p = Path(path)
    if not p.is_file():
        raise FigureError(f"input file not found: {p}")
    lines = [ln for ln in p.read_text(encoding="utf-8").splitlines() if ln]
    if not lines:
        raise FigureError(f"{p} is empty")
    names = lines[0].split(",")
    if len(lines) == 1:
        return {name: np.empty(0) for name in names}
    data = np.loadtxt(lines[1:], delimiter=",", ndmin=2)
    if data.shape[1] != len(names):
        raise FigureError(
            f"{p}: header names {len(names)} columns, rows carry "
            f"{data.shape[1]}")
    return {name: data[:, i] for i, name in enumerate(names)}


def _need(cols: dict, *names: str) -> None:
    for name in names:
        if name not in cols:
            raise FigureError(f"missing column: {name}")


def _line_figure(cols, ycols, ylabel, title, labels=None):
    fig, ax = plt.subplots(figsize=(7.0, 4.2))
    _need(cols, "t", *ycols)
    for i, yc in enumerate(ycols):
        label = labels[i] if labels else yc
        ax.plot(cols["t"], cols[yc], label=label)
    ax.set_xlabel("time [s]")
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    ax.grid(True, alpha=0.3)
    if labels or len(ycols) > 1:
        ax.legend()
    fig.tight_layout()
    return fig


def _overlay_figure(cols_a, cols_b, ycol, ylabel, title,
                    labels=("run 1", "run 2")):
    fig, ax = plt.subplots(figsize=(7.0, 4.2))
    for cols, label in ((cols_a, labels[0]), (cols_b, labels[1])):
        _need(cols, "t", ycol)
        ax.plot(cols["t"], cols[ycol], label=label)
    ax.set_xlabel("time [s]")
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    return fig


def _fig_track3d(inputs):
    cols = load_columns(inputs[0])
    _need(cols, "bx", "by", "bz")
    fig = plt.figure(figsize=(7.0, 5.6))
    ax = fig.add_subplot(projection="3d")
    ax.plot(cols["bx"], cols["by"], cols["bz"], label="vehicle")
    if len(inputs) > 1:
        ref = load_columns(inputs[1])
        _need(ref, "bdx", "bdy", "bdz")
        ax.plot(ref["bdx"], ref["bdy"], ref["bdz"], "k:", label="reference")
    ax.set_xlabel("x [m]")
    ax.set_ylabel("y [m]")
    ax.set_zlabel("z [m]")
    ax.set_title("position track")
    ax.legend()
    return fig


def _fig_pd_vs_pid(inputs):
    if len(inputs) != 2:
        raise FigureError("fig12-pd-vs-pid needs two input CSVs (pid, pd)")
    return _overlay_figure(load_columns(inputs[0]), load_columns(inputs[1]),
                           "phi", "attitude error",
                           "attitude tracking error, integral channel on/off",
                           labels=("with integral channel", "without"))


def _fig_zero_dist(inputs):
    if len(inputs) != 2:
        raise FigureError(
            "zero-dist-overlay needs two input CSVs (disturbed, undisturbed)")
    a, b = load_columns(inputs[0]), load_columns(inputs[1])
    for cols in (a, b):
        _need(cols, "t", "om_norm", "tau_norm")
    fig, (top, bottom) = plt.subplots(2, 1, figsize=(7.0, 6.4), sharex=True)
    for cols, label in ((a, "disturbed"), (b, "no disturbance")):
        top.plot(cols["t"], cols["om_norm"], label=label)
        bottom.plot(cols["t"], cols["tau_norm"], label=label)
    top.set_ylabel("rate error norm [rad/s]")
    bottom.set_ylabel("torque norm [N m]")
    bottom.set_xlabel("time [s]")
    top.set_title("disturbance sensitivity")
    top.grid(True, alpha=0.3)
    bottom.grid(True, alpha=0.3)
    top.legend()
    fig.tight_layout()
    return fig


FIGURE_IDS = (
    "fig3-track3d",
    "fig4-bnorm",
    "fig5-vnorm",
    "fig6-thrust",
    "fig7-omega",
    "fig8-phi",
    "fig9-taunorm",
    "fig12-pd-vs-pid",
    "zero-dist-overlay",
)


def render(figure_id: str, inputs, output) -> "matplotlib.figure.Figure":
    """Render one figure id from its input CSV path(s) to an image file.

    Returns the figure object (tests inspect legends); the image is
    written to ``output``.
    """
    single = {
        "fig4-bnorm": (["btilde_norm"], "position error norm [m]",
                       "position error"),
        "fig5-vnorm": (["vtilde_norm"], "velocity error norm [m/s]",
                       "velocity error"),
        "fig6-thrust": (["f"], "thrust [N]", "thrust"),
        "fig7-omega": (["omx", "omy", "omz"],
                       "rate tracking error [rad/s]",
                       "angular velocity tracking error"),
        "fig8-phi": (["phi"], "attitude error", "attitude tracking error"),
        "fig9-taunorm": (["tau_norm"], "torque norm [N m]",
                         "control torque magnitude"),
    }
    if figure_id == "fig3-track3d":
        fig = _fig_track3d(inputs)
    elif figure_id == "fig12-pd-vs-pid":
        fig = _fig_pd_vs_pid(inputs)
    elif figure_id == "zero-dist-overlay":
        fig = _fig_zero_dist(inputs)
    elif figure_id in single:
        ycols, ylabel, title = single[figure_id]
        fig = _line_figure(load_columns(inputs[0]), ycols, ylabel, title)
    else:
        raise FigureError(
            f"unknown figure id {figure_id!r}; choose from "
            + ", ".join(FIGURE_IDS))
    out = Path(output)
    out.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out, dpi=120)
    return fig


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="so3pid-figures",
        description="Render figures from simulation record CSVs")
    parser.add_argument("--figure", required=True,
                        help="figure id: " + ", ".join(FIGURE_IDS))
    parser.add_argument("--input", required=True,
                        help="input CSV path, or two comma-separated paths")
    parser.add_argument("--output", required=True, help="output image path")
    args = parser.parse_args(argv)
    inputs = [s for s in args.input.split(",") if s]
    try:
        fig = render(args.figure, inputs, args.output)
        plt.close(fig)
    except FigureError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {args.output}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
