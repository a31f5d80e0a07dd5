"""Read ledger/sweep CSVs and draw the three figure kinds.

Inputs are opened read-only and never modified; output bytes are
deterministic for identical inputs and spec (fixed SVG hash salt, no
date metadata).
"""

from __future__ import annotations

import csv
import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "entrofigs"

import matplotlib.pyplot as plt  # noqa: E402

from .errors import EmptyInput, MissingColumn, MissingInput
from .spec import FigureSpec

REQUIRED_COLUMNS = {
    "ledger_timeseries": ("t", "sigma_clausius", "I_AB", "sigma_obs"),
    "sweep_scaling": ("value", "max_sigma_clausius", "max_sigma_obs"),
    "twin_bodies_panel": ("t", "Q_energy", "beta_B"),
}


def read_columns(path: Path, names: tuple[str, ...]) -> dict[str, list[float]]:
    """Numeric columns by name; empty cells become NaN."""
    try:
        fh = open(path, newline="")
    except OSError as exc:
        raise MissingInput(f"cannot read {path}: {exc}") from exc
    with fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        missing = [n for n in names if n not in header]
        if missing:
            raise MissingColumn(
                f"{path} lacks required column(s): {', '.join(missing)}")
        rows = list(reader)
    if not rows:
        raise EmptyInput(f"{path} has a header but no data rows")
    return {n: [float(r[n]) if r[n] != "" else math.nan for r in rows]
            for n in names}


def _draw_bounds(ax, bounds):
    for label, value in bounds:
        ax.axhline(value, color="0.3", linestyle="--", linewidth=1)
        ax.annotate(label, xy=(0.99, value), xycoords=("axes fraction", "data"),
                    ha="right", va="bottom", fontsize=8, color="0.3")


def _save(fig, spec: FigureSpec) -> None:
    spec.output.parent.mkdir(parents=True, exist_ok=True)
    if spec.output.suffix.lower() == ".svg":
        fig.savefig(spec.output, metadata={"Date": None})
    else:
        fig.savefig(spec.output, metadata={"Software": None}, dpi=150)
    plt.close(fig)


def render_ledger_timeseries(spec: FigureSpec) -> None:
    cols = read_columns(spec.input, REQUIRED_COLUMNS["ledger_timeseries"])
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    ax.plot(cols["t"], cols["sigma_clausius"], label=r"$\Sigma$ (Clausius)")
    ax.plot(cols["t"], cols["I_AB"], label=r"$I_{AB}$", linestyle=":")
    ax.plot(cols["t"], cols["sigma_obs"], label=r"$\Sigma_{\rm obs}$")
    _draw_bounds(ax, spec.bounds)
    ax.set_xlabel("t")
    ax.set_ylabel("entropy production (nats)")
    if spec.title:
        ax.set_title(spec.title)
    ax.legend(loc="best", fontsize=9)
    fig.tight_layout()
    _save(fig, spec)


def render_sweep_scaling(spec: FigureSpec) -> None:
    cols = read_columns(spec.input, REQUIRED_COLUMNS["sweep_scaling"])
    fig, ax = plt.subplots(figsize=(5.2, 4.0))
    ax.plot(cols["value"], cols["max_sigma_obs"], marker="o",
            label=r"$\max_t \Sigma_{\rm obs}$")
    ax.plot(cols["value"], cols["max_sigma_clausius"], marker="s",
            label=r"$\max_t \Sigma$ (Clausius)")
    _draw_bounds(ax, spec.bounds)
    ax.set_xlabel("swept value")
    ax.set_ylabel("max entropy production (nats)")
    ax.set_xticks(cols["value"])
    if spec.title:
        ax.set_title(spec.title)
    ax.legend(loc="best", fontsize=9)
    fig.tight_layout()
    _save(fig, spec)


def render_twin_bodies_panel(spec: FigureSpec) -> None:
    cols = read_columns(spec.input, REQUIRED_COLUMNS["twin_bodies_panel"])
    beta0 = cols["beta_B"][0]
    drift = [b - beta0 for b in cols["beta_B"]]
    fig, (ax_q, ax_b) = plt.subplots(2, 1, figsize=(6.4, 5.6), sharex=True)
    ax_q.plot(cols["t"], cols["Q_energy"], color="C3")
    ax_q.set_ylabel(r"$Q_{\rm energy}$")
    _draw_bounds(ax_q, spec.bounds)
    ax_b.plot(cols["t"], drift, color="C0")
    ax_b.set_ylabel(r"$\beta_B(t) - \beta_B(0)$")
    ax_b.set_xlabel("t")
    if spec.title:
        ax_q.set_title(spec.title)
    fig.tight_layout()
    _save(fig, spec)


RENDERERS = {
    "ledger_timeseries": render_ledger_timeseries,
    "sweep_scaling": render_sweep_scaling,
    "twin_bodies_panel": render_twin_bodies_panel,
}


def render(spec: FigureSpec) -> Path:
    RENDERERS[spec.kind](spec)
    return spec.output
