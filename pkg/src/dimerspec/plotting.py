"""Static report figures (SVG by default) for the CLI report path."""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

GOLDEN = (math.sqrt(5) - 1.0) / 2.0

STYLE = {
    "font.size": 10,
    "axes.labelsize": 11,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "legend.frameon": False,
    "svg.hashsalt": "dimerspec",
    "svg.fonttype": "none",
}


def report_figure(width=6.4, height=None):
    height = height or width * GOLDEN
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(width, height))
    return fig, ax


def _save(fig, path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with plt.rc_context(STYLE):
        fig.savefig(path, bbox_inches="tight", metadata={"Date": None}
                    if path.suffix == ".svg" else None)
    plt.close(fig)
    return path


def plot_diffraction(path, pgram=None, density=None, exact=None, peaks=None, title=""):
    """Periodogram, Fejer density and Bragg estimates against the exact
    measure on one period."""
    fig, ax = report_figure()
    top = 0.0
    if pgram is not None:
        ax.plot(pgram.k, pgram.values, color="0.75", lw=0.6,
                label=f"periodogram ({pgram.trials} trials)")
    if density is not None:
        ax.plot(density.k, density.values, color="C0", lw=1.4,
                label=f"Fejer density (n_max={density.n_max})")
        top = max(top, float(np.max(density.values)))
    if exact is not None:
        k = np.linspace(0.0, 1.0, 1025)
        ac = exact.ac(k)
        ax.plot(k, ac, color="k", lw=1.0, ls="--", label="exact density")
        top = max(top, float(np.max(ac)))
        for r, x in enumerate(exact.point.intensities):
            if x != 0:
                kk = r / exact.point.q
                ax.vlines(kk, 0, float(x), color="C3", lw=1.2)
                ax.plot([kk], [float(x)], "o", color="C3", ms=5)
                top = max(top, float(x))
        ax.plot([], [], "o", color="C3", ms=5, label="exact Bragg peak")
    if peaks is not None:
        shown = [p for p in peaks if p.detected]
        if shown:
            ax.plot([float(p.k) for p in shown], [p.intensity for p in shown], "x",
                    color="C2", ms=8, mew=1.5, label="estimated Bragg peak")
            top = max(top, max(p.intensity for p in shown))
    ax.set_xlim(0.0, 1.0)
    ax.set_ylim(0.0, 1.15 * top + 0.1)
    ax.set_xlabel("k")
    ax.set_ylabel("intensity per unit period")
    if title:
        ax.set_title(title)
    ax.legend(loc="upper right", fontsize=8)
    return _save(fig, path)


def plot_autocorr(path, a, closed=None, title=""):
    """Stem plot of estimated lags with the exact coefficients overlaid."""
    fig, ax = report_figure()
    lags = np.arange(a.max_lag + 1)
    ax.vlines(lags, 0, a.coefficients.real, color="C0", lw=1.0)
    ax.plot(lags, a.coefficients.real, "o", color="C0", ms=3,
            label=f"estimate ({a.trials} trials)")
    if closed is not None:
        ax.plot(lags, [float(v) for v in closed.values(a.max_lag)], "_", color="k",
                ms=10, mew=1.5, label="exact")
    ax.axhline(0.0, color="0.5", lw=0.5)
    ax.set_xlabel("lag n")
    ax.set_ylabel("eta(n)")
    if title:
        ax.set_title(title)
    ax.legend(loc="upper right", fontsize=8)
    return _save(fig, path)


def plot_sigma_density(path, density, exact=None, title=""):
    fig, ax = report_figure()
    ax.plot(density.k, density.values, color="C0", lw=1.4,
            label=f"Fejer estimate ({density.trials} trials)")
    if exact is not None:
        k = np.linspace(0.0, 1.0, 1025)
        ax.plot(k, exact(k), color="k", ls="--", lw=1.0, label="1 - cos(4 pi k)")
    ax.set_xlim(0.0, 1.0)
    ax.set_xlabel("k")
    ax.set_ylabel("spectral density")
    if title:
        ax.set_title(title)
    ax.legend(loc="upper right", fontsize=8)
    return _save(fig, path)
