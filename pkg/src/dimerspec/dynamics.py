"""Dynamical-spectrum quantities of the dimer shift under the Z-action."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .correlation import (AutocorrSeq, average_autocorr, empirical_autocorr,
                          sigma_correlation_empirical)
from .ensembles import Model, SpinSequence, shift
from .spectra import DEFAULT_GRID, DEFAULT_NMAX, GridDensity, TrigDensity, fejer_density

# the continuous part is reported, not estimated
CONTINUOUS_LABEL = "countable Lebesgue"


@dataclass(frozen=True)
class PointSpectrum:
    """Pure point spectrum ``sum_q (1/q)Z`` of the suspended R-action."""

    denominators: frozenset

    def __post_init__(self):
        d = frozenset(int(q) for q in self.denominators) | {1}
        if any(q <= 0 for q in d):
            raise ValueError("denominators must be positive")
        object.__setattr__(self, "denominators", d)

    def contains(self, k) -> bool:
        k = Fraction(k)
        return any((k * q).denominator == 1 for q in self.denominators)

    def cosets(self) -> frozenset:
        """Elements in [0, 1), i.e. the Z-action eigenvalues as angles."""
        return frozenset(Fraction(r, q) for q in self.denominators for r in range(q))

    @property
    def eigenvalues(self) -> list:
        """``exp(2 pi i k)`` for every coset k, as complex numbers."""
        return [complex(np.exp(2j * np.pi * float(k))) for k in sorted(self.cosets())]

    def __str__(self):
        qs = sorted(self.denominators - {1})
        return "Z" if not qs else " + ".join(f"Z/{q}" for q in qs)


def psi_estimate(w: SpinSequence) -> float:
    """``(2/P) sum_n (-1)^n w_n w_(n+1)`` over the P adjacent pairs of ``w``.

    Not clamped: tiny windows can give values outside [-1, 1].
    """
    if len(w) < 2:
        raise ValueError("need at least two spins")
    v = w.values.astype(np.int64)
    prods = v[:-1] * v[1:]
    signs = np.where((np.arange(w.start, w.stop) % 2) == 0, 1, -1)
    return 2.0 * float(np.dot(signs, prods)) / len(prods)


def eigen_relation_check(w: SpinSequence) -> float:
    """``|psi(S w) + psi(w)|``, which vanishes for an eigenvalue -1."""
    if w.is_symmetric and w.radius < 2:
        raise ValueError("need radius >= 2")
    return abs(psi_estimate(shift(w, 1)) + psi_estimate(w))


def sigma_spectral_density() -> TrigDensity:
    """Density ``1 - cos(4 pi k)`` of the spectral measure of ``sigma_m``."""
    return TrigDensity((Fraction(1), Fraction(0), Fraction(-1)))


def sigma_autocorr(windows, n_max: int = DEFAULT_NMAX) -> AutocorrSeq:
    if isinstance(windows, SpinSequence):
        windows = [windows]
    return average_autocorr(sigma_correlation_empirical(w, n_max) for w in windows)


def sigma_density_empirical(windows, n_max: int = DEFAULT_NMAX,
                            grid_size: int = DEFAULT_GRID) -> GridDensity:
    """Fejer density of the ``sigma`` correlations, averaged over windows."""
    return fejer_density(sigma_autocorr(windows, n_max), grid_size)


def doubling_gap(windows, n_max: int = DEFAULT_NMAX, grid_size: int = DEFAULT_GRID) -> float:
    """``max_k |sigma-density(k) - diffraction density(2k)|`` on the grid.

    Both densities are Fejer estimates from the same windows; ``grid_size``
    must be even so that ``2k`` stays on the grid.
    """
    if grid_size % 2:
        raise ValueError("doubling check needs an even grid size")
    if isinstance(windows, SpinSequence):
        windows = [windows]
    sig = sigma_density_empirical(windows, n_max, grid_size)
    eta = average_autocorr(empirical_autocorr(w, n_max) for w in windows)
    diff = fejer_density(eta, grid_size)
    doubled = diff.values[(2 * np.arange(grid_size)) % grid_size]
    return float(np.max(np.abs(sig.values - doubled)))


def dynamical_point_spectrum(model) -> PointSpectrum:
    """``Z/2`` for the toy system, the dimer shift and its factor Y."""
    model = Model.parse(model)
    if model is Model.TM_COVER:
        raise ValueError("dynamical spectrum of the Thue-Morse cover is not characterised")
    return PointSpectrum(frozenset({2}))


@dataclass(frozen=True)
class DynamicsReport:
    sequence_class: str
    psi_hat: float
    eigen_residual: float
    sigma_density_error: float | None

    def as_dict(self) -> dict:
        return {"class": self.sequence_class, "psi_hat": self.psi_hat,
                "eigen_residual": self.eigen_residual,
                "sigma_density_error": self.sigma_density_error}
