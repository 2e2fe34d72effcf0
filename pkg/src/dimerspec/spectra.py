"""Diffraction of integer-supported combs on the fundamental domain [0, 1).

Exact measures are a lattice point part plus a cosine-polynomial density.
Finite windows are analysed with the periodogram, Bragg-peak estimates at
rationals and Fejer-smoothed autocorrelations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

import numpy as np

from .correlation import (BALANCED, AutocorrSeq, ClosedFormAutocorr, WeightMap,
                          as_comb, closed_autocorr)
from .ensembles import Model
from .exact import QComplex, abs2, cos2pi, unit_root

DEFAULT_GRID = 512
DEFAULT_NMAX = 64
DEFAULT_QMAX = 4
BRAGG_RATIO = 10.0
BRAGG_FLOOR = 1e-3
# direct periodogram sums only below this many grid-point x position terms
_DIRECT_TERMS = 1 << 22


def _is_exact(x) -> bool:
    return isinstance(x, (int, Rational, QComplex))


@dataclass(frozen=True)
class TrigDensity:
    """``a_0 + sum_j a_j cos(2 pi j k)``."""

    coefficients: tuple

    def __post_init__(self):
        c = tuple(self.coefficients)
        if not c:
            c = (0,)
        object.__setattr__(self, "coefficients", c)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def mean(self):
        """Integral over one period."""
        return self.coefficients[0]

    def __call__(self, k):
        k = np.asarray(k, dtype=np.float64)
        j = np.arange(len(self.coefficients))
        a = np.array([float(x) for x in self.coefficients])
        return np.cos(2.0 * np.pi * np.multiply.outer(k, j)) @ a

    def exact(self, k):
        """Value at a rational ``k``; a ``Fraction`` whenever every cosine is
        rational there."""
        return sum((a * cos2pi(j * Fraction(k)) for j, a in enumerate(self.coefficients)
                    if a != 0), start=self.coefficients[0] * 0)

    def fourier_coefficient(self, n: int):
        """``integral_0^1 density(k) exp(2 pi i n k) dk``."""
        n = abs(int(n))
        if n > self.degree:
            return self.coefficients[0] * 0
        a = self.coefficients[n]
        return a if n == 0 else a * Fraction(1, 2)

    def scaled(self, s) -> "TrigDensity":
        return TrigDensity(tuple(a * s for a in self.coefficients))

    def min_on_grid(self, size: int = 4096) -> float:
        return float(np.min(self(np.arange(size) / size)))

    def __eq__(self, other):
        if not isinstance(other, TrigDensity):
            return NotImplemented
        a, b = list(self.coefficients), list(other.coefficients)
        size = max(len(a), len(b))
        a += [0] * (size - len(a))
        b += [0] * (size - len(b))
        return all(x == y for x, y in zip(a, b))

    __hash__ = None


@dataclass(frozen=True)
class PointPart:
    """Point masses on ``(1/q)Z``; ``intensities[r]`` sits on ``r/q + Z``."""

    q: int
    intensities: tuple

    def __post_init__(self):
        if int(self.q) != self.q or self.q <= 0:
            raise ValueError(f"denominator must be a positive integer, got {self.q}")
        ints = tuple(self.intensities)
        if len(ints) != self.q:
            raise ValueError(f"need {self.q} coset intensities, got {len(ints)}")
        if any(x < 0 for x in ints):
            raise ValueError("point intensities must be nonnegative")
        object.__setattr__(self, "q", int(self.q))
        object.__setattr__(self, "intensities", ints)

    @classmethod
    def empty(cls) -> "PointPart":
        return cls(1, (Fraction(0),))

    def intensity_at(self, k):
        x = Fraction(k) * self.q
        if x.denominator != 1:
            return self.intensities[0] * 0
        return self.intensities[int(x) % self.q]

    def refine(self, q: int) -> "PointPart":
        """Same measure written over the finer lattice ``(1/q)Z``."""
        if q % self.q:
            raise ValueError(f"{q} is not a multiple of {self.q}")
        step = q // self.q
        zero = self.intensities[0] * 0
        return PointPart(q, tuple(self.intensities[r // step] if r % step == 0 else zero
                                  for r in range(q)))

    def same_as(self, other: "PointPart") -> bool:
        q = math.lcm(self.q, other.q)
        return self.refine(q).intensities == other.refine(q).intensities

    def support(self) -> frozenset:
        """Cosets ``r/q + Z`` (as reduced fractions in [0,1)) carrying mass."""
        return frozenset(Fraction(r, self.q) for r, x in enumerate(self.intensities)
                         if x != 0)

    def per_period(self):
        return sum(self.intensities, start=self.intensities[0] * 0)

    def autocorr(self, n: int):
        """Contribution ``sum_r I_r exp(2 pi i n r/q)`` of the peaks to eta(n)."""
        if 4 % self.q == 0 and all(_is_exact(x) for x in self.intensities):
            total = QComplex(0)
            for r, x in enumerate(self.intensities):
                total = total + unit_root(-n * r, self.q) * x
            return total.re if total.im == 0 else total
        r = np.arange(self.q)
        vals = np.array([complex(x) for x in self.intensities])
        return complex(np.sum(vals * np.exp(2j * np.pi * n * r / self.q)))

    def scaled(self, s) -> "PointPart":
        return PointPart(self.q, tuple(x * s for x in self.intensities))


@dataclass(frozen=True)
class MixedMeasure:
    """Per-period diffraction: point part plus absolutely continuous density."""

    point: PointPart
    ac: TrigDensity

    def scaled(self, s) -> "MixedMeasure":
        return MixedMeasure(self.point.scaled(s), self.ac.scaled(s))


def evaluate(m: MixedMeasure, k):
    """``(point intensity at k, density at k)`` for rational ``k``."""
    k = Fraction(k)
    return m.point.intensity_at(k), m.ac.exact(k)


def period_mass(m: MixedMeasure):
    """Total mass per unit period."""
    return m.point.per_period() + m.ac.mean


def closed_diffraction(model, h: WeightMap = BALANCED) -> MixedMeasure:
    """Exact diffraction measure of ``model`` with weights ``h``."""
    model = Model.parse(model)
    hp, hm = h.h_plus, h.h_minus
    quarter = Fraction(1, 4)
    lattice = abs2(hp + hm) * quarter
    spread = abs2(hp - hm) * quarter
    zero = lattice * 0
    if model is Model.TOY:
        return MixedMeasure(PointPart(2, (lattice, spread)), TrigDensity((zero,)))
    if model is Model.DMS:
        return MixedMeasure(PointPart(1, (lattice,)), TrigDensity((spread, -spread)))
    if model is Model.FACTOR_Y:
        base = (abs2(hp + hm) + abs2(hp) - abs2(hm)) * quarter
        return MixedMeasure(PointPart(2, (base + spread * quarter, spread * quarter)),
                            TrigDensity((spread * Fraction(1, 2),)))
    if not h.balanced:
        raise ValueError("Thue-Morse cover closed form needs balanced weights")
    return MixedMeasure(PointPart(1, (zero,)), TrigDensity((abs2(hp),)))


def poisson_lattice_transform(q: int, coefficients) -> PointPart:
    """Diffraction of the q-periodic autocorrelation ``eta(n) = c[n mod q]``.

    The intensity on ``s/q + Z`` is ``(1/q) sum_r c_r exp(-2 pi i r s/q)``.
    """
    if int(q) != q or q <= 0:
        raise ValueError(f"period must be a positive integer, got {q}")
    c = list(coefficients)
    if len(c) != q:
        raise ValueError(f"need {q} coefficients for one period, got {len(c)}")
    if 4 % q == 0 and all(_is_exact(x) for x in c):
        out = []
        for s in range(q):
            acc = QComplex(0)
            for r, x in enumerate(c):
                acc = acc + unit_root(r * s, q) * x
            if acc.im != 0:
                raise ValueError("pattern is not Hermitian; transform is not real")
            out.append(acc.re / q)
        return PointPart(q, tuple(out))
    spec = np.fft.fft(np.array([complex(x) for x in c])) / q
    if np.max(np.abs(spec.imag)) > 1e-12 * max(1.0, np.max(np.abs(spec))):
        raise ValueError("pattern is not Hermitian; transform is not real")
    real = np.where(np.abs(spec.real) < 1e-15, 0.0, spec.real)
    return PointPart(q, tuple(float(x) for x in real))


def diffraction_from_autocorr(eta: ClosedFormAutocorr) -> MixedMeasure:
    """Second construction route: Poisson transform of the 2-periodic
    background plus the cosine series of the finitely supported remainder."""
    point = poisson_lattice_transform(2, [eta.even, eta.odd])
    finite = eta.finite_part()
    degree = max(finite, default=0)
    zero = eta.at_zero * 0
    coeffs = [finite.get(0, zero)] + [2 * finite.get(j, zero) for j in range(1, degree + 1)]
    if point.intensities[1] == 0:
        point = PointPart(1, (point.intensities[0],))
    return MixedMeasure(point, TrigDensity(tuple(coeffs)))


def closed_measure_pair(model, h: WeightMap = BALANCED):
    """Closed autocorrelation together with its closed diffraction."""
    return closed_autocorr(model, h), closed_diffraction(model, h)


# -- finite-window estimators ----------------------------------------------------

@dataclass(frozen=True)
class Periodogram:
    """``I_N(k) = |sum_n x_n exp(-2 pi i k n)|^2 / L`` on ``k = g/G``."""

    k: np.ndarray
    values: np.ndarray
    window_length: int
    trials: int = 1

    @property
    def grid_size(self) -> int:
        return len(self.k)

    def at(self, g: int) -> float:
        return float(self.values[g % self.grid_size])


def _periodogram_fft(x: np.ndarray, start: int, grid: int) -> np.ndarray:
    residues = (np.arange(start, start + len(x))) % grid
    folded = (np.bincount(residues, weights=x.real, minlength=grid)
              + 1j * np.bincount(residues, weights=x.imag, minlength=grid))
    return np.abs(np.fft.fft(folded)) ** 2


def _periodogram_direct(x: np.ndarray, start: int, grid: int) -> np.ndarray:
    n = np.arange(start, start + len(x))
    out = np.empty(grid)
    rows = max(1, _DIRECT_TERMS // max(1, len(x)))
    for g0 in range(0, grid, rows):
        g = np.arange(g0, min(grid, g0 + rows))
        phase = np.exp(-2j * np.pi * np.outer(g, n % grid) / grid)
        out[g] = np.abs(phase @ x) ** 2
    return out


def periodogram(c, grid_size: int = DEFAULT_GRID, method: str = "auto") -> Periodogram:
    """Finite-volume diffraction intensity on ``grid_size`` points of [0, 1).

    ``method="fft"`` folds the window modulo the grid and uses one FFT;
    ``"direct"`` sums the exponentials. ``"auto"`` prefers the FFT unless the
    direct sum is small.
    """
    if grid_size < 2:
        raise ValueError("grid size must be at least 2")
    comb = as_comb(c)
    x = comb.values
    if method == "auto":
        method = "direct" if grid_size * len(x) <= 4096 else "fft"
    if method == "fft":
        raw = _periodogram_fft(x, comb.start, grid_size)
    elif method == "direct":
        raw = _periodogram_direct(x, comb.start, grid_size)
    else:
        raise ValueError(f"unknown periodogram method {method!r}")
    return Periodogram(np.arange(grid_size) / grid_size, raw / len(x), len(x), 1)


def average_periodograms(items) -> Periodogram:
    items = list(items)
    if not items:
        raise ValueError("nothing to average")
    if len({p.grid_size for p in items}) != 1:
        raise ValueError("periodograms live on different grids")
    vals = np.mean([p.values for p in items], axis=0)
    return Periodogram(items[0].k, vals, items[0].window_length,
                       sum(p.trials for p in items))


def bragg_estimate(c, k) -> float:
    """``I_N(k) / L``: the point-mass intensity seen at the rational ``k``."""
    k = Fraction(k)
    comb = as_comb(c)
    x = comb.values
    q = k.denominator
    residues = np.arange(comb.start, comb.start + len(x)) % q
    folded = (np.bincount(residues, weights=x.real, minlength=q)
              + 1j * np.bincount(residues, weights=x.imag, minlength=q))
    phase = np.exp(-2j * np.pi * k.numerator * np.arange(q) / q)
    return float(abs(np.dot(folded, phase)) ** 2) / len(x) ** 2


def rationals_up_to(q_max: int) -> list:
    """Reduced fractions p/q in [0, 1) with q <= q_max, sorted."""
    return sorted({Fraction(p, q) for q in range(1, q_max + 1) for p in range(q)})


@dataclass(frozen=True)
class BraggPeak:
    k: Fraction
    intensity: float
    background: float
    detected: bool


def _neighbour_background(pgram: Periodogram, k: Fraction) -> float:
    centre = float(k) * pgram.grid_size
    lo, hi = math.ceil(centre - 2), math.floor(centre + 2)
    idx = [g for g in range(lo, hi + 1) if abs(g - centre) > 1e-9]
    return float(np.mean([pgram.at(g) for g in idx]))


def detect_bragg_peaks(combs, q_max: int = DEFAULT_QMAX, grid_size: int = DEFAULT_GRID,
                       ratio: float = BRAGG_RATIO, floor: float = BRAGG_FLOOR,
                       pgram: Periodogram | None = None) -> list:
    """Bragg estimates at every p/q with q <= q_max, averaged over ``combs``.

    A peak is declared when ``I_N(k)`` exceeds ``ratio`` times the mean
    periodogram on the grid points within two steps of k, and the estimate
    itself exceeds ``floor``.
    """
    if not isinstance(combs, (list, tuple)):
        combs = [combs]
    combs = [as_comb(c) for c in combs]
    if pgram is None:
        pgram = average_periodograms(periodogram(c, grid_size) for c in combs)
    length = pgram.window_length
    peaks = []
    for k in rationals_up_to(q_max):
        est = float(np.mean([bragg_estimate(c, k) for c in combs]))
        bg = _neighbour_background(pgram, k)
        hit = est * length > ratio * bg and est > floor
        peaks.append(BraggPeak(k, est, bg, bool(hit)))
    return peaks


def peaks_to_point_part(peaks, q_max: int = DEFAULT_QMAX,
                        detected_only: bool = True) -> PointPart:
    q = math.lcm(*range(1, q_max + 1))
    ints = [0.0] * q
    for p in peaks:
        if p.detected or not detected_only:
            ints[int(p.k * q) % q] = p.intensity
    return PointPart(q, tuple(ints))


@dataclass(frozen=True)
class GridDensity:
    """Density samples on ``k = g/G``."""

    k: np.ndarray
    values: np.ndarray
    n_max: int
    trials: int = 1

    def max_abs_error(self, exact) -> float:
        return float(np.max(np.abs(self.values - exact(self.k))))


def fejer_eval(a: AutocorrSeq, k, peaks: PointPart | None = None,
               n_max: int | None = None) -> np.ndarray:
    """``Re sum_{|n|<=M} (1 - |n|/(M+1)) eta~(n) exp(-2 pi i k n)`` at ``k``.

    ``eta~`` is ``a`` minus the autocorrelation of ``peaks``.
    """
    m = a.max_lag if n_max is None else n_max
    if m > a.max_lag:
        raise ValueError(f"n_max={m} exceeds the estimated lags ({a.max_lag})")
    eta = np.array(a.coefficients[:m + 1], dtype=np.complex128)
    if peaks is not None:
        eta = eta - np.array([complex(peaks.autocorr(n)) for n in range(m + 1)])
    k = np.asarray(k, dtype=np.float64)
    n = np.arange(1, m + 1)
    weights = 1.0 - n / (m + 1.0)
    phase = np.exp(-2j * np.pi * np.multiply.outer(k, n))
    return eta[0].real + 2.0 * np.real(phase @ (weights * eta[1:]))


def fejer_density(a: AutocorrSeq, grid_size: int = DEFAULT_GRID,
                  peaks: PointPart | None = None, n_max: int | None = None) -> GridDensity:
    """Fejer-smoothed density estimate on the grid ``g/grid_size``."""
    if grid_size < 2:
        raise ValueError("grid size must be at least 2")
    k = np.arange(grid_size) / grid_size
    m = a.max_lag if n_max is None else n_max
    return GridDensity(k, fejer_eval(a, k, peaks, m), m, a.trials)
