"""Autocorrelation coefficients: finite-window estimates and closed forms."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .ensembles import Model, RealSequence, SpinSequence, _Window, _default_start
from .exact import QComplex, abs2, format_complex, parse_complex

UNBIASED = "unbiased: sum_m conj(x_m) x_(m+n) / (L - n)"
# direct lag sums up to this n_max, FFT correlation beyond
_DIRECT_MAX_LAG = 1024


@dataclass(frozen=True)
class WeightMap:
    """Scattering weights ``h(+1) = h_plus`` and ``h(-1) = h_minus``.

    Weights may be ``QComplex`` (exact) or plain numbers.
    """

    h_plus: object = 1
    h_minus: object = -1

    @classmethod
    def parse(cls, plus: str, minus: str) -> "WeightMap":
        return cls(parse_complex(plus), parse_complex(minus))

    @property
    def balanced(self) -> bool:
        return self.h_plus + self.h_minus == 0

    @property
    def mean(self):
        """Average weight ``(h+ + h-)/2`` of a balanced spin sequence."""
        return (self.h_plus + self.h_minus) * Fraction(1, 2)

    def numeric(self) -> tuple[complex, complex]:
        return complex(self.h_plus), complex(self.h_minus)

    def scaled(self, z) -> "WeightMap":
        return WeightMap(self.h_plus * z, self.h_minus * z)

    def __str__(self):
        return f"({format_complex(self.h_plus)}, {format_complex(self.h_minus)})"


BALANCED = WeightMap(1, -1)


class WeightedComb(_Window):
    """Complex weights on a window of integer positions."""

    __slots__ = ("values", "start")

    def __init__(self, values, start: int | None = None):
        arr = np.array(values, dtype=np.complex128)
        if arr.ndim != 1:
            raise ValueError("comb weights must be one-dimensional")
        arr.setflags(write=False)
        self.values = arr
        self.start = _default_start(arr.size, start)

    @property
    def weights(self) -> np.ndarray:
        return self.values

    def __repr__(self):
        return f"WeightedComb(n={len(self)}, start={self.start})"


def apply_weights(w: SpinSequence, h: WeightMap) -> WeightedComb:
    hp, hm = h.numeric()
    return WeightedComb(np.where(w.values > 0, hp, hm), w.start)


def lift_real(v: RealSequence) -> WeightedComb:
    return WeightedComb(v.values.astype(np.complex128), v.start)


def as_comb(x) -> WeightedComb:
    """Spins get balanced weights, real sequences are lifted, combs pass."""
    if isinstance(x, WeightedComb):
        return x
    if isinstance(x, SpinSequence):
        return apply_weights(x, BALANCED)
    if isinstance(x, RealSequence):
        return lift_real(x)
    raise TypeError(f"cannot build a comb from {type(x).__name__}")


@dataclass(frozen=True)
class AutocorrSeq:
    """Estimated autocorrelation for lags 0..max_lag.

    Negative lags follow from ``eta(-n) = conj(eta(n))``.
    """

    coefficients: np.ndarray
    normalization: str = UNBIASED
    trials: int = 1
    window_length: int | None = None

    def __post_init__(self):
        c = np.array(self.coefficients, dtype=np.complex128)
        c.setflags(write=False)
        object.__setattr__(self, "coefficients", c)

    @property
    def max_lag(self) -> int:
        return len(self.coefficients) - 1

    def __getitem__(self, n: int) -> complex:
        c = self.coefficients[abs(n)]
        return c if n >= 0 else np.conj(c)

    def symmetric(self) -> np.ndarray:
        """Coefficients on lags -max_lag..max_lag."""
        c = self.coefficients
        return np.concatenate([np.conj(c[:0:-1]), c])

    def minus(self, pattern) -> "AutocorrSeq":
        """Subtract ``pattern(n)`` from every lag."""
        d = np.array([pattern(n) for n in range(self.max_lag + 1)], dtype=np.complex128)
        return AutocorrSeq(self.coefficients - d, self.normalization, self.trials,
                           self.window_length)


def _lag_products(x: np.ndarray, n_max: int) -> np.ndarray:
    """``sum_m conj(x_m) x_(m+n)`` for n = 0..n_max."""
    length = len(x)
    if n_max <= _DIRECT_MAX_LAG:
        return np.array([np.vdot(x[:length - n], x[n:]) for n in range(n_max + 1)])
    size = 1 << (2 * length - 1).bit_length()
    if np.isrealobj(x):
        f = np.fft.rfft(x, size)
        full = np.fft.irfft(np.abs(f) ** 2, size)
    else:
        f = np.fft.fft(x, size)
        full = np.fft.ifft(np.abs(f) ** 2)
    out = np.asarray(full[:n_max + 1], dtype=np.complex128)
    out[0] = np.vdot(x, x)
    return out


def _numeric(c: WeightedComb) -> np.ndarray:
    v = c.values
    return v.real.copy() if not np.any(v.imag) else v


def empirical_autocorr(c, n_max: int) -> AutocorrSeq:
    """Unbiased lag averages over all in-window pairs.

    Lag n is divided by its term count ``L - n`` rather than by L.
    """
    c = as_comb(c)
    length = len(c)
    if not 0 <= n_max <= length - 1:
        raise ValueError(f"n_max={n_max} outside 0..{length - 1}")
    sums = _lag_products(_numeric(c), n_max)
    coef = sums / (length - np.arange(n_max + 1))
    coef = np.asarray(coef, dtype=np.complex128)
    coef[0] = coef[0].real
    return AutocorrSeq(coef, UNBIASED, 1, length)


def average_autocorr(seqs) -> AutocorrSeq:
    """Mean of autocorrelations from independent trials."""
    seqs = list(seqs)
    if not seqs:
        raise ValueError("nothing to average")
    lags = {s.max_lag for s in seqs}
    if len(lags) != 1:
        raise ValueError(f"mismatched lag ranges {sorted(lags)}")
    coef = np.mean([s.coefficients for s in seqs], axis=0)
    return AutocorrSeq(coef, seqs[0].normalization, sum(s.trials for s in seqs),
                       seqs[0].window_length)


def empirical_mean(c) -> complex:
    c = as_comb(c)
    return complex(np.mean(c.values))


def default_tolerance(window_length: int, lag: int = 0) -> float:
    """Five standard errors of a mean of ``L - lag`` unit-variance terms."""
    return 5.0 / np.sqrt(window_length - lag)


@dataclass(frozen=True)
class ClosedFormAutocorr:
    """Exact ``eta(n)`` described by its value at 0, a 2-periodic background
    (even and odd lags) and finitely many exceptional lags ``n > 0``.
    """

    model: str
    h: WeightMap | None
    at_zero: object
    even: object
    odd: object
    exceptions: dict = field(default_factory=dict)

    def __call__(self, n: int):
        n = abs(int(n))
        if n == 0:
            return self.at_zero
        if n in self.exceptions:
            return self.exceptions[n]
        return self.even if n % 2 == 0 else self.odd

    def values(self, n_max: int) -> list:
        return [self(n) for n in range(n_max + 1)]

    def periodic(self, n: int):
        return self.even if n % 2 == 0 else self.odd

    def finite_part(self) -> dict:
        """Lags where ``eta`` departs from the periodic background."""
        out = {0: self.at_zero - self.even}
        for n, v in self.exceptions.items():
            out[n] = v - self.periodic(n)
        return {n: v for n, v in out.items() if v != 0}


def closed_autocorr(model, h: WeightMap = BALANCED) -> ClosedFormAutocorr:
    """Exact autocorrelation coefficients for ``model`` with weights ``h``.

    The Thue-Morse cover carries its own magnitudes; ``h`` acts on the random
    sign only and must be balanced there.
    """
    model = Model.parse(model)
    hp, hm = h.h_plus, h.h_minus
    quarter = Fraction(1, 4)
    lattice = abs2(hp + hm) * quarter
    spread = abs2(hp - hm) * quarter
    if model is Model.TOY:
        return ClosedFormAutocorr(model.value, h, lattice + spread,
                                  lattice + spread, lattice - spread)
    if model is Model.DMS:
        return ClosedFormAutocorr(model.value, h, lattice + spread, lattice, lattice,
                                  {1: lattice - spread * Fraction(1, 2)})
    if model is Model.FACTOR_Y:
        base = (abs2(hp + hm) + abs2(hp) - abs2(hm)) * quarter
        return ClosedFormAutocorr(model.value, h, base + spread,
                                  base + spread * Fraction(1, 2), base)
    if not h.balanced:
        raise ValueError("Thue-Morse cover closed form needs balanced weights")
    zero = abs2(hp) * 0
    return ClosedFormAutocorr(model.value, h, abs2(hp), zero, zero)


def sigma_values(w: SpinSequence) -> np.ndarray:
    """``sigma_m = w_m + w_(m+1)`` on positions start..stop-1."""
    v = w.values.astype(np.float64)
    return v[:-1] + v[1:]


def sigma_correlation_empirical(w: SpinSequence, n_max: int) -> AutocorrSeq:
    """Orbit average of ``sigma_m sigma_(m+n)`` over one window."""
    if len(w) < n_max + 3:
        raise ValueError(f"window of length {len(w)} too short for n_max={n_max}")
    s = sigma_values(w)
    return empirical_autocorr(WeightedComb(s, w.start), n_max)


def sigma_correlation_closed() -> ClosedFormAutocorr:
    """``<sigma_m | U^n sigma_m> = delta(n,0) - (delta(n,2) + delta(n,-2))/2``."""
    zero = Fraction(0)
    return ClosedFormAutocorr("sigma", None, Fraction(1), zero, zero,
                              {2: Fraction(-1, 2)})


def sigma_from_eta(eta: ClosedFormAutocorr, n: int):
    """``C(n) = 2 eta(n) + eta(n+1) + eta(n-1)``."""
    return 2 * eta(n) + eta(n + 1) + eta(n - 1)


__all__ = [
    "AutocorrSeq", "BALANCED", "ClosedFormAutocorr", "QComplex", "UNBIASED",
    "WeightMap", "WeightedComb", "apply_weights", "as_comb", "average_autocorr",
    "closed_autocorr", "default_tolerance", "empirical_autocorr", "empirical_mean",
    "lift_real", "sigma_correlation_closed", "sigma_correlation_empirical",
    "sigma_from_eta", "sigma_values",
]
