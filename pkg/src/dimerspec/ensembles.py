"""Finite windows of the dimer shift, its factors and the Thue-Morse cover.

Positions are integers; a window stores its values together with the position
of the first value, so a symmetric window of radius N covers -N..N with the
origin at array index N.

Random realizations come from numpy's PCG64 generator seeded with the 64-bit
seed of a :class:`SamplerSpec`. The DMS sampler draws the box-parity bit first
and then the dimer orientations from left to right.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

RNG_ALGORITHM = "numpy.random.PCG64"
SEED_MODULUS = 2**64
# odd increment of the trial-seed counter (2**64 / golden ratio)
TRIAL_SEED_STRIDE = 0x9E3779B97F4A7C15


class Model(str, enum.Enum):
    TOY = "toy"
    DMS = "dms"
    FACTOR_Y = "factor-y"
    TM_COVER = "tmcover"

    @classmethod
    def parse(cls, value) -> "Model":
        if isinstance(value, Model):
            return value
        key = str(value).strip().lower().replace("_", "-")
        aliases = {"factory": "factor-y", "y": "factor-y", "tm-cover": "tmcover",
                   "tm": "tmcover"}
        key = aliases.get(key, key)
        try:
            return cls(key)
        except ValueError:
            raise ValueError(f"unknown model {value!r}; expected one of "
                             f"{', '.join(m.value for m in cls)}") from None


class SequenceClass(str, enum.Enum):
    PERIODIC = "periodic"
    EVEN = "even"
    ODD = "odd"
    MIXED = "mixed"


def _frozen(values, dtype) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    if arr.ndim != 1:
        raise ValueError("window values must be one-dimensional")
    arr.setflags(write=False)
    return arr


class _Window:
    """Shared position bookkeeping for the window types."""

    values: np.ndarray
    start: int

    def __len__(self) -> int:
        return len(self.values)

    @property
    def stop(self) -> int:
        """Last position in the window (inclusive)."""
        return self.start + len(self.values) - 1

    @property
    def positions(self) -> np.ndarray:
        return np.arange(self.start, self.stop + 1)

    @property
    def is_symmetric(self) -> bool:
        return self.start == -self.stop

    @property
    def radius(self) -> int:
        if not self.is_symmetric:
            raise ValueError(f"window {self.start}..{self.stop} is not symmetric")
        return self.stop

    @property
    def origin_index(self) -> int:
        return -self.start

    def at(self, n: int):
        if not self.start <= n <= self.stop:
            raise IndexError(f"position {n} outside window {self.start}..{self.stop}")
        return self.values[n - self.start]

    def restrict(self, lo: int, hi: int):
        """Sub-window on positions lo..hi."""
        if lo < self.start or hi > self.stop or lo > hi + 1:
            raise ValueError(f"{lo}..{hi} is not inside {self.start}..{self.stop}")
        return type(self)(self.values[lo - self.start:hi - self.start + 1], lo)

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return self.start == other.start and np.array_equal(self.values, other.values)

    def __hash__(self):
        return hash((self.start, self.values.tobytes()))


def _default_start(n: int, start) -> int:
    if start is not None:
        return int(start)
    if n % 2 == 0:
        raise ValueError("even-length window needs an explicit start position")
    return -(n // 2)


class SpinSequence(_Window):
    """A window of +-1 spins, ``values[i]`` sitting at position ``start + i``."""

    __slots__ = ("values", "start")

    def __init__(self, values, start: int | None = None):
        arr = _frozen(values, np.int8)
        if arr.size and not np.all(np.abs(arr) == 1):
            raise ValueError("spins must be +1 or -1")
        self.values = arr
        self.start = _default_start(arr.size, start)

    def __neg__(self) -> "SpinSequence":
        return SpinSequence(-self.values, self.start)

    def __repr__(self):
        body = "".join("+" if v > 0 else "-" for v in self.values[:40])
        more = "..." if len(self) > 40 else ""
        return f"SpinSequence({body}{more}, start={self.start})"


class RealSequence(_Window):
    """A window of real scattering weights."""

    __slots__ = ("values", "start")

    def __init__(self, values, start: int | None = None):
        arr = _frozen(values, np.float64)
        if not np.all(np.isfinite(arr)):
            raise ValueError("weights must be finite")
        self.values = arr
        self.start = _default_start(arr.size, start)

    def __repr__(self):
        return f"RealSequence(n={len(self)}, start={self.start})"


@dataclass(frozen=True)
class SamplerSpec:
    model: Model
    radius: int
    seed: int

    def __post_init__(self):
        object.__setattr__(self, "model", Model.parse(self.model))
        if int(self.radius) != self.radius or self.radius < 0:
            raise ValueError(f"radius must be a nonnegative integer, got {self.radius}")
        if not 0 <= int(self.seed) < SEED_MODULUS:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        object.__setattr__(self, "radius", int(self.radius))
        object.__setattr__(self, "seed", int(self.seed))

    def rng(self) -> np.random.Generator:
        return np.random.Generator(np.random.PCG64(self.seed))

    def for_trial(self, trial: int) -> "SamplerSpec":
        return SamplerSpec(self.model, self.radius, trial_seed(self.seed, trial))


def trial_seed(base_seed: int, trial: int) -> int:
    """Seed of trial ``trial``: ``base + trial * 0x9E3779B97F4A7C15 mod 2**64``.

    Trial 0 reuses the base seed, so a one-trial run equals a plain sample.
    """
    if trial < 0:
        raise ValueError("trial index must be nonnegative")
    return (int(base_seed) + trial * TRIAL_SEED_STRIDE) % SEED_MODULUS


# -- deterministic members -------------------------------------------------

def _alternating(start: int, length: int, origin_sign: int) -> np.ndarray:
    pos = np.arange(start, start + length)
    return np.where(pos % 2 == 0, origin_sign, -origin_sign).astype(np.int8)


def toy_sequences(radius: int) -> tuple[SpinSequence, SpinSequence]:
    """The two 2-periodic sequences ``(u+, u-)`` on -radius..radius.

    ``u+`` has +1 at the origin and ``u- = S u+``.
    """
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    n = 2 * radius + 1
    return (SpinSequence(_alternating(-radius, n, 1), -radius),
            SpinSequence(_alternating(-radius, n, -1), -radius))


# -- samplers ----------------------------------------------------------------

def sample_dms(spec: SamplerSpec) -> SpinSequence:
    """Close-packed dimers with independent fair orientations on -N..N.

    Boxes occupy ``[2j-1, 2j]`` for an even realization (equal neighbours
    then sit at even positions) and ``[2j, 2j+1]`` for an odd one. Dimers cut
    by the window edge are drawn whole and cropped.
    """
    if spec.model is not Model.DMS:
        raise ValueError(f"sample_dms needs model=dms, got {spec.model.value}")
    n = spec.radius
    if n < 1:
        raise ValueError("DMS window needs radius >= 1")
    rng = spec.rng()
    even = bool(rng.integers(2))
    box_parity = 1 if even else 0
    first = -n if (-n - box_parity) % 2 == 0 else -n - 1
    boxes = (n - first) // 2 + 1
    flips = rng.integers(2, size=boxes)
    lead = np.where(flips == 0, 1, -1).astype(np.int8)
    seq = np.empty(2 * boxes, dtype=np.int8)
    seq[0::2] = lead
    seq[1::2] = -lead
    off = -n - first
    return SpinSequence(seq[off:off + 2 * n + 1], -n)


def sample_factor_y(spec: SamplerSpec) -> SpinSequence:
    """Factor image ``phi(w)`` of a DMS window of radius N+1."""
    if spec.model is not Model.FACTOR_Y:
        raise ValueError(f"sample_factor_y needs model=factor-y, got {spec.model.value}")
    w = sample_dms(SamplerSpec(Model.DMS, spec.radius + 1, spec.seed))
    return factor_phi(w)


def sample_toy(spec: SamplerSpec) -> SpinSequence:
    """One of the two toy sequences, each with probability 1/2."""
    if spec.model is not Model.TOY:
        raise ValueError(f"sample_toy needs model=toy, got {spec.model.value}")
    plus, minus = toy_sequences(spec.radius)
    return plus if spec.rng().integers(2) == 0 else minus


# Thue-Morse letters: 0 stands for "1", 1 for "1-bar"
TM_ONE, TM_BAR = 0, 1
TM_WEIGHTS = {TM_ONE: 0.2, TM_BAR: 1.4}


def tm_word(depth: int) -> np.ndarray:
    """``depth``-fold image of the letter 1 under 1 -> 1 1bar, 1bar -> 1bar 1."""
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    word = np.zeros(1, dtype=np.int8)
    for _ in range(depth):
        word = np.concatenate([word, 1 - word])
    return word


def format_tm_word(word) -> str:
    return " ".join("1" if c == TM_ONE else "1̄" for c in word)


def tm_cover_sample(spec: SamplerSpec) -> RealSequence:
    """Thue-Morse magnitudes 1/5, 7/5 with i.i.d. fair signs on -N..N.

    The word starts at position -N.
    """
    if spec.model is not Model.TM_COVER:
        raise ValueError(f"tm_cover_sample needs model=tmcover, got {spec.model.value}")
    length = 2 * spec.radius + 1
    depth = max(0, math.ceil(math.log2(length)))
    word = tm_word(depth)[:length]
    mags = np.where(word == TM_ONE, TM_WEIGHTS[TM_ONE], TM_WEIGHTS[TM_BAR])
    signs = np.where(spec.rng().integers(2, size=length) == 0, 1.0, -1.0)
    return RealSequence(mags * signs, -spec.radius)


_SAMPLERS = {
    Model.TOY: sample_toy,
    Model.DMS: sample_dms,
    Model.FACTOR_Y: sample_factor_y,
    Model.TM_COVER: tm_cover_sample,
}


def sample(spec: SamplerSpec):
    """Dispatch to the sampler of ``spec.model``."""
    return _SAMPLERS[spec.model](spec)


# -- structure of a window ---------------------------------------------------

def equal_neighbors(w: SpinSequence) -> np.ndarray:
    """Positions m in the window with ``w[m] == w[m+1]``."""
    v = w.values
    return np.flatnonzero(v[:-1] == v[1:]) + w.start


def classify(w: SpinSequence) -> SequenceClass:
    m = equal_neighbors(w)
    if m.size == 0:
        return SequenceClass.PERIODIC
    parities = set((m % 2).tolist())
    if parities == {0}:
        return SequenceClass.EVEN
    if parities == {1}:
        return SequenceClass.ODD
    return SequenceClass.MIXED


def shift(w, t: int):
    """``(S^t w)_n = w_{n+t}``.

    A symmetric window of radius N comes back symmetric with radius N-|t|.
    """
    t = int(t)
    if w.is_symmetric:
        n = w.radius
        if abs(t) > n:
            raise ValueError(f"cannot shift a radius-{n} window by {t}")
        r = n - abs(t)
        return type(w)(w.values[n - r + t:n + r + t + 1], -r)
    return type(w)(w.values, w.start - t)


def factor_phi(w: SpinSequence) -> SpinSequence:
    """``phi(w)_n = -w_n w_{n+1}``; symmetric radius N maps to radius N-1."""
    if len(w) < 2:
        raise ValueError("factor map needs at least two adjacent spins")
    v = (-(w.values[:-1].astype(np.int16) * w.values[1:])).astype(np.int8)
    out = SpinSequence(v, w.start)
    if w.is_symmetric:
        r = w.radius - 1
        out = out.restrict(-r, r)
    return out


def collapse_to_toy(w: SpinSequence) -> SpinSequence:
    """Map an even window to ``u+``, an odd one to ``u-``; periodic is fixed."""
    cls = classify(w)
    if cls is SequenceClass.MIXED:
        raise ValueError("window mixes even and odd dimer boundaries")
    if cls is SequenceClass.PERIODIC:
        return w
    sign = 1 if cls is SequenceClass.EVEN else -1
    return SpinSequence(_alternating(w.start, len(w), sign), w.start)
