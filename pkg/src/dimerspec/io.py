"""CSV and JSON serialization of windows, autocorrelations and measures.

CSV files start with ``# key=value`` metadata lines, then a header row; they
use ``,`` separators, ``.`` decimals and LF line endings. Floats are written
with ``repr`` so they read back bit-exactly.
"""

from __future__ import annotations

import csv
import json
from fractions import Fraction
from pathlib import Path

import numpy as np

from .correlation import AutocorrSeq, ClosedFormAutocorr, WeightedComb
from .ensembles import RealSequence, SpinSequence
from .spectra import GridDensity, MixedMeasure, Periodogram, PointPart, TrigDensity


class MetadataMismatch(ValueError):
    """Two artifacts (or an artifact and a run) disagree on their metadata."""


def _num(x):
    if isinstance(x, (int, np.integer)):
        return int(x)
    return float(x)


def _exact_str(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, int):
        return str(x)
    return None


def _read_comment_block(lines):
    meta, body = {}, []
    for line in lines:
        if line.startswith("#"):
            key, sep, value = line[1:].strip().partition("=")
            if sep:
                meta[key.strip()] = value.strip()
        elif line.strip():
            body.append(line)
    return meta, body


def write_csv(path, header, rows, metadata=None):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        for key, value in (metadata or {}).items():
            fh.write(f"# {key}={value}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
    return path


def read_csv(path):
    """Return ``(metadata, header, rows)`` with rows as lists of strings."""
    with open(path, newline="") as fh:
        meta, body = _read_comment_block(fh.read().split("\n"))
    reader = csv.reader(body)
    header = next(reader)
    return meta, header, [row for row in reader]


def write_json(path, payload):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=False)
        fh.write("\n")
    return path


def read_json(path):
    with open(path) as fh:
        return json.load(fh)


# -- windows -----------------------------------------------------------------

def _value_repr(x):
    return str(int(x)) if isinstance(x, (np.integer, int)) else repr(float(x))


def write_sequence_csv(path, seq, metadata=None):
    rows = ((int(p), _value_repr(v)) for p, v in zip(seq.positions, seq.values))
    return write_csv(path, ["position", "value"], rows, metadata)


def read_sequence_csv(path):
    meta, header, rows = read_csv(path)
    if header != ["position", "value"]:
        raise ValueError(f"{path}: expected header position,value, got {header}")
    positions = [int(r[0]) for r in rows]
    _check_contiguous(path, positions)
    start = positions[0] if positions else 0
    if all("." not in r[1] and "e" not in r[1].lower() for r in rows):
        return SpinSequence([int(r[1]) for r in rows], start), meta
    return RealSequence([float(r[1]) for r in rows], start), meta


def _check_contiguous(path, positions):
    if positions and positions != list(range(positions[0], positions[0] + len(positions))):
        raise ValueError(f"{path}: positions are not contiguous")


def sequence_to_json(seq, metadata=None) -> dict:
    return {
        "radius": seq.radius if seq.is_symmetric else None,
        "origin_index": seq.origin_index,
        "values": [_num(v) for v in seq.values],
        "metadata": dict(metadata or {}),
    }


def sequence_from_json(payload):
    values = payload["values"]
    start = -int(payload["origin_index"])
    if all(isinstance(v, int) for v in values):
        return SpinSequence(values, start)
    return RealSequence(values, start)


def write_comb_csv(path, comb: WeightedComb, metadata=None):
    rows = ((int(p), repr(float(z.real)), repr(float(z.imag)))
            for p, z in zip(comb.positions, comb.values))
    return write_csv(path, ["position", "re", "im"], rows, metadata)


def read_comb_csv(path):
    meta, header, rows = read_csv(path)
    if header != ["position", "re", "im"]:
        raise ValueError(f"{path}: expected header position,re,im, got {header}")
    positions = [int(r[0]) for r in rows]
    _check_contiguous(path, positions)
    vals = [complex(float(r[1]), float(r[2])) for r in rows]
    return WeightedComb(vals, positions[0] if positions else 0), meta


# -- autocorrelations --------------------------------------------------------

def write_autocorr_csv(path, a: AutocorrSeq, metadata=None):
    rows = ((n, repr(float(z.real)), repr(float(z.imag)))
            for n, z in enumerate(a.coefficients))
    return write_csv(path, ["lag", "re", "im"], rows, metadata)


def read_autocorr_csv(path):
    meta, header, rows = read_csv(path)
    if header != ["lag", "re", "im"]:
        raise ValueError(f"{path}: expected header lag,re,im, got {header}")
    coef = [complex(float(r[1]), float(r[2])) for r in rows]
    return AutocorrSeq(coef, meta.get("normalization", ""), int(meta.get("trials", 1))), meta


def autocorr_to_json(a: AutocorrSeq, closed: ClosedFormAutocorr | None = None,
                     metadata=None) -> dict:
    out = {
        "max_lag": a.max_lag,
        "normalization": a.normalization,
        "trials": a.trials,
        "window_length": a.window_length,
        "re": [float(z.real) for z in a.coefficients],
        "im": [float(z.imag) for z in a.coefficients],
        "metadata": dict(metadata or {}),
    }
    if closed is not None:
        vals = closed.values(a.max_lag)
        out["exact"] = [float(v) for v in vals]
        out["exact_rational"] = [_exact_str(v) for v in vals]
    return out


# -- measures and grids --------------------------------------------------------

def measure_to_json(m: MixedMeasure, metadata=None) -> dict:
    point = {"q": m.point.q, "intensities": [float(x) for x in m.point.intensities]}
    ac = {"coeffs": [float(x) for x in m.ac.coefficients]}
    exact_p = [_exact_str(x) for x in m.point.intensities]
    exact_a = [_exact_str(x) for x in m.ac.coefficients]
    if all(s is not None for s in exact_p):
        point["exact"] = exact_p
    if all(s is not None for s in exact_a):
        ac["exact"] = exact_a
    out = {"point": point, "ac": ac}
    if metadata:
        out["metadata"] = dict(metadata)
    return out


def measure_from_json(payload) -> MixedMeasure:
    p, a = payload["point"], payload["ac"]
    ints = [Fraction(s) for s in p["exact"]] if "exact" in p else p["intensities"]
    coeffs = [Fraction(s) for s in a["exact"]] if "exact" in a else a["coeffs"]
    return MixedMeasure(PointPart(p["q"], tuple(ints)), TrigDensity(tuple(coeffs)))


def write_grid_csv(path, grid, metadata=None):
    """``k,value`` rows for a :class:`Periodogram` or :class:`GridDensity`."""
    if not isinstance(grid, (Periodogram, GridDensity)):
        raise TypeError(f"cannot write {type(grid).__name__} as k,value")
    rows = ((repr(float(k)), repr(float(v))) for k, v in zip(grid.k, grid.values))
    return write_csv(path, ["k", "value"], rows, metadata)


def read_grid_csv(path):
    meta, header, rows = read_csv(path)
    if header != ["k", "value"]:
        raise ValueError(f"{path}: expected header k,value, got {header}")
    k = np.array([float(r[0]) for r in rows])
    v = np.array([float(r[1]) for r in rows])
    return k, v, meta


def check_metadata(expected: dict, found: dict, keys=None, source="artifact"):
    """Raise :class:`MetadataMismatch` listing every differing key."""
    keys = keys or sorted(expected)
    bad = [f"{k}: expected {expected.get(k)!s}, found {found.get(k)!s}"
           for k in keys if str(expected.get(k)) != str(found.get(k))]
    if bad:
        raise MetadataMismatch(f"{source} metadata mismatch: " + "; ".join(bad))
