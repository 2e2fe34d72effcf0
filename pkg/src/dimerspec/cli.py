"""Command line front end: ``dimerspec {sample,autocorr,diffract,dynamics,verify}``.

Options come from built-in defaults, then an optional ``--config`` file of
``key=value`` lines, then command-line flags (highest priority).
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from . import io as dio
from .correlation import (BALANCED, WeightedComb, WeightMap, apply_weights, average_autocorr,
                          closed_autocorr, empirical_autocorr, lift_real)
from .dynamics import (CONTINUOUS_LABEL, doubling_gap, dynamical_point_spectrum,
                       eigen_relation_check, psi_estimate, sigma_autocorr,
                       sigma_density_empirical, sigma_spectral_density)
from .ensembles import (RNG_ALGORITHM, Model, RealSequence, SamplerSpec, classify, sample,
                        trial_seed)
from .exact import format_complex, parse_complex
from .spectra import (average_periodograms, closed_diffraction, detect_bragg_peaks,
                      fejer_density, peaks_to_point_part, periodogram)
from .verify import artifact_checks, run_acceptance

EMIT_KINDS = ("csv", "json", "svg")

DEFAULTS = {
    "model": "dms",
    "h_plus": "1",
    "h_minus": "-1",
    "radius": 10000,
    "seed": 12345,
    "trials": 1,
    "grid": 512,
    "n_max": 64,
    "outdir": "out",
    "emit": "csv,json,svg",
    "jobs": 1,
}

_INT_KEYS = ("radius", "seed", "trials", "grid", "n_max", "jobs")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    model: Model
    h: WeightMap
    radius: int
    seed: int
    trials: int
    grid: int
    n_max: int
    outdir: Path
    emit: frozenset
    jobs: int = 1

    def __post_init__(self):
        if self.radius < 1:
            raise ConfigError("radius must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must fit in 64 unsigned bits")
        for key in ("trials", "grid", "n_max", "jobs"):
            if getattr(self, key) < 1:
                raise ConfigError(f"{key} must be positive")
        if self.grid < 2:
            raise ConfigError("grid must be at least 2")
        bad = set(self.emit) - set(EMIT_KINDS)
        if bad:
            raise ConfigError(f"unknown emit kinds {sorted(bad)}")
        if self.model is Model.TM_COVER and not self.h.balanced:
            raise ConfigError("the Thue-Morse cover needs balanced weights (h_minus = -h_plus)")

    def require_lags(self):
        if self.n_max > 2 * self.radius:
            raise ConfigError(f"n_max={self.n_max} exceeds the window (2*radius)")

    def metadata(self) -> dict:
        return {
            "model": self.model.value,
            "h": f"{format_complex(self.h.h_plus)},{format_complex(self.h.h_minus)}",
            "N": self.radius,
            "seed": self.seed,
            "trials": self.trials,
            "G": self.grid,
            "n_max": self.n_max,
            "rng": RNG_ALGORITHM,
            "tool_version": __version__,
        }

    def spec(self, trial: int = 0) -> SamplerSpec:
        return SamplerSpec(self.model, self.radius, trial_seed(self.seed, trial))


METADATA_KEYS = ("model", "h", "N", "seed", "trials", "G", "n_max", "tool_version")


def read_config_file(path) -> dict:
    out = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    for num, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip().replace("-", "_")
        if not sep or key not in DEFAULTS:
            raise ConfigError(f"{path}:{num}: expected key=value with a known key, got {raw!r}")
        out[key] = value.strip()
    return out


def build_config(args) -> RunConfig:
    """Merge defaults, the config file and explicit flags."""
    merged = dict(DEFAULTS)
    if getattr(args, "config", None):
        merged.update(read_config_file(args.config))
    for key in DEFAULTS:
        value = getattr(args, key, None)
        if value is not None:
            merged[key] = value
    try:
        for key in _INT_KEYS:
            merged[key] = int(merged[key])
        h = WeightMap(parse_complex(str(merged["h_plus"])),
                      parse_complex(str(merged["h_minus"])))
        emit = frozenset(e.strip() for e in str(merged["emit"]).split(",") if e.strip())
        return RunConfig(Model.parse(merged["model"]), h, merged["radius"], merged["seed"],
                         merged["trials"], merged["grid"], merged["n_max"],
                         Path(merged["outdir"]), emit, merged["jobs"])
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def explicit_keys(args) -> set:
    keys = {k for k in DEFAULTS if getattr(args, k, None) is not None}
    if getattr(args, "config", None):
        keys |= set(read_config_file(args.config))
    return keys


# -- shared helpers ------------------------------------------------------------

def run_trials(fn, items, jobs: int = 1):
    if jobs <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def realize(cfg: RunConfig, trial: int):
    return sample(cfg.spec(trial))


def weighted(cfg: RunConfig, x):
    if isinstance(x, RealSequence):
        # balanced weights only: the cover's values are scaled by h_plus
        comb = lift_real(x)
        return WeightedComb(comb.values * complex(cfg.h.h_plus), comb.start)
    return apply_weights(x, cfg.h)


def _out(cfg: RunConfig, name: str) -> Path:
    return cfg.outdir / name


def _emit(cfg, kind):
    return kind in cfg.emit


# -- subcommands ---------------------------------------------------------------

def cmd_sample(cfg: RunConfig) -> list:
    meta = cfg.metadata()
    written = []
    for t in range(cfg.trials):
        x = realize(cfg, t)
        stem = "sample" if cfg.trials == 1 else f"sample_t{t:03d}"
        m = dict(meta, trial=t, trial_seed=trial_seed(cfg.seed, t))
        if _emit(cfg, "csv"):
            written.append(dio.write_sequence_csv(_out(cfg, f"{stem}.csv"), x, m))
            if not isinstance(x, RealSequence) and cfg.h != BALANCED:
                written.append(dio.write_comb_csv(_out(cfg, f"{stem}_comb.csv"),
                                                  weighted(cfg, x), m))
        if _emit(cfg, "json"):
            written.append(dio.write_json(_out(cfg, f"{stem}.json"),
                                          dio.sequence_to_json(x, m)))
    return written


def cmd_autocorr(cfg: RunConfig) -> list:
    cfg.require_lags()
    combs = run_trials(lambda t: weighted(cfg, realize(cfg, t)), range(cfg.trials), cfg.jobs)
    eta = average_autocorr(empirical_autocorr(c, cfg.n_max) for c in combs)
    closed = closed_autocorr(cfg.model, cfg.h)
    meta = dict(cfg.metadata(), normalization=eta.normalization)
    print(f"{'lag':>4} {'estimate':>12} {'exact':>10}")
    for n in range(min(cfg.n_max, 8) + 1):
        print(f"{n:>4} {eta[n].real:>12.6f} {float(closed(n)):>10.6f}")
    written = []
    if _emit(cfg, "csv"):
        written.append(dio.write_autocorr_csv(_out(cfg, "autocorr.csv"), eta, meta))
    if _emit(cfg, "json"):
        payload = dict(kind="autocorr", **dio.autocorr_to_json(eta, closed, meta))
        written.append(dio.write_json(_out(cfg, "autocorr.json"), payload))
    if _emit(cfg, "svg"):
        from .plotting import plot_autocorr
        written.append(plot_autocorr(_out(cfg, "autocorr.svg"), eta, closed,
                                     title=f"{cfg.model.value}, h={cfg.h}"))
    return written


def cmd_diffract(cfg: RunConfig) -> list:
    cfg.require_lags()
    combs = run_trials(lambda t: weighted(cfg, realize(cfg, t)), range(cfg.trials), cfg.jobs)
    pgram = average_periodograms(periodogram(c, cfg.grid) for c in combs)
    peaks = detect_bragg_peaks(combs, grid_size=cfg.grid, pgram=pgram)
    eta = average_autocorr(empirical_autocorr(c, cfg.n_max) for c in combs)
    density = fejer_density(eta, cfg.grid, peaks=peaks_to_point_part(peaks))
    exact = closed_diffraction(cfg.model, cfg.h)
    err = density.max_abs_error(exact.ac)
    meta = cfg.metadata()
    print(f"{'k':>5} {'bragg':>10} {'exact':>10} detected")
    for p in peaks:
        print(f"{str(p.k):>5} {p.intensity:>10.5f} {float(exact.point.intensity_at(p.k)):>10.5f}"
              f" {'yes' if p.detected else 'no'}")
    print(f"Fejer density max-abs error vs exact: {err:.4f}")
    written = []
    if _emit(cfg, "csv"):
        written.append(dio.write_grid_csv(_out(cfg, "periodogram.csv"), pgram, meta))
        written.append(dio.write_grid_csv(_out(cfg, "density.csv"), density, meta))
        rows = ((str(p.k), repr(p.intensity), repr(p.background), int(p.detected))
                for p in peaks)
        written.append(dio.write_csv(_out(cfg, "bragg.csv"),
                                     ["k", "value", "background", "detected"], rows, meta))
    if _emit(cfg, "json"):
        payload = {
            "kind": "diffraction",
            "metadata": meta,
            "exact": dio.measure_to_json(exact),
            "bragg": [{"k": str(p.k), "value": p.intensity, "background": p.background,
                       "detected": p.detected} for p in peaks],
            "density_max_error": err,
        }
        written.append(dio.write_json(_out(cfg, "diffraction.json"), payload))
    if _emit(cfg, "svg"):
        from .plotting import plot_diffraction
        written.append(plot_diffraction(_out(cfg, "diffraction.svg"), pgram, density, exact,
                                        peaks, title=f"{cfg.model.value}, h={cfg.h}"))
    return written


def cmd_dynamics(cfg: RunConfig) -> list:
    if cfg.model not in (Model.DMS, Model.TOY):
        raise ConfigError("dynamics runs on dms or toy windows")
    windows = run_trials(lambda t: realize(cfg, t), range(cfg.trials), cfg.jobs)
    exact = sigma_spectral_density()
    runs = []
    n_max = min(cfg.n_max, cfg.radius - 1)
    for t, w in enumerate(windows):
        single = sigma_density_empirical(w, n_max, cfg.grid).max_abs_error(exact)
        runs.append({"trial": t, "class": classify(w).value, "psi_hat": psi_estimate(w),
                     "eigen_residual": eigen_relation_check(w),
                     "sigma_density_error": single})
    pooled = sigma_density_empirical(windows, n_max, cfg.grid)
    spectrum = dynamical_point_spectrum(cfg.model)
    report = {
        "kind": "dynamics",
        "metadata": cfg.metadata(),
        "runs": runs,
        "pooled_sigma_density_error": pooled.max_abs_error(exact),
        "doubling_gap": doubling_gap(windows, n_max, cfg.grid) if cfg.grid % 2 == 0 else None,
        "point_spectrum": str(spectrum),
        "continuous_spectrum": CONTINUOUS_LABEL if cfg.model is Model.DMS else None,
    }
    for r in runs[:10]:
        print(f"trial {r['trial']:>3}: {r['class']:>8} psi_hat={r['psi_hat']:+.4f} "
              f"residual={r['eigen_residual']:.4f}")
    print(f"pooled sigma density max-abs error: {report['pooled_sigma_density_error']:.4f}")
    print(f"dynamical point spectrum: {spectrum}")
    written = []
    if _emit(cfg, "csv"):
        written.append(dio.write_grid_csv(_out(cfg, "sigma_density.csv"), pooled,
                                          cfg.metadata()))
        written.append(dio.write_autocorr_csv(_out(cfg, "sigma_autocorr.csv"),
                                              sigma_autocorr(windows, n_max), cfg.metadata()))
    if _emit(cfg, "json"):
        written.append(dio.write_json(_out(cfg, "dynamics.json"), report))
    if _emit(cfg, "svg"):
        from .plotting import plot_sigma_density
        written.append(plot_sigma_density(_out(cfg, "sigma_density.svg"), pooled, exact,
                                          title=f"{cfg.model.value}, N={cfg.radius}"))
    return written


def cmd_verify(cfg: RunConfig, args) -> int:
    explicit = explicit_keys(args)
    model = cfg.model if "model" in explicit else None
    report = run_acceptance(model=model, tolerance_scale=args.tol_scale)
    if args.artifact:
        metas = []
        payloads = []
        for path in args.artifact:
            payload = dio.read_json(path)
            payloads.append(payload)
            metas.append((path, payload.get("metadata", {})))
        first_path, first = metas[0]
        for path, meta in metas[1:]:
            dio.check_metadata(first, meta, METADATA_KEYS, source=str(path))
        wanted = cfg.metadata()
        keymap = {"model": "model", "h_plus": "h", "h_minus": "h", "radius": "N",
                  "seed": "seed", "trials": "trials", "grid": "G", "n_max": "n_max"}
        keys = sorted({keymap[k] for k in explicit if k in keymap} | {"tool_version"})
        dio.check_metadata(wanted, first, keys, source=str(first_path))
        for payload in payloads:
            report.checks.extend(artifact_checks(payload, args.tol_scale))
    for line in report.lines():
        print(line)
    print(f"overall: {'PASS' if report.passed else 'FAIL'} "
          f"({sum(c.passed for c in report.checks)}/{len(report.checks)} checks)")
    if _emit(cfg, "json") and "outdir" in explicit:
        dio.write_json(_out(cfg, "verify.json"), report.as_dict())
    return 0 if report.passed else 1


# -- argument parsing ----------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key=value file; flags override it")
    common.add_argument("--model", help="toy, dms, factor-y or tmcover (default dms)")
    common.add_argument("--h-plus", dest="h_plus", help="weight of +1 spins, e.g. 1 or 0.5+1/3i")
    common.add_argument("--h-minus", dest="h_minus", help="weight of -1 spins (default -1)")
    common.add_argument("--radius", "-N", type=int, help="window radius N (positions -N..N)")
    common.add_argument("--seed", type=int, help="64-bit base seed")
    common.add_argument("--trials", type=int, help="independent windows to average")
    common.add_argument("--grid", "-G", type=int, help="wavenumber grid size on [0,1)")
    common.add_argument("--n-max", dest="n_max", type=int, help="largest lag")
    common.add_argument("--outdir", "-o", help="output directory")
    common.add_argument("--emit", help="comma list of csv,json,svg")
    common.add_argument("--jobs", type=int, help="threads for independent trials")

    parser = argparse.ArgumentParser(
        prog="dimerspec",
        description="Simulate close-packed dimers on the line and compare their "
                    "autocorrelation, diffraction and dynamical spectrum with closed forms.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("sample", parents=[common], help="write realizations")
    sub.add_parser("autocorr", parents=[common], help="estimate eta(n)")
    sub.add_parser("diffract", parents=[common],
                   help="periodogram, Bragg peaks and Fejer density")
    sub.add_parser("dynamics", parents=[common], help="psi estimator and sigma spectrum")
    ver = sub.add_parser("verify", parents=[common], help="run the acceptance suite")
    ver.add_argument("--tol-scale", type=float, default=1.0,
                     help="multiply every statistical tolerance (0 forces failures)")
    ver.add_argument("--artifact", action="append", default=[],
                     help="JSON artifact from autocorr/diffract to check as well")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = build_config(args)
    except ConfigError as exc:
        parser.error(str(exc))
    try:
        if args.command == "verify":
            return cmd_verify(cfg, args)
        handler = {"sample": cmd_sample, "autocorr": cmd_autocorr,
                   "diffract": cmd_diffract, "dynamics": cmd_dynamics}[args.command]
        for path in handler(cfg):
            print(f"wrote {path}")
    except dio.MetadataMismatch as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ConfigError as exc:
        parser.error(str(exc))
    except OSError as exc:
        where = getattr(exc, "filename", None) or ""
        print(f"error: I/O failure {where}: {exc.strerror or exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
