"""Close-packed dimers on the line: simulation, autocorrelation and diffraction."""

__version__ = "0.1.0"

from .correlation import (BALANCED, AutocorrSeq, ClosedFormAutocorr, WeightedComb,  # noqa: E402
                          WeightMap, apply_weights, closed_autocorr, empirical_autocorr,
                          empirical_mean, lift_real)
from .ensembles import (Model, RealSequence, SamplerSpec, SequenceClass,  # noqa: E402
                        SpinSequence, classify, collapse_to_toy, factor_phi, sample,
                        sample_dms, sample_factor_y, shift, tm_cover_sample, tm_word,
                        toy_sequences)
from .spectra import (MixedMeasure, Periodogram, PointPart, TrigDensity,  # noqa: E402
                      bragg_estimate, closed_diffraction, evaluate, fejer_density,
                      period_mass, periodogram, poisson_lattice_transform)

__all__ = [
    "AutocorrSeq", "BALANCED", "ClosedFormAutocorr", "MixedMeasure", "Model",
    "Periodogram", "PointPart", "RealSequence", "SamplerSpec", "SequenceClass",
    "SpinSequence", "TrigDensity", "WeightMap", "WeightedComb", "apply_weights",
    "bragg_estimate", "classify", "closed_autocorr", "closed_diffraction",
    "collapse_to_toy", "empirical_autocorr", "empirical_mean", "evaluate",
    "factor_phi", "fejer_density", "lift_real", "period_mass", "periodogram",
    "poisson_lattice_transform", "sample", "sample_dms", "sample_factor_y", "shift",
    "tm_cover_sample", "tm_word", "toy_sequences",
]
