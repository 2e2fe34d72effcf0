import pytest

from dimerspec.ensembles import Model, SamplerSpec, SpinSequence


@pytest.fixture
def spins():
    """Build a SpinSequence from a '+-' string starting at ``start``."""
    def make(text, start=None):
        return SpinSequence([1 if ch == "+" else -1 for ch in text], start)
    return make


def dms(radius, seed):
    from dimerspec.ensembles import sample_dms
    return sample_dms(SamplerSpec(Model.DMS, radius, seed))
