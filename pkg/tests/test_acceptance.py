"""One line per acceptance criterion; every check inside a criterion must pass."""

import pytest

from dimerspec.verify import CRITERIA, run_acceptance

TITLES = {
    1: "exact closed-form suite",
    2: "dimer statistics at N=1e5",
    3: "dimer diffraction density and absent Bragg peaks",
    4: "factor Y mean, Bragg peaks and density",
    5: "dynamics: psi estimator and sigma spectrum",
    6: "Thue-Morse cover autocorrelation and flat density",
    7: "dynamical versus diffraction point spectrum",
}


@pytest.fixture(scope="module")
def report():
    return run_acceptance()


@pytest.mark.parametrize("criterion", sorted(CRITERIA))
def test_criterion(report, criterion):
    checks = report.by_criterion()[criterion]
    ok = all(c.passed for c in checks)
    print(f"\n{'PASS' if ok else 'FAIL'} criterion {criterion}: {TITLES[criterion]}")
    failed = [c.line() for c in checks if not c.passed]
    assert ok, "\n".join(failed)


def test_forced_failure_is_reported():
    r = run_acceptance(criteria=[6], tolerance_scale=0.0)
    assert not r.passed
