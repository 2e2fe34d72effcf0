from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dimerspec.correlation import (BALANCED, AutocorrSeq, WeightMap, apply_weights,
                                   average_autocorr, closed_autocorr, empirical_autocorr,
                                   empirical_mean, lift_real, sigma_correlation_closed,
                                   sigma_correlation_empirical, sigma_from_eta)
from dimerspec.ensembles import Model, RealSequence, toy_sequences
from dimerspec.exact import QComplex, parse_complex

from conftest import dms


def direct_autocorr(x, n):
    # unbiased lag-n average written as a plain loop
    x = list(x)
    L = len(x)
    return sum(x[m + n] * np.conj(x[m]) for m in range(L - n)) / (L - n)


complex_vals = st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False)


class TestWeights:
    def test_identity_on_spins(self, spins):
        w = spins("+-+--")
        assert np.array_equal(apply_weights(w, BALANCED).values, w.values)

    def test_constant(self, spins):
        assert np.all(apply_weights(spins("+-+--"), WeightMap(1, 1)).values == 1)

    def test_substitution(self, spins):
        assert list(apply_weights(spins("+-+"), WeightMap(1, 0)).values) == [1, 0, 1]

    def test_lift_real_copies(self):
        c = lift_real(RealSequence([0.2, -1.4], 0))
        assert list(c.values) == [0.2, -1.4]

    def test_parse(self):
        h = WeightMap.parse("1/2+i", "-2")
        assert h.h_plus == QComplex(Fraction(1, 2), 1) and h.h_minus == QComplex(-2)
        assert not h.balanced and WeightMap.parse("i", "-i").balanced


class TestEmpirical:
    def test_alternating_lag_one(self):
        up, _ = toy_sequences(50)
        a = empirical_autocorr(up, 3)
        assert a[1] == -1 and a[0] == 1 and a[2] == 1

    def test_lag_zero_is_one_for_spins(self):
        assert empirical_autocorr(dms(500, 3), 5)[0] == 1

    def test_lag_zero_is_mean_square(self):
        x = RealSequence([0.2, -1.4, 1.4, 0.2, -0.2], 0)
        a = empirical_autocorr(x, 2)
        assert a[0] == pytest.approx(np.mean(x.values**2), abs=1e-15)

    def test_range_check(self, spins):
        with pytest.raises(ValueError):
            empirical_autocorr(spins("+-+"), 3)

    @settings(max_examples=40, deadline=None)
    @given(st.lists(complex_vals, min_size=2, max_size=30), st.data())
    def test_matches_direct_sum(self, vals, data):
        n_max = data.draw(st.integers(0, len(vals) - 1))
        from dimerspec.correlation import WeightedComb
        a = empirical_autocorr(WeightedComb(vals, 0), n_max)
        for n in range(n_max + 1):
            assert a[n] == pytest.approx(direct_autocorr(vals, n), rel=1e-9, abs=1e-9)
            assert a[-n] == pytest.approx(np.conj(a[n]))

    def test_fft_path_matches_direct(self):
        rng = np.random.default_rng(0)
        from dimerspec.correlation import WeightedComb
        x = rng.normal(size=3001) + 1j * rng.normal(size=3001)
        a = empirical_autocorr(WeightedComb(x, 0), 2000)
        for n in (0, 1, 7, 1500, 2000):
            assert a[n] == pytest.approx(direct_autocorr(x, n), rel=1e-9, abs=1e-9)

    def test_averaging(self):
        a = AutocorrSeq(np.array([1, 0.5]), "unbiased", 1, 10)
        b = AutocorrSeq(np.array([1, -0.5]), "unbiased", 1, 10)
        m = average_autocorr([a, b])
        assert m.trials == 2 and m[1] == 0

    def test_minus_pattern(self):
        a = AutocorrSeq(np.array([1.0, 0.5, 0.5]), "unbiased", 1, 10)
        assert np.allclose(a.minus(lambda n: 0.5).coefficients, [0.5, 0, 0])

    def test_dms_statistics(self):
        w = dms(100_000, 21)
        a = empirical_autocorr(w, 32)
        assert abs(a[1] + 0.5) <= 0.01
        assert abs(empirical_mean(w)) <= 0.02

    def test_mean_all_ones(self, spins):
        assert empirical_mean(apply_weights(spins("+-+"), WeightMap(1, 1))) == 1


class TestClosed:
    def test_dms_balanced(self):
        eta = closed_autocorr(Model.DMS)
        assert [eta(n) for n in range(-3, 4)] == [0, 0, Fraction(-1, 2), 1, Fraction(-1, 2), 0, 0]

    def test_factor_balanced(self):
        eta = closed_autocorr(Model.FACTOR_Y)
        assert eta(0) == 1 and eta(2) == eta(-6) == Fraction(1, 2) and eta(3) == 0

    def test_dms_constant(self):
        eta = closed_autocorr(Model.DMS, WeightMap(1, 1))
        assert all(eta(n) == 1 for n in range(-5, 6))

    def test_toy(self):
        eta = closed_autocorr(Model.TOY)
        assert eta(0) == 1 and eta(1) == -1 and eta(2) == 1

    def test_tm_cover(self):
        eta = closed_autocorr(Model.TM_COVER)
        assert eta(0) == 1 and eta(1) == 0
        with pytest.raises(ValueError):
            closed_autocorr(Model.TM_COVER, WeightMap(1, 0))

    def test_dms_generic_weights_by_hand(self):
        hp, hm = parse_complex("1+i"), parse_complex("2")
        eta = closed_autocorr(Model.DMS, WeightMap(hp, hm))
        A = (hp + hm).abs2() / 4
        B = (hp - hm).abs2() / 4
        assert eta(0) == A + B and eta(1) == A - B / 2 and eta(5) == A

    def test_dms_closed_matches_simulation_for_complex_weights(self):
        h = WeightMap(parse_complex("1+i"), parse_complex("2"))
        a = empirical_autocorr(apply_weights(dms(50_000, 2), h), 4)
        eta = closed_autocorr(Model.DMS, h)
        for n in range(5):
            assert abs(a[n] - complex(eta(n))) < 0.05

    def test_factor_closed_matches_simulation_for_unbalanced(self):
        from dimerspec.ensembles import SamplerSpec, sample_factor_y
        h = WeightMap(1, 0)
        v = sample_factor_y(SamplerSpec(Model.FACTOR_Y, 50_000, 3))
        a = empirical_autocorr(apply_weights(v, h), 4)
        eta = closed_autocorr(Model.FACTOR_Y, h)
        for n in range(5):
            assert abs(a[n] - complex(eta(n))) < 0.02


class TestSigma:
    def test_closed_values(self):
        c = sigma_correlation_closed()
        assert c(0) == 1 and c(2) == c(-2) == Fraction(-1, 2) and c(1) == 0 and c(3) == 0

    def test_identity(self):
        eta = closed_autocorr(Model.DMS)
        c = sigma_correlation_closed()
        assert all(sigma_from_eta(eta, n) == c(n) for n in range(-8, 9))
        assert 2 * eta(1) + eta(2) + eta(0) == 0

    def test_empirical(self):
        c = sigma_correlation_empirical(dms(100_000, 5), 4)
        assert abs(c[0] - 1) <= 0.02 and abs(c[2] + 0.5) <= 0.02 and abs(c[1]) <= 0.02

    def test_empirical_direct(self, spins):
        w = spins("+--++-+", start=-3)
        sig = [w.values[i] + w.values[i + 1] for i in range(6)]
        c = sigma_correlation_empirical(w, 2)
        for n in range(3):
            assert c[n] == pytest.approx(direct_autocorr(sig, n))
