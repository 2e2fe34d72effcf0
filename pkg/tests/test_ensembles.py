import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dimerspec.ensembles import (Model, RealSequence, SamplerSpec, SequenceClass, SpinSequence,
                                 classify, collapse_to_toy, equal_neighbors, factor_phi,
                                 format_tm_word, sample, sample_dms, sample_factor_y,
                                 sample_toy, shift, tm_cover_sample, tm_word, toy_sequences,
                                 trial_seed)

from conftest import dms

spin_lists = st.lists(st.sampled_from([1, -1]), min_size=3, max_size=41)


def brute_tm(depth):
    # substitute letter by letter, written out independently of tm_word
    word = "a"
    for _ in range(depth):
        word = "".join("ab" if ch == "a" else "ba" for ch in word)
    return [0 if ch == "a" else 1 for ch in word]


class TestWindows:
    def test_default_start_is_symmetric(self, spins):
        w = spins("+-+")
        assert w.radius == 1 and w.start == -1 and w.origin_index == 1

    def test_even_length_needs_start(self):
        with pytest.raises(ValueError):
            SpinSequence([1, -1])

    def test_rejects_non_spin_values(self):
        with pytest.raises(ValueError):
            SpinSequence([1, 0, 1])

    def test_values_are_read_only(self, spins):
        w = spins("+-+")
        with pytest.raises(ValueError):
            w.values[0] = -1

    def test_asymmetric_radius_raises(self, spins):
        w = spins("+--++-", start=-2)
        assert not w.is_symmetric
        with pytest.raises(ValueError):
            w.radius

    def test_at_and_restrict(self, spins):
        w = spins("+--++-", start=-2)
        assert w.at(-2) == 1 and w.at(3) == -1
        assert list(w.restrict(-1, 1).values) == [-1, -1, 1]


class TestToy:
    def test_radius_one(self):
        up, um = toy_sequences(1)
        assert list(up.values) == [-1, 1, -1]
        assert list(um.values) == [1, -1, 1]

    def test_radius_zero(self):
        up, um = toy_sequences(0)
        assert list(up.values) == [1] and list(um.values) == [-1]

    def test_sampler_picks_one_of_two(self):
        up, um = toy_sequences(5)
        for s in range(20):
            w = sample_toy(SamplerSpec(Model.TOY, 5, s))
            assert w == up or w == um


class TestClassify:
    def test_alternating_is_periodic(self, spins):
        assert classify(spins("+-+-+")) is SequenceClass.PERIODIC

    def test_odd_example(self, spins):
        w = spins("+--++-", start=-2)
        assert list(equal_neighbors(w)) == [-1, 1]
        assert classify(w) is SequenceClass.ODD

    def test_mixed_example(self, spins):
        w = spins("++---+", start=-2)
        assert classify(w) is SequenceClass.MIXED

    def test_even(self, spins):
        assert classify(spins("++--+", start=0)) is SequenceClass.EVEN


class TestDms:
    def test_small_window_single_parity(self):
        for s in range(50):
            assert classify(dms(3, s)) is not SequenceClass.MIXED

    def test_large_window_never_mixed_or_periodic(self):
        for s in range(30):
            assert classify(dms(8, s)) in (SequenceClass.EVEN, SequenceClass.ODD)

    def test_deterministic(self):
        assert dms(3, 42) == dms(3, 42)
        assert np.array_equal(dms(1000, 7).values, dms(1000, 7).values)

    def test_length(self):
        assert len(dms(1000, 1)) == 2001

    def test_radius_zero_rejected(self):
        with pytest.raises(ValueError):
            sample_dms(SamplerSpec(Model.DMS, 0, 1))

    def test_balance(self):
        assert abs(dms(100_000, 3).values.mean()) <= 0.02

    def test_parity_frequencies(self):
        n = 10_000
        even = sum(classify(dms(8, s)) is SequenceClass.EVEN for s in range(n))
        assert abs(even / n - 0.5) <= 0.02

    def test_dimers_are_unlike_pairs(self):
        w = dms(200, 11)
        m = equal_neighbors(w)
        # between consecutive equal-neighbour bonds the gap is even
        assert np.all(np.diff(m) % 2 == 0)


class TestShift:
    def test_zero_is_identity(self):
        w = dms(10, 1)
        assert shift(w, 0) == w

    def test_toy_shift_swaps(self):
        up, um = toy_sequences(6)
        assert shift(up, 1) == um.restrict(-5, 5)

    def test_shift_flips_parity(self):
        for s in range(20):
            w = dms(30, s)
            other = {SequenceClass.EVEN: SequenceClass.ODD, SequenceClass.ODD: SequenceClass.EVEN}
            assert classify(shift(w, 1)) is other[classify(w)]

    def test_asymmetric_moves_start(self, spins):
        w = spins("+--++-", start=-2)
        assert shift(w, 1).start == -3 and shift(w, 1).at(-3) == 1


class TestFactor:
    def test_example(self, spins):
        v = factor_phi(spins("+--++-", start=-2))
        assert list(v.values) == [1, -1, 1, -1, 1] and v.start == -2

    def test_symmetric_radius_drops(self):
        assert factor_phi(dms(10, 2)).radius == 9

    def test_toy_maps_to_ones(self):
        up, _ = toy_sequences(4)
        assert np.all(factor_phi(up).values == 1)

    def test_factor_sample_has_full_parity_class(self):
        v = sample_factor_y(SamplerSpec(Model.FACTOR_Y, 500, 4))
        ones = v.values == 1
        pos = v.positions
        assert ones[pos % 2 == 0].all() or ones[pos % 2 == 1].all()

    def test_factor_mean(self):
        v = sample_factor_y(SamplerSpec(Model.FACTOR_Y, 100_000, 8))
        assert abs(v.values.mean() - 0.5) <= 0.02

    def test_factor_sample_matches_composition_radius(self):
        assert sample_factor_y(SamplerSpec(Model.FACTOR_Y, 20, 1)).radius == 20

    @given(spin_lists)
    def test_phi_ignores_global_flip(self, vals):
        w = SpinSequence(vals, 0)
        assert factor_phi(w) == factor_phi(-w)

    @given(spin_lists, st.integers(-1, 1))
    def test_phi_commutes_with_shift(self, vals, t):
        w = SpinSequence(vals, 0)
        a, b = factor_phi(shift(w, t)), shift(factor_phi(w), t)
        lo, hi = max(a.start, b.start), min(a.stop, b.stop)
        assert hi >= lo
        assert a.restrict(lo, hi) == b.restrict(lo, hi)


class TestCollapse:
    def test_even_goes_to_u_plus(self, spins):
        w = spins("++--+", start=0)
        assert list(collapse_to_toy(w).values) == [1, -1, 1, -1, 1]

    def test_periodic_fixed(self, spins):
        w = spins("+-+-+")
        assert collapse_to_toy(w) is w

    def test_mixed_rejected(self, spins):
        with pytest.raises(ValueError):
            collapse_to_toy(spins("++---+", start=-2))

    def test_equivariance(self):
        for s in range(20):
            w = dms(20, s)
            a = collapse_to_toy(shift(w, 1))
            b = shift(collapse_to_toy(w), 1)
            assert a == b


class TestThueMorse:
    def test_depth_zero_and_two(self):
        assert format_tm_word(tm_word(0)) == "1"
        assert format_tm_word(tm_word(2)) == "1 1̄ 1̄ 1"

    @pytest.mark.parametrize("depth", range(0, 11))
    def test_matches_substitution(self, depth):
        assert list(tm_word(depth)) == brute_tm(depth)

    @pytest.mark.parametrize("depth", range(1, 11))
    def test_balanced_letters(self, depth):
        w = np.asarray(tm_word(depth))
        assert (w == 0).sum() == (w == 1).sum()

    def test_cover_values(self):
        x = tm_cover_sample(SamplerSpec(Model.TM_COVER, 2**14, 5))
        assert isinstance(x, RealSequence)
        assert set(np.round(np.abs(x.values), 12)) == {0.2, 1.4}
        assert abs(np.mean(x.values**2) - 1.0) <= 0.02

    def test_cover_follows_word_from_left_edge(self):
        x = tm_cover_sample(SamplerSpec(Model.TM_COVER, 8, 1))
        mags = np.abs(x.values) > 1
        assert list(mags.astype(int)) == brute_tm(5)[:17]

    def test_cover_deterministic(self):
        spec = SamplerSpec(Model.TM_COVER, 100, 9)
        assert np.array_equal(tm_cover_sample(spec).values, tm_cover_sample(spec).values)


class TestSpecs:
    def test_trial_zero_is_base(self):
        assert trial_seed(99, 0) == 99
        assert SamplerSpec(Model.DMS, 5, 99).for_trial(0).seed == 99

    def test_trials_differ(self):
        seeds = {trial_seed(1, t) for t in range(100)}
        assert len(seeds) == 100 and all(0 <= s < 2**64 for s in seeds)

    def test_model_aliases(self):
        assert Model.parse("factory") is Model.FACTOR_Y
        assert Model.parse("tm") is Model.TM_COVER
        with pytest.raises(ValueError):
            Model.parse("ising")

    def test_bad_seed(self):
        with pytest.raises(ValueError):
            SamplerSpec(Model.DMS, 5, -1)

    @settings(max_examples=20, deadline=None)
    @given(st.sampled_from(list(Model)), st.integers(1, 50), st.integers(0, 2**64 - 1))
    def test_dispatch_window(self, model, radius, seed):
        x = sample(SamplerSpec(model, radius, seed))
        assert x.radius == radius
