import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from evoofluor.dataset import Dataset
from evoofluor.errors import (
    EmptyVotesError,
    InsufficientWavelengthsError,
    LengthMismatchError,
    MissingSampleError,
    ZeroReferenceError,
)
from evoofluor.features import (
    DegenerateProfileWarning,
    WavelengthVote,
    re_profile,
    relative_error,
    select_wavelengths,
    vote_wavelengths,
)
from evoofluor.spectra import EEM, SampleMeta, DEFAULT_GRID
from evoofluor.synth import SynthSpec, generate

from oracles import relative_error_loop


def test_re_identity():
    assert relative_error([1.0, 2.0, 3.0], [1.0, 2.0, 3.0]) == 0.0


def test_re_total_loss():
    assert relative_error([3.0, 4.0], [0.0, 0.0]) == 1.0


def test_re_hand_value():
    assert relative_error([1.0, 2.0, 2.0], [2.0, 2.0, 2.0]) == pytest.approx(1 / 9, abs=1e-15)


def test_re_errors():
    with pytest.raises(ZeroReferenceError):
        relative_error([0.0, 0.0], [1.0, 1.0])
    with pytest.raises(LengthMismatchError):
        relative_error([1.0, 2.0], [1.0])


def test_re_matches_loop_oracle(rng):
    for _ in range(200):
        n = int(rng.integers(1, 300))
        r, a = rng.random(n) + 1e-3, rng.random(n)
        assert abs(relative_error(r, a) - relative_error_loop(r, a)) <= 1e-12


@settings(max_examples=100)
@given(st.lists(st.floats(0.01, 100), min_size=1, max_size=30), st.floats(0.01, 100),
       st.integers(0, 2**31 - 1))
def test_re_scale_invariant(ref, c, seed):
    rng = np.random.default_rng(seed)
    ref = np.array(ref)
    aged = rng.random(ref.size) * 10
    assert relative_error(c * ref, c * aged) == pytest.approx(relative_error(ref, aged),
                                                              rel=1e-9, abs=1e-12)


@given(st.lists(st.floats(0.01, 100), min_size=1, max_size=30))
def test_re_nonnegative_and_zero_iff_equal(ref):
    ref = np.array(ref)
    assert relative_error(ref, ref) == 0
    aged = ref.copy()
    aged[0] += 1.0
    assert relative_error(ref, aged) > 0


def _two_step_dataset(fresh, aged, oil="A", step=9):
    eems = []
    for rep in (1, 2, 3):
        eems.append(EEM(DEFAULT_GRID, fresh, SampleMeta(oil, 0, replicate=rep)))
        eems.append(EEM(DEFAULT_GRID, aged, SampleMeta(oil, step, replicate=rep)))
    return Dataset(eems)


def test_profile_shape_and_identity(rng):
    base = rng.random(DEFAULT_GRID.shape) + 0.1
    prof = re_profile(_two_step_dataset(base, base), "A", 9)
    assert len(prof) == 36
    assert all(f.value == 0 for f in prof)


def test_profile_uses_replicate_means():
    fresh = np.ones(DEFAULT_GRID.shape)
    eems = [EEM(DEFAULT_GRID, fresh, SampleMeta("A", 0, replicate=r)) for r in (1, 2, 3)]
    for r, v in zip((1, 2, 3), (1.0, 2.0, 3.0)):
        eems.append(EEM(DEFAULT_GRID, fresh * v, SampleMeta("A", 9, replicate=r)))
    prof = re_profile(Dataset(eems), "A", 9)
    # mean aged = 2 * fresh, so RE = 1 on every row
    assert all(f.value == pytest.approx(1.0) for f in prof)
    # a single replicate: replicate 3 is 3 * fresh, RE = 4
    assert re_profile(Dataset(eems), "A", 9, replicate=3)[0].value == pytest.approx(4.0)


def test_profile_missing():
    base = np.ones(DEFAULT_GRID.shape)
    ds = _two_step_dataset(base, base)
    with pytest.raises(MissingSampleError):
        re_profile(ds, "A", 5)


def test_vote_single_changed_row():
    spec = SynthSpec(n_oils=3, designated_wavelength_nm=450.0)
    ds, truth = generate(spec)
    votes = vote_wavelengths(ds)
    assert [v.winning_wavelength_nm for v in votes] == [450.0] * 3
    assert all(truth.argmax_wavelength[v.oil_label] == 450.0 for v in votes)


def test_vote_degenerate_profile_warns():
    ds, _ = generate(SynthSpec(n_oils=2, change_rate=0.0))
    with pytest.warns(DegenerateProfileWarning):
        votes = vote_wavelengths(ds)
    assert [v.winning_wavelength_nm for v in votes] == [300.0, 300.0]


def test_vote_permutation_invariant():
    ds, _ = generate(SynthSpec(n_oils=6, noise_sigma=2.0, rng_seed=3))
    a = {v.oil_label: v.winning_wavelength_nm for v in vote_wavelengths(ds)}
    shuffled = Dataset(list(reversed(ds.eems)), ds.uv_records)
    b = {v.oil_label: v.winning_wavelength_nm
         for v in vote_wavelengths(shuffled, oils=list(reversed(ds.oils)))}
    assert a == b


def _votes(counts):
    out, i = [], 0
    for wl, n in counts.items():
        for _ in range(n):
            out.append(WavelengthVote(chr(65 + i % 24), wl))
            i += 1
    return out


def test_select_merges_adjacent():
    sel = select_wavelengths(_votes({480: 15, 300: 5, 310: 1, 320: 2, 450: 1}))
    assert sel.vote_counts == {480: 15, 300: 6, 320: 2, 450: 1}
    assert (sel.primary_nm, sel.secondary_nm) == (480, 300)
    assert sel.describe() == "480 nm (15), 300 nm (6), 320 nm (2), 450 nm (1)"


def test_select_tie_goes_low():
    sel = select_wavelengths(_votes({500: 3, 300: 3}))
    assert (sel.primary_nm, sel.secondary_nm) == (300, 500)


def test_select_single_wavelength():
    with pytest.raises(InsufficientWavelengthsError):
        select_wavelengths(_votes({400: 1}))
    sel = select_wavelengths(_votes({400: 1}), require_two=False)
    assert sel.primary_nm == 400 and sel.secondary_nm is None


def test_select_no_transitive_chaining():
    # 310 joins 300 (larger count); 320 is not pulled in through 310
    sel = select_wavelengths(_votes({300: 4, 310: 2, 320: 1}))
    assert sel.vote_counts == {300: 6, 320: 1}


def test_select_empty():
    with pytest.raises(EmptyVotesError):
        select_wavelengths([])
