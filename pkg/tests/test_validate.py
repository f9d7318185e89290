import numpy as np
import pytest

from evoofluor.dataset import Dataset
from evoofluor.errors import MissingSampleError, ProtocolError, ValidationError
from evoofluor.learn import ModelSpec
from evoofluor.synth import SynthSpec, generate
from evoofluor.uvparams import Criterion
from evoofluor.validate import (
    RESULT_COLUMNS,
    TRAINING_CONFIGS,
    ValidationProtocol,
    all_protocols,
    build_sets,
    parse_protocols,
    report,
    run_protocol,
)

FLIPS = tuple([4, 5, 6, 7, 8, 9] * 4)


@pytest.fixture(scope="module")
def mixed():
    """Flip steps spread over 4..9 so every training configuration has both classes."""
    ds, _ = generate(SynthSpec(designated_wavelength_nm=480.0, label_flip_step=FLIPS,
                               noise_sigma=2.0, rng_seed=3))
    return ds


def test_protocol_validation_steps():
    for t in TRAINING_CONFIGS:
        assert ValidationProtocol(t, 1).validation_step == 9
        assert ValidationProtocol(t, 2).validation_step == t[-1] + 1
    assert len(all_protocols()) == 8


@pytest.mark.parametrize("steps, method", [((4, 6), 1), ((3, 4, 5), 1), ((4, 5), 3), ((4, 5, 6, 7, 8, 9), 1)])
def test_bad_protocols(steps, method):
    with pytest.raises(ProtocolError):
        ValidationProtocol(steps, method)


def test_parse_protocols():
    assert [p.label for p in parse_protocols("1:4-8,2:4-5")] == ["M1:4;5;6;7;8->9", "M2:4;5->6"]
    assert len(parse_protocols("m1")) == 4
    with pytest.raises(ProtocolError):
        parse_protocols("1:3-5")


def test_build_sets_sizes(mixed):
    tr, te = build_sets(mixed, ValidationProtocol((4, 5), 1))
    assert (len(tr), len(te)) == (48, 24)
    tr, te = build_sets(mixed, ValidationProtocol((4, 5, 6, 7, 8), 2))
    assert (len(tr), len(te)) == (120, 24)
    assert {f.ageing_step for f in te.features} == {9}
    tr, te = build_sets(mixed, ValidationProtocol((4, 5), 1), population="replicate")
    assert (len(tr), len(te)) == (144, 72)


def test_build_sets_labels_follow_criterion(mixed):
    tr, _ = build_sets(mixed, ValidationProtocol((4, 5), 1), Criterion.K268)
    expected = [int(f.ageing_step < FLIPS["ABCDEFGHIJKLMNOPQRSTUVWX".index(f.oil_label)])
                for f in tr.features]
    assert list(tr.labels) == expected
    tr232, _ = build_sets(mixed, ValidationProtocol((4, 5), 1), Criterion.K232)
    assert list(tr232.labels) == expected


@pytest.mark.parametrize("proto", all_protocols(), ids=lambda p: p.label)
def test_no_leakage(mixed, proto):
    tr, te = build_sets(mixed, proto)
    assert not {f.provenance for f in tr.features} & {f.provenance for f in te.features}
    assert proto.validation_step not in {f.ageing_step for f in tr.features}


def test_missing_sample(mixed):
    eems = [e for e in mixed.eems if not (e.meta.oil_label == "C" and e.meta.ageing_step == 9)]
    ds = Dataset(eems, mixed.uv_records)
    with pytest.raises(MissingSampleError) as info:
        build_sets(ds, ValidationProtocol((4, 5), 1))
    assert ("C", 9, "eem") in info.value.missing
    # method 2 on 4-5 never touches step 9
    build_sets(ds, ValidationProtocol((4, 5), 2))


def test_run_is_reproducible(mixed):
    proto = ValidationProtocol((4, 5, 6), 1)
    a = run_protocol(mixed, proto, "k268", ModelSpec("adaboost"), range(5))
    b = run_protocol(mixed, proto, "k268", ModelSpec("adaboost"), range(5))
    assert report([a]).results_csv() == report([b]).results_csv()


def test_report_shape_and_undefined(mixed):
    results = [run_protocol(mixed, p, c, ModelSpec("adaboost"), range(3))
               for c in ("k268", "k232") for p in all_protocols((1,))]
    rep = report(results)
    assert len(rep.groups) == 8
    assert len(rep.rows) == 8 * 3
    lines = rep.results_csv().splitlines()
    assert lines[0].split(",") == RESULT_COLUMNS
    # every step-9 sample is class 0, so there are no negatives under positive class 0
    assert all(r["specificity"] is None for r in rep.rows)
    assert "undefined" in lines[1]
    assert "undefined" in rep.summary_csv()
    bars = rep.bars_csv().splitlines()
    assert len(bars) == 1 + 8 * 3


def test_swapped_positive_class(mixed):
    res = run_protocol(mixed, ValidationProtocol((4, 5, 6, 7), 2), "k268",
                       ModelSpec("adaboost"), range(4))
    other = run_protocol(mixed, ValidationProtocol((4, 5, 6, 7), 2), "k268",
                         ModelSpec("adaboost"), range(4), positive_class=1)
    sw = res.swapped()
    assert sw.values("sensitivity") == other.values("sensitivity")
    assert sw.values("accuracy") == res.values("accuracy")


def test_method2_perfect_score_is_flagged(synth_450):
    ds, _ = synth_450
    res = run_protocol(ds, ValidationProtocol((4, 5, 6, 7), 2), "k268", ModelSpec(), range(3),
                       lambdas=(450, 300))
    assert res.mean_accuracy == 1.0
    assert res.notes


def test_requires_seeds(mixed):
    with pytest.raises(ValidationError):
        run_protocol(mixed, ValidationProtocol((4, 5), 1), "k268", ModelSpec(), [])


@pytest.mark.parametrize("alg", ["adaboost", "random_forest", "logistic_regression", "naive_bayes"])
def test_all_algorithms_run(mixed, alg):
    import warnings
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        res = run_protocol(mixed, ValidationProtocol((4, 5, 6, 7, 8), 1), "k268",
                           ModelSpec(alg), range(2))
    assert all(0.0 <= a <= 1.0 for a in res.values("accuracy"))
    assert res.n_train == 120 and res.n_test == 24
