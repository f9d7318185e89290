import os
import warnings
from pathlib import Path

import numpy as np
import pytest

from evoofluor.synth import SynthSpec, generate

DATA_ENV = "EVOOFLUOR_DATA_DIR"


def public_data_paths():
    """(eem.csv, uv.csv) of the published dataset in canonical form, or None."""
    root = os.environ.get(DATA_ENV)
    if not root:
        return None
    eem, uv = Path(root) / "eem.csv", Path(root) / "uv.csv"
    if not (eem.is_file() and uv.is_file()):
        return None
    return eem, uv


_PUBLIC = {}


def load_public():
    if "ds" not in _PUBLIC:
        paths = public_data_paths()
        if paths is None:
            _PUBLIC["ds"] = None
        else:
            from evoofluor.io import load_dataset
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                _PUBLIC["ds"] = load_dataset(*paths)
    return _PUBLIC["ds"]


@pytest.fixture(scope="session")
def public_dataset_optional():
    ds = load_public()
    if ds is None:
        pytest.skip(f"published dataset not available (set {DATA_ENV} to a directory "
                    "with eem.csv and uv.csv in canonical form)")
    return ds


@pytest.fixture(scope="session")
def synth_default():
    return generate(SynthSpec())


@pytest.fixture(scope="session")
def synth_450():
    return generate(SynthSpec(designated_wavelength_nm=450.0, label_flip_step=7))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
