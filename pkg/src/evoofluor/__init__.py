"""Fluorescence EEM pipeline for olive-oil quality classification.

Rayleigh masking, relative-error features, excitation-wavelength voting,
EU UV-threshold labels, from-scratch classifiers and forward-in-time
validation protocols.
"""

__version__ = "0.1.0"

from .dataset import Dataset, DatasetRegistry
from .features import relative_error, re_profile, select_wavelengths, vote_wavelengths
from .spectra import EEM, SampleMeta, WavelengthGrid, diff_eem, emission_spectrum, mask_rayleigh
from .uvparams import Criterion, DeltaKFormula, UVRecord, ageing_stats, delta_k, label

__all__ = [
    "__version__",
    "Dataset", "DatasetRegistry",
    "EEM", "SampleMeta", "WavelengthGrid", "mask_rayleigh", "emission_spectrum", "diff_eem",
    "Criterion", "DeltaKFormula", "UVRecord", "delta_k", "label", "ageing_stats",
    "relative_error", "re_profile", "vote_wavelengths", "select_wavelengths",
]
