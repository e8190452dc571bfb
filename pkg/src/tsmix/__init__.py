"""Frequency-domain mixup augmentation for quasi-periodic time series.

Mixes pairs of signals in the spectral domain with separate amplitude and
phase coefficients, choosing the phase path along the shortest angular
distance so that mixing never cancels a frequency bin. Ships the common
reference mixups, similarity-gated coefficient sampling, a synthetic
generator for band-labeled data, and audit tools that check the per-bin
amplitude floor and map out destructive interference.
"""

from ._kernels import backend_name
from .audit import MixAudit, SweepPoint, audit_mix, destruction_sweep, write_sweep_csv
from .datasets import (
    LabeledDataset,
    read_binary,
    read_csv,
    segment,
    write_binary,
    write_csv,
    zscore,
)
from .errors import TsmixError
from .mixing import (
    MixCoefficients,
    StftConfig,
    amplitude_mix,
    binary_mix,
    cut_mix,
    geometric_mix,
    linear_mix,
    rectangle_keep_mask,
    spec_mix,
    supervised_mix,
    tailored_mix,
)
from .phase import interpolate_phase, shortest_delta, wrap
from .policy import (
    BASELINE_PARAMS,
    PROFILES,
    CoefficientPolicy,
    TruncNormalSpec,
    UniformSpec,
    choose_coefficients,
    sample_trunc_normal,
    sample_uniform,
)
from .similarity import (
    Embedding,
    EmbeddingProvider,
    cosine_similarity,
    load_embeddings,
    spectral_embedding,
    spectral_provider,
)
from .spectral import (
    BandSpec,
    Spectrum,
    TimeSeries,
    band_power,
    band_power_ratio,
    forward,
    inverse,
    power_spectrum,
    total_power,
    two_sided_weights,
)
from .synth import AdversarialPairSpec, SynthSpec, adversarial_pair, generate_labeled

__version__ = "0.1.0"

__all__ = [
    "AdversarialPairSpec",
    "BASELINE_PARAMS",
    "BandSpec",
    "CoefficientPolicy",
    "Embedding",
    "EmbeddingProvider",
    "LabeledDataset",
    "MixAudit",
    "MixCoefficients",
    "PROFILES",
    "Spectrum",
    "StftConfig",
    "SweepPoint",
    "SynthSpec",
    "TimeSeries",
    "TruncNormalSpec",
    "TsmixError",
    "UniformSpec",
    "amplitude_mix",
    "audit_mix",
    "backend_name",
    "band_power",
    "band_power_ratio",
    "binary_mix",
    "choose_coefficients",
    "cosine_similarity",
    "cut_mix",
    "destruction_sweep",
    "forward",
    "generate_labeled",
    "geometric_mix",
    "interpolate_phase",
    "inverse",
    "linear_mix",
    "load_embeddings",
    "power_spectrum",
    "read_binary",
    "read_csv",
    "rectangle_keep_mask",
    "sample_trunc_normal",
    "sample_uniform",
    "segment",
    "shortest_delta",
    "spec_mix",
    "spectral_embedding",
    "spectral_provider",
    "supervised_mix",
    "tailored_mix",
    "total_power",
    "two_sided_weights",
    "wrap",
    "write_binary",
    "write_csv",
    "write_sweep_csv",
    "zscore",
]
