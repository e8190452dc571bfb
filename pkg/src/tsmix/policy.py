"""Similarity-gated sampling of the amplitude/phase mixing coefficients.

Pairs whose embeddings are close (cosine similarity >= threshold, ties
count as close) are mixed aggressively with coefficients from a uniform
distribution; distant pairs get weak mixing from a truncated normal with
high mean and small spread. Which branch fires depends only on
(similarity, threshold), never on RNG state.

Three named profiles ship with the package (``activity``, ``heart_rate``,
``cvd``), together with the matching parameter ranges for the baseline
mixers in ``BASELINE_PARAMS``.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr, ndtri

from .errors import InvalidPolicyError, InvalidSpecError
from .mixing import MixCoefficients

# below this acceptance probability, rejection sampling would stall;
# switch to the inverse-CDF method
_REJECTION_MIN_ACCEPT = 1e-4


@dataclass(frozen=True)
class UniformSpec:
    """U(lo, hi) over a sub-interval of (0, 1]."""

    lo: float
    hi: float

    def __post_init__(self):
        if not (0.0 < self.lo <= self.hi <= 1.0):
            raise InvalidSpecError(f"need 0 < lo <= hi <= 1, got ({self.lo}, {self.hi})")

    @property
    def mean(self) -> float:
        return 0.5 * (self.lo + self.hi)


@dataclass(frozen=True)
class TruncNormalSpec:
    """N(mu, sigma) conditioned on [lo, hi]."""

    mu: float
    sigma: float
    lo: float
    hi: float

    def __post_init__(self):
        if not (self.sigma > 0):
            raise InvalidSpecError(f"sigma must be positive, got {self.sigma}")
        if not (self.lo < self.hi):
            raise InvalidSpecError(f"need lo < hi, got ({self.lo}, {self.hi})")


@dataclass(frozen=True)
class CoefficientPolicy:
    """Threshold plus per-coefficient close/far distributions.

    Coefficients must land in (0, 1], so the far distributions are required
    to have 0 < lo < hi <= 1.
    """

    similarity_threshold: float
    close_amp: UniformSpec
    close_phase: UniformSpec
    far_amp: TruncNormalSpec
    far_phase: TruncNormalSpec

    def __post_init__(self):
        if not (-1.0 <= self.similarity_threshold <= 1.0):
            raise InvalidPolicyError(
                f"similarity threshold must be in [-1, 1], got {self.similarity_threshold}"
            )
        for name, spec in (("far_amp", self.far_amp), ("far_phase", self.far_phase)):
            if not (0.0 < spec.lo and spec.hi <= 1.0):
                raise InvalidPolicyError(
                    f"{name} must be supported inside (0, 1], got [{spec.lo}, {spec.hi}]"
                )


def sample_uniform(spec: UniformSpec, rng: np.random.Generator) -> float:
    """One draw from U(lo, hi); lo == hi degenerates to that value."""
    return float(rng.uniform(spec.lo, spec.hi))


def sample_trunc_normal(spec: TruncNormalSpec, rng: np.random.Generator) -> float:
    """One draw from N(mu, sigma) conditioned on [lo, hi].

    Rejection sampling (exact) unless the window's mass under the normal is
    below ``_REJECTION_MIN_ACCEPT``, in which case the inverse-CDF method
    takes over to bound the runtime.
    """
    a = (spec.lo - spec.mu) / spec.sigma
    b = (spec.hi - spec.mu) / spec.sigma
    accept = float(ndtr(b) - ndtr(a))
    if accept < _REJECTION_MIN_ACCEPT:
        u = rng.uniform(float(ndtr(a)), float(ndtr(b)))
        x = spec.mu + spec.sigma * float(ndtri(u))
        return min(max(x, spec.lo), spec.hi)
    while True:
        x = rng.normal(spec.mu, spec.sigma)
        if spec.lo <= x <= spec.hi:
            return float(x)


def choose_coefficients(
    similarity: float, policy: CoefficientPolicy, rng: np.random.Generator
) -> MixCoefficients:
    """Gate on similarity, then draw (lambda_a, lambda_p) for that branch.

    similarity >= threshold selects the aggressive (uniform) branch, ties
    included; anything below falls to the weak (truncated normal) branch.
    The amplitude coefficient is drawn first.
    """
    if not (-1.0 <= similarity <= 1.0) or math.isnan(similarity):
        raise InvalidPolicyError(f"similarity must be in [-1, 1], got {similarity}")
    if similarity >= policy.similarity_threshold:
        lam_a = sample_uniform(policy.close_amp, rng)
        lam_p = sample_uniform(policy.close_phase, rng)
        source = "close"
    else:
        lam_a = sample_trunc_normal(policy.far_amp, rng)
        lam_p = sample_trunc_normal(policy.far_phase, rng)
        source = "far"
    return MixCoefficients(lambda_a=lam_a, lambda_p=lam_p, source=source)


def _policy(eps, close_a, close_p, far):
    return CoefficientPolicy(
        similarity_threshold=eps,
        close_amp=UniformSpec(*close_a),
        close_phase=UniformSpec(*close_p),
        far_amp=TruncNormalSpec(*far),
        far_phase=TruncNormalSpec(*far),
    )


#: Named coefficient-policy presets, by task family.
PROFILES: dict[str, CoefficientPolicy] = {
    "activity": _policy(0.7, (0.7, 1.0), (0.9, 1.0), (0.9, 0.1, 0.9, 1.0)),
    "heart_rate": _policy(0.8, (0.7, 1.0), (0.9, 1.0), (1.0, 0.1, 0.9, 1.0)),
    "cvd": _policy(0.7, (0.7, 1.0), (0.9, 1.0), (1.0, 0.1, 0.9, 1.0)),
}

#: Parameter ranges for the baseline mixers, matching the profiles above.
BASELINE_PARAMS: dict[str, dict[str, dict[str, tuple[float, float]]]] = {
    "activity": {
        "linear": {"lam": (0.9, 1.0)},
        "binary": {"rho": (0.8, 1.0)},
        "geometric": {"lam": (0.9, 1.0)},
        "cutmix": {"b": (0.0, 1.0), "a": (0.1, 0.4)},
        "amplitude": {"lam": (0.9, 1.0)},
        "specmix": {"b": (0.0, 1.0), "a": (0.1, 0.4)},
    },
    "heart_rate": {
        "linear": {"lam": (0.9, 1.0)},
        "binary": {"rho": (0.9, 1.0)},
        "geometric": {"lam": (0.9, 1.0)},
        "cutmix": {"b": (0.0, 1.0), "a": (0.1, 0.3)},
        "amplitude": {"lam": (0.9, 1.0)},
        "specmix": {"b": (0.0, 1.0), "a": (0.1, 0.3)},
    },
    "cvd": {
        "linear": {"lam": (0.85, 1.0)},
        "binary": {"rho": (0.9, 1.0)},
        "geometric": {"lam": (0.9, 1.0)},
        "cutmix": {"b": (0.0, 1.0), "a": (0.1, 0.3)},
        "amplitude": {"lam": (0.8, 1.0)},
        "specmix": {"b": (0.0, 1.0), "a": (0.1, 0.3)},
    },
}
