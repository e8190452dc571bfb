"""Embeddings and similarity for gating the mixing strength.

Two providers cover the two ways of getting a latent vector per sample:
externally computed embeddings loaded from CSV, or a self-contained
spectral feature (log band power over equal-width bands), which is
deterministic and invariant to global gain differences.
"""

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    DimensionMismatchError,
    InvalidSpecError,
    NonFiniteError,
    ParseError,
    ZeroVectorError,
)
from .spectral import TimeSeries, power_spectrum, two_sided_weights

_NORM_FLOOR = 1e-12
_LOG_FLOOR = 1e-12


@dataclass(frozen=True)
class Embedding:
    """A sample's latent vector, tagged with its sample id."""

    id: int
    vector: np.ndarray

    def __post_init__(self):
        vec = np.asarray(self.vector, dtype=np.float64)
        if vec.ndim != 1:
            raise DimensionMismatchError(f"embedding vector must be 1-D, got ndim={vec.ndim}")
        if not np.all(np.isfinite(vec)):
            raise NonFiniteError(f"embedding {self.id} contains NaN or Inf")
        object.__setattr__(self, "vector", vec)

    @property
    def dimension(self) -> int:
        return self.vector.shape[0]


def _as_vector(x) -> np.ndarray:
    if isinstance(x, Embedding):
        return x.vector
    return np.asarray(x, dtype=np.float64)


def cosine_similarity(a, b) -> float:
    """Cosine of the angle between two vectors, clamped to [-1, 1].

    Accepts :class:`Embedding` objects or plain 1-D arrays.
    """
    va, vb = _as_vector(a), _as_vector(b)
    if va.shape != vb.shape:
        raise DimensionMismatchError(f"dimensions differ: {va.shape} vs {vb.shape}")
    na = float(np.linalg.norm(va))
    nb = float(np.linalg.norm(vb))
    if na <= _NORM_FLOOR or nb <= _NORM_FLOOR:
        raise ZeroVectorError("cosine similarity undefined for zero vectors")
    return float(np.clip(np.dot(va, vb) / (na * nb), -1.0, 1.0))


class EmbeddingProvider:
    """Immutable id -> Embedding lookup."""

    def __init__(self, embeddings: dict[int, Embedding]):
        dims = {e.dimension for e in embeddings.values()}
        if len(dims) > 1:
            raise DimensionMismatchError(f"inconsistent embedding dimensions: {sorted(dims)}")
        self._embeddings = dict(embeddings)
        self._dimension = dims.pop() if dims else 0

    @property
    def dimension(self) -> int:
        return self._dimension

    def __len__(self) -> int:
        return len(self._embeddings)

    def __contains__(self, sample_id: int) -> bool:
        return sample_id in self._embeddings

    def get(self, sample_id: int) -> Embedding:
        try:
            return self._embeddings[sample_id]
        except KeyError:
            raise KeyError(f"no embedding for sample id {sample_id}") from None

    def similarity(self, id_a: int, id_b: int) -> float:
        return cosine_similarity(self.get(id_a), self.get(id_b))


def load_embeddings(path) -> EmbeddingProvider:
    """Read an embeddings CSV: header ``id,dim``, then one row per sample
    (integer id followed by the vector components). Ids must be unique and
    every row must have the same dimension."""
    embeddings: dict[int, Embedding] = {}
    dim = None
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise ParseError("empty embeddings file", 1)
    header = [tok.strip() for tok in lines[0].split(",")]
    if header[:1] != ["id"]:
        raise ParseError(f"expected header starting with 'id', got {lines[0]!r}", 1)
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        fields = line.split(",")
        try:
            sample_id = int(fields[0])
        except ValueError:
            raise ParseError(f"bad sample id {fields[0]!r}", lineno) from None
        if sample_id in embeddings:
            raise ParseError(f"duplicate sample id {sample_id}", lineno)
        try:
            vector = np.array([float(tok) for tok in fields[1:]], dtype=np.float64)
        except ValueError:
            raise ParseError("non-numeric vector component", lineno) from None
        if vector.size == 0:
            raise ParseError("row has no vector components", lineno)
        if dim is None:
            dim = vector.size
        elif vector.size != dim:
            raise DimensionMismatchError(
                f"line {lineno}: vector dimension {vector.size} != {dim}"
            )
        embeddings[sample_id] = Embedding(sample_id, vector)
    return EmbeddingProvider(embeddings)


def spectral_provider(
    samples: Sequence[TimeSeries], ids: Sequence[int], n_bands: int
) -> EmbeddingProvider:
    """Provider backed by :func:`spectral_embedding` of each sample."""
    return EmbeddingProvider(
        {int(i): spectral_embedding(s, n_bands, int(i)) for i, s in zip(ids, samples)}
    )


def spectral_embedding(signal: TimeSeries, n_bands: int, sample_id: int = -1) -> Embedding:
    """Log band-power feature vector over equal-width bands up to Nyquist.

    Per channel: the two-sided power in each of ``n_bands`` equal bands,
    log-compressed with a 1e-12 floor; channels are concatenated and the
    result is mean-centered, so a global amplitude rescale leaves the
    vector (and any cosine similarity against it) unchanged.
    """
    if n_bands < 2:
        raise InvalidSpecError(f"n_bands must be >= 2, got {n_bands}")
    width = (signal.sample_rate_hz / 2.0) / n_bands
    s = power_spectrum(signal) * two_sided_weights(signal.length)
    freqs = np.arange(s.shape[1]) * (signal.sample_rate_hz / signal.length)
    # half-open equal-width bands; the Nyquist bin folds into the last one
    idx = np.minimum((freqs / width).astype(int), n_bands - 1)
    features = np.stack(
        [np.bincount(idx, weights=s[c], minlength=n_bands) for c in range(signal.channels)]
    )
    vector = np.log(_LOG_FLOOR + features.ravel())
    return Embedding(sample_id, vector - vector.mean())
