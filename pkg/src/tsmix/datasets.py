"""Dataset containers, serialization, segmentation, normalization.

On-disk formats:

* binary ``.tsmx``: magic ``TSMX``, u32 version (=1), u32 n_samples,
  u32 n_channels, u32 length, f64 sample rate, u8 has_labels; then the
  payload as little-endian f32 (sample-major, then channel, then time) and,
  when present, one u32 label per sample. Sample ids are implicit
  (0..n_samples-1).
* CSV: header ``id,label,channel,t0,t1,...``; one row per (sample,
  channel); the label field may be blank. The sample rate is not part of
  the format and must be supplied by the reader.

Storage is f32; in-memory arrays are f64 so spectral roundtrips keep their
accuracy.
"""

import struct
from dataclasses import dataclass

import numpy as np

from .errors import (
    BadMagicError,
    ConstantChannelError,
    DuplicateChannelError,
    InvalidSpecError,
    ParseError,
    RaggedRowsError,
    SampleRateMismatchError,
    ShapeMismatchError,
    TruncatedFileError,
    VersionUnsupportedError,
    WindowTooLongError,
)
from .spectral import MIN_LENGTH, TimeSeries

_MAGIC = b"TSMX"
_VERSION = 1
_HEADER = struct.Struct("<4sIIIIdB")


@dataclass
class LabeledDataset:
    """Uniformly shaped samples with optional integer labels and unique ids."""

    samples: list[TimeSeries]
    labels: np.ndarray | None = None
    ids: np.ndarray | None = None

    def __post_init__(self):
        if self.samples:
            shape = self.samples[0].data.shape
            rate = self.samples[0].sample_rate_hz
            for s in self.samples[1:]:
                if s.data.shape != shape:
                    raise ShapeMismatchError(f"sample shapes differ: {shape} vs {s.data.shape}")
                if s.sample_rate_hz != rate:
                    raise SampleRateMismatchError(f"{rate} Hz vs {s.sample_rate_hz} Hz")
        if self.labels is not None:
            self.labels = np.asarray(self.labels, dtype=np.int64)
            if len(self.labels) != len(self.samples):
                raise ShapeMismatchError(
                    f"{len(self.labels)} labels for {len(self.samples)} samples"
                )
        if self.ids is None:
            self.ids = np.arange(len(self.samples), dtype=np.int64)
        else:
            self.ids = np.asarray(self.ids, dtype=np.int64)
            if len(self.ids) != len(self.samples):
                raise ShapeMismatchError(f"{len(self.ids)} ids for {len(self.samples)} samples")
            if len(np.unique(self.ids)) != len(self.ids):
                raise InvalidSpecError("sample ids must be unique")

    def __len__(self) -> int:
        return len(self.samples)

    @property
    def n_channels(self) -> int:
        return self.samples[0].channels if self.samples else 0

    @property
    def length(self) -> int:
        return self.samples[0].length if self.samples else 0

    @property
    def sample_rate_hz(self) -> float:
        return self.samples[0].sample_rate_hz if self.samples else 0.0

    def index_of(self, sample_id: int) -> int:
        pos = np.flatnonzero(self.ids == sample_id)
        if pos.size == 0:
            raise KeyError(f"no sample with id {sample_id}")
        return int(pos[0])


def write_binary(dataset: LabeledDataset, path) -> None:
    """Write the binary format; data is stored at f32 precision."""
    n = len(dataset)
    has_labels = dataset.labels is not None
    if has_labels and (np.any(dataset.labels < 0) or np.any(dataset.labels > 0xFFFFFFFF)):
        raise InvalidSpecError("binary labels must fit in u32")
    header = _HEADER.pack(
        _MAGIC,
        _VERSION,
        n,
        dataset.n_channels,
        dataset.length,
        float(dataset.sample_rate_hz),
        1 if has_labels else 0,
    )
    with open(path, "wb") as fh:
        fh.write(header)
        for s in dataset.samples:
            fh.write(np.ascontiguousarray(s.data, dtype="<f4").tobytes())
        if has_labels:
            fh.write(np.ascontiguousarray(dataset.labels, dtype="<u4").tobytes())


def read_binary(path) -> LabeledDataset:
    """Read the binary format; raises before returning any partial dataset."""
    with open(path, "rb") as fh:
        blob = fh.read()
    if len(blob) < 4 or blob[:4] != _MAGIC:
        raise BadMagicError(f"expected magic {_MAGIC!r}")
    if len(blob) < _HEADER.size:
        raise TruncatedFileError("incomplete header", len(blob))
    magic, version, n, channels, length, rate, has_labels = _HEADER.unpack_from(blob, 0)
    if version != _VERSION:
        raise VersionUnsupportedError(f"version {version} not supported (expected {_VERSION})")
    offset = _HEADER.size
    payload = channels * length * 4
    samples = []
    for _ in range(n):
        if len(blob) < offset + payload:
            raise TruncatedFileError(f"expected {payload} data bytes", offset)
        data = np.frombuffer(blob, dtype="<f4", count=channels * length, offset=offset)
        samples.append(TimeSeries(data.astype(np.float64).reshape(channels, length), rate))
        offset += payload
    labels = None
    if has_labels:
        if len(blob) < offset + 4 * n:
            raise TruncatedFileError(f"expected {4 * n} label bytes", offset)
        labels = np.frombuffer(blob, dtype="<u4", count=n, offset=offset).astype(np.int64)
    return LabeledDataset(samples, labels)


def write_csv(dataset: LabeledDataset, path) -> None:
    """Write the CSV format (one row per sample-channel)."""
    length = dataset.length
    header = "id,label,channel," + ",".join(f"t{i}" for i in range(length))
    lines = [header]
    for idx, s in enumerate(dataset.samples):
        label = "" if dataset.labels is None else str(int(dataset.labels[idx]))
        for c in range(s.channels):
            values = ",".join(repr(float(v)) for v in s.data[c])
            lines.append(f"{dataset.ids[idx]},{label},{c},{values}")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def read_csv(path, sample_rate_hz: float = 1.0) -> LabeledDataset:
    """Read the CSV format. Rows are grouped by id; channel indices of each
    sample must form 0..C-1 and either every sample carries a label or none
    does."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise ParseError("empty file", 1)
    header = [tok.strip() for tok in lines[0].split(",")]
    if header[:3] != ["id", "label", "channel"]:
        raise ParseError(f"expected header 'id,label,channel,t0,...', got {lines[0]!r}", 1)
    n_values = len(header) - 3
    if n_values < MIN_LENGTH:
        raise ParseError(f"need at least {MIN_LENGTH} time columns, got {n_values}", 1)

    rows: dict[int, dict[int, np.ndarray]] = {}
    labels: dict[int, int | None] = {}
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        fields = line.split(",")
        if len(fields) != 3 + n_values:
            raise RaggedRowsError(
                f"expected {3 + n_values} fields, got {len(fields)}", lineno
            )
        try:
            sample_id = int(fields[0])
            channel = int(fields[2])
        except ValueError:
            raise ParseError("bad id or channel field", lineno) from None
        label: int | None
        if fields[1].strip() == "":
            label = None
        else:
            try:
                label = int(fields[1])
            except ValueError:
                raise ParseError(f"bad label {fields[1]!r}", lineno) from None
        try:
            values = np.array([float(tok) for tok in fields[3:]], dtype=np.float64)
        except ValueError:
            raise ParseError("non-numeric sample value", lineno) from None
        per_sample = rows.setdefault(sample_id, {})
        if channel in per_sample:
            raise DuplicateChannelError(
                f"duplicate channel {channel} for sample {sample_id}", lineno
            )
        per_sample[channel] = values
        if sample_id in labels and labels[sample_id] != label:
            raise ParseError(f"conflicting labels for sample {sample_id}", lineno)
        labels[sample_id] = label

    ids = sorted(rows)
    samples = []
    for sample_id in ids:
        channels = rows[sample_id]
        if sorted(channels) != list(range(len(channels))):
            raise InvalidSpecError(
                f"sample {sample_id}: channels must be 0..{len(channels) - 1}, got {sorted(channels)}"
            )
        data = np.stack([channels[c] for c in sorted(channels)])
        samples.append(TimeSeries(data, sample_rate_hz))

    label_values = [labels[i] for i in ids]
    if any(v is None for v in label_values) and any(v is not None for v in label_values):
        raise InvalidSpecError("either all samples must be labeled or none")
    label_arr = None if (not ids or label_values[0] is None) else np.array(label_values)
    return LabeledDataset(samples, label_arr, np.array(ids, dtype=np.int64))


def segment(signal: TimeSeries, window_s: float, overlap_frac: float) -> list[TimeSeries]:
    """Sliding windows of round(window_s * rate) samples.

    Stride is window * (1 - overlap_frac); the trailing partial window is
    dropped rather than padded (padding would alter the spectra).
    """
    if not (0.0 <= overlap_frac < 1.0):
        raise InvalidSpecError(f"overlap_frac must be in [0, 1), got {overlap_frac}")
    window = int(round(window_s * signal.sample_rate_hz))
    if window > signal.length:
        raise WindowTooLongError(f"window of {window} samples exceeds length {signal.length}")
    if window < MIN_LENGTH:
        raise InvalidSpecError(f"window of {window} samples is below the minimum {MIN_LENGTH}")
    stride = max(1, int(round(window * (1.0 - overlap_frac))))
    out = []
    start = 0
    while start + window <= signal.length:
        out.append(TimeSeries(signal.data[:, start : start + window], signal.sample_rate_hz))
        start += stride
    return out


def zscore(signal: TimeSeries) -> TimeSeries:
    """Standardize each channel to zero mean and unit standard deviation."""
    mean = signal.data.mean(axis=1, keepdims=True)
    std = signal.data.std(axis=1, keepdims=True)
    if np.any(std <= 1e-12):
        bad = np.flatnonzero(std.ravel() <= 1e-12)
        raise ConstantChannelError(f"channel(s) {bad.tolist()} are constant")
    return TimeSeries((signal.data - mean) / std, signal.sample_rate_hz)
