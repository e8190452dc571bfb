"""Exception types raised by the library.

Every error is a ValueError subclass so callers that do not care about the
exact failure mode can still catch the usual builtin.
"""


class TsmixError(ValueError):
    """Base class for all library errors."""


class NonFiniteError(TsmixError):
    """Input contains NaN or Inf."""


class TooShortError(TsmixError):
    """Signal shorter than the minimum supported length."""


class ShapeMismatchError(TsmixError):
    """Arrays that must share a shape do not."""


class SampleRateMismatchError(TsmixError):
    """Paired signals carry different sample rates."""


class LambdaOutOfRangeError(TsmixError):
    """Mixing coefficient outside (0, 1]."""


class ZeroSignalError(TsmixError):
    """Operation undefined on an (effectively) all-zero signal."""


class BandOutOfRangeError(TsmixError):
    """Requested frequency band exceeds the Nyquist limit."""


class InvalidSpecError(TsmixError):
    """A configuration object violates its invariants."""


class InvalidPolicyError(TsmixError):
    """A coefficient policy violates its invariants."""


class InvalidGridError(TsmixError):
    """Sweep grid parameters are empty or out of range."""


class DimensionMismatchError(TsmixError):
    """Embedding vectors of different dimension."""


class ZeroVectorError(TsmixError):
    """Cosine similarity undefined for a (near-)zero vector."""


class FrequencyNotOnBinError(TsmixError):
    """Frequency does not align with an exact DFT bin."""


class SignalTooShortError(TsmixError):
    """Signal too short for short-time framing."""


class WindowTooLongError(TsmixError):
    """Segmentation window longer than the signal."""


class ConstantChannelError(TsmixError):
    """A channel has (near-)zero variance and cannot be standardized."""


class ParseError(TsmixError):
    """Malformed text input; carries the 1-based line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class RaggedRowsError(ParseError):
    """CSV rows disagree on the number of fields."""


class DuplicateChannelError(ParseError):
    """The same (sample id, channel) pair appears twice."""


class BadMagicError(TsmixError):
    """File does not start with the expected magic bytes."""


class VersionUnsupportedError(TsmixError):
    """File format version not understood by this reader."""


class TruncatedFileError(TsmixError):
    """File ends before the declared payload; carries the byte offset."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte offset {offset})")
        self.offset = offset
