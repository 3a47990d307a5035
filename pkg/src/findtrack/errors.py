"""Exception hierarchy shared across the package.

Everything raised on a contract violation derives from FindTrackError so
callers can distinguish pipeline failures from programming errors. Remote
backend failures get their own branch (BackendError) because the CLI maps
them to a different exit code than I/O or configuration problems.
"""


class FindTrackError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(FindTrackError):
    """Invalid pipeline configuration value."""


class CountMismatch(FindTrackError):
    """RLE counts do not sum to width*height."""


class MissingFrame(FindTrackError):
    """Frame directory has a gap or does not start at frame 1."""


class DimensionMismatch(FindTrackError):
    """Two rasters that must agree in size do not."""


class LengthMismatch(FindTrackError):
    """Two sequences that must have equal length do not."""


class UnsupportedFormat(FindTrackError):
    """Raster file is not one of the supported binary netpbm formats."""


class ExpressionParseError(FindTrackError):
    """Text does not parse as `the <color> <shape>`."""


class EmptyMask(FindTrackError):
    """A non-empty mask was required."""


class ZeroNormEmbedding(FindTrackError):
    """Cannot normalize an all-zero embedding."""


class AllCandidatesEmpty(FindTrackError):
    """Every candidate segmentation came back empty; no key frame exists."""


class KeyFrameOutOfRange(FindTrackError):
    """Key-frame index outside 1..T."""


class UnknownScenario(FindTrackError):
    """Scenario name not in the built-in catalogue."""


class SceneSpecError(FindTrackError):
    """Scene specification is internally inconsistent."""


class UnknownBackend(FindTrackError):
    """Backend selector string not understood."""


class BackendError(FindTrackError):
    """A backend call failed (remote transport, protocol, or reported error)."""


class HandshakeFailure(BackendError):
    """Remote backend did not complete the hello exchange."""


class ProtocolError(BackendError):
    """Remote backend sent a malformed or contract-violating message."""


class BackendTimeout(BackendError):
    """Remote backend did not answer within the per-call timeout."""
