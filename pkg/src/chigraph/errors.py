"""Exception hierarchy.

The CLI maps these onto exit codes: domain/validation errors exit 1,
usage errors exit 2 (argparse territory), OS-level I/O errors exit 3.
"""

from __future__ import annotations


class ChigraphError(Exception):
    """Base class for all errors raised by this package."""


class InvalidConfigError(ChigraphError):
    """A generation config violates one of its invariants."""


class InvalidRangeError(ChigraphError):
    """Uniform-real interval with a >= b."""


class InfeasibleSamplingError(ChigraphError):
    """Asked to draw more distinct values than the population holds."""


class InvalidRatioError(ChigraphError):
    """Split ratios are not positive or do not sum to 1."""


class StructuralError(ChigraphError):
    """A sample's topology is malformed (broken chain, bad wiring, tie)."""


class DegenerateGeometryError(ChigraphError):
    """Geometry too close to degenerate to orient (signals a corrupted sample)."""


class DisconnectedGraphError(ChigraphError):
    """Hop distances requested on a graph that is not connected."""


class MalformedRecordError(ChigraphError):
    """A serialized record failed to parse or failed schema validation."""

    def __init__(self, message: str, line_number: int | None = None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


class InvariantViolationError(ChigraphError):
    """A parsed sample or manifest violates a model invariant."""

    def __init__(self, message: str, sample_index: int | None = None):
        if sample_index is not None:
            message = f"sample {sample_index}: {message}"
        super().__init__(message)
        self.sample_index = sample_index


class FormatVersionError(ChigraphError):
    """Dataset file format version is not supported by this build."""


class GradientInputError(ChigraphError):
    """Gradient-norm input is malformed, misaligned, or out of domain."""
