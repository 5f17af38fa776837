"""
Exception hierarchy for netsampler.

Every error also subclasses ValueError so callers that only know about
ValueError keep catching them.
"""

from typing import Optional


class NetSamplerError(ValueError):
    """Base class for all netsampler errors."""


class EdgeListParseError(NetSamplerError):
    """A line of an edge list is not two whitespace-separated tokens."""

    def __init__(self, path: str, line_number: int, line: str):
        self.path = path
        self.line_number = line_number
        self.line = line
        super().__init__(
            f"{path}:{line_number}: expected two node identifiers, got {line.strip()!r}"
        )


class EmptyGraphError(NetSamplerError):
    """The loaded graph has no nodes."""


class SamplingError(NetSamplerError):
    """A sampler cannot produce the requested sample."""


class ConfigError(NetSamplerError):
    """Invalid run configuration or config file."""

    def __init__(self, message: str, key: Optional[str] = None):
        self.key = key
        super().__init__(message if key is None else f"{key}: {message}")


class DatasetIntegrityError(NetSamplerError):
    """A loaded dataset does not match its expected node or edge count."""
