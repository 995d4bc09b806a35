"""Exception types shared across the package.

The CLI maps these onto exit codes: configuration problems exit with 1,
I/O problems with 2, numeric or contract violations with 3.
"""


class CorrlatError(Exception):
    """Base class for all package errors."""


class InvalidGeometryError(CorrlatError, ValueError):
    """Lattice geometry outside the supported family (d in 1..3, lengths >= 2)."""


class InvalidSiteError(CorrlatError, ValueError):
    """Site index outside [0, site_count)."""


class InvalidParamsError(CorrlatError, ValueError):
    """Chain or run parameters violate a precondition."""


class ContractViolationError(CorrlatError, RuntimeError):
    """An internal invariant was broken (e.g. non-monotone measurement steps)."""


class EnumerationTooLargeError(CorrlatError, ValueError):
    """Exact enumeration requested for a lattice above the size bound."""


class SnapshotFormatError(CorrlatError, ValueError):
    """A lattice dump / snapshot file failed to parse."""


class CheckpointError(CorrlatError, ValueError):
    """Checkpoint file is corrupt or inconsistent."""


class CheckpointMismatchError(CheckpointError):
    """Checkpoint belongs to a different run configuration."""


class ConfigFileError(CorrlatError, ValueError):
    """Run configuration file or flag overrides are invalid."""
