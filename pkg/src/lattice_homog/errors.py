"""Exception hierarchy for the lattice homogenization pipeline.

All domain errors derive from :class:`LatticeError`; the CLI maps them to
exit code 1 (usage errors are 2, I/O errors 3).
"""


class LatticeError(Exception):
    """Base class for all domain errors raised by this package."""


class UnknownTopology(LatticeError):
    """Topology code is not one of the 11 uniform tilings."""


class BboxTooSmall(LatticeError):
    """Bounding box does not admit a single complete repeating unit."""


class InvalidGraph(LatticeError):
    """A tiling graph failed validation; carries the offending report."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class ZeroLength(LatticeError):
    """Beam element endpoints coincide."""


class DisconnectedMesh(LatticeError):
    """Mesh has more than one connected component."""


class NoBoundary(LatticeError):
    """Mesh has no boundary hubs to prescribe displacements on."""


class SingularSystem(LatticeError):
    """Constrained stiffness matrix could not be factorized."""


class NotPositiveDefinite(LatticeError):
    """Homogenized stiffness tensor violates positive definiteness."""


class NotOrthotropic(LatticeError):
    """Topology lacks the two reflective symmetry axes required by the
    strain-energy method (T4H only)."""


class MissingTopology(LatticeError):
    """A ranking was requested but the table lacks one of the topologies."""


class MissingCase(LatticeError):
    """A ratio table was requested but a stiffness case is absent."""


class InsufficientData(LatticeError):
    """Not enough mesh sizes present to measure size independence."""


class EmptyTable(LatticeError):
    """Export requested on an empty result table."""
