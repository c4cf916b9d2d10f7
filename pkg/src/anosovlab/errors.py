"""Exception types shared across the package."""


class AnosovlabError(Exception):
    """Base class for all package-specific errors."""


class DimensionMismatchError(AnosovlabError, ValueError):
    """Operands have incompatible or overflowing dimensions."""


class DegenerateSubspaceError(AnosovlabError, ValueError):
    """A spanning set was numerically rank-deficient."""


class ChartDomainError(AnosovlabError, ValueError):
    """Chart inputs outside the chart domain (non-Lagrangian or non-transverse)."""


class SymmetryError(AnosovlabError, ValueError):
    """A chart map or form failed its symmetry check; carries the residual."""

    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (residual {residual:.3e})")
        self.residual = residual


class DegenerateQuadrupleError(AnosovlabError, ValueError):
    """Cross-ratio of projective points with a numerically zero wedge."""


class WordError(AnosovlabError, ValueError):
    """Malformed or non-reduced word over the surface-group alphabet."""


class BallAmbiguityError(AnosovlabError):
    """Two ball elements landed in the dedup ambiguity band; carries the distance."""

    def __init__(self, distance: float):
        super().__init__(
            f"ball dedup ambiguity: nearest-element distance {distance:.3e} "
            "is between tau_same and tau_dedup"
        )
        self.distance = distance


class ConstructionError(AnosovlabError):
    """A representation build failed its own numerical self-check."""


class ValidationError(AnosovlabError):
    """A stored or supplied representation failed residual validation."""


class NoAttractingPointError(AnosovlabError):
    """Spectral gap too weak (or iteration failed) to certify an attracting subspace."""


class FlagQualityError(AnosovlabError):
    """A computed flag violated compatibility/duality beyond tolerance."""
