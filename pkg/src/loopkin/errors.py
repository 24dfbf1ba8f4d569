"""Exception hierarchy for the toolkit."""


class LoopkinError(Exception):
    """Base class for all library errors."""


class GeometryError(LoopkinError):
    """Bad geometric input (non-unit axis, pointwise generalized joint, ...)."""


class MrdfError(LoopkinError):
    """Robot description parse/compile failure."""


class UnsupportedLoopError(LoopkinError):
    """A loop that is not a planar four-bar (SCC of size 3 or >= 5)."""


class TopologyError(LoopkinError):
    """Inconsistent mechanism structure (no lock path, residual cycles, ...)."""


class CompletenessError(TopologyError):
    """An actuator path that matches none of the four supported patterns."""


class NoRootError(LoopkinError):
    """Scalar root solve failed to bracket/converge; carries the best residual."""

    def __init__(self, message, best_theta=None, best_residual=None):
        super().__init__(message)
        self.best_theta = best_theta
        self.best_residual = best_residual


class SingularConfigurationError(LoopkinError):
    """Loop-closure Newton failed to converge (configuration near a singularity)."""


class ActuatorBoundsError(LoopkinError):
    """Requested actuator length outside its [lower, upper] bounds."""


class GridCapError(LoopkinError):
    """Workspace grid larger than the configured cap."""
