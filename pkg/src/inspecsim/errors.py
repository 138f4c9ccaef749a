"""Exception types shared across the simulator."""


class InspecsimError(Exception):
    """Base class for all domain errors raised by this package."""

    #: short machine-readable code used in CLI error JSON
    code = "Error"


class WorldFormatError(InspecsimError):
    """A world, path, or scenario document failed validation."""

    code = "WorldFormatError"


class ScenarioError(InspecsimError):
    """Scenario file is malformed or references missing inputs."""

    code = "ScenarioError"


class InfeasibleStandoff(InspecsimError):
    """Spiral ring geometry collides with the target or leaves the flight volume."""

    code = "InfeasibleStandoff"


class NoRouteFound(InspecsimError):
    """The vertical-lift detour cannot clear the obstruction inside the bounds."""

    code = "NoRouteFound"


class EmptyPlan(InspecsimError):
    """The sampling planner found no coverable facet."""

    code = "EmptyPlan"


class NoAutonomousSegment(InspecsimError):
    """A flight log contains no autonomous-mode samples to analyze."""

    code = "NoAutonomousSegment"


class OutOfRange(InspecsimError):
    """Query time lies outside the span of a flight log."""

    code = "OutOfRange"
