"""Exception types shared across the planning stack."""


class PlanningError(Exception):
    """Base class for all tetherplan errors."""


class CenterOnCurve(PlanningError):
    """A winding query point lies on (or numerically too close to) the curve."""


class EndpointMismatch(PlanningError):
    """Two paths that must share endpoints do not."""


class NonIntegerLoop(PlanningError):
    """A closed-loop winding deviated too far from an integer; signals a
    numerical or collision anomaly upstream."""


class InputInCollision(PlanningError):
    """An operation that requires a collision-free input received one in collision."""


class DegenerateEndpoints(PlanningError):
    """Start and goal coincide."""


class EmptyPool(PlanningError):
    """No collision-free candidate survived filtering."""


class GenerationFailed(PlanningError):
    """Random scenario generation could not satisfy its constraints."""


class InfeasiblePlan(PlanningError):
    """A classical planner exhausted its search budget without reaching the goal."""


class IoError(PlanningError):
    """Failed to write an output artifact."""
