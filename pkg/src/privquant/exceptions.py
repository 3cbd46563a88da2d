"""Exception types raised across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


class ModelError(ValueError):
    """A sensor model does not define a proper distribution."""


class ComplexityError(ValueError):
    """The requested enumeration is too large to run."""


class InfeasibleDistortion(ValueError):
    """The distortion budget is below the smallest achievable E[Z^2].

    Attributes
    ----------
    epsilon : float
        The requested budget.
    bound : float
        ``min_j level_j**2``, the smallest distortion any noise PMF on the
        quantizer levels can achieve.
    """

    def __init__(self, epsilon, bound, sensor=None):
        self.epsilon = epsilon
        self.bound = bound
        self.sensor = sensor
        where = f" for sensor {sensor!r}" if sensor is not None else ""
        super().__init__(
            f"distortion budget {epsilon!r}{where} is infeasible: "
            f"E[Z^2] >= min level^2 = {bound:.12g}"
        )


class NotConverged(RuntimeError):
    """The solver hit its iteration caps. ``design`` holds the best iterate."""

    def __init__(self, message, design=None):
        super().__init__(message)
        self.design = design
