"""Exception types raised across the package."""


class InfeasibleError(ValueError):
    """The energy floor cannot be met: E[Y] + T < omega."""

    def __init__(self, mean_y, cap_T, omega):
        self.mean_y = mean_y
        self.cap_T = cap_T
        self.omega = omega
        super().__init__(
            f"infeasible energy constraint: E[Y] + T = {mean_y:.6g} + {cap_T:.6g}"
            f" = {mean_y + cap_T:.6g} < omega = {omega:.6g}"
        )


class NonBracketingError(RuntimeError):
    """The multiplier upper bound never produced a feasible policy."""


class DegenerateDenominatorError(ZeroDivisionError):
    """Expected cycle length E[Y' + Z] is zero, so the U-AoI ratio is 0/0."""


class IterationLimitError(RuntimeError):
    """An iteration cap was hit; the best iterate so far is attached."""

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best
