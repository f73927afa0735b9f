"""Exception hierarchy shared by all h5geo modules."""


class H5GeoError(Exception):
    """Base class for all h5geo errors."""


class DomainError(H5GeoError):
    """An argument lies outside the admissible domain of an operation."""


class DivergenceError(DomainError):
    """An integral or special-function value is infinite for these arguments."""


class PoleError(DomainError):
    """A Jacobi ratio function was evaluated at (or too close to) a pole."""


class LevelSetError(DomainError):
    """Operation requires the level constant c0 (the vertical momentum) to be nonzero."""


class ChartSingularityError(DomainError):
    """The hyperspherical chart degenerates: r -> 0 or theta1 -> {0, pi/2}."""


class FeasibilityError(DomainError):
    """No admissible state/radius exists for the given conserved charges."""


class InvariantError(H5GeoError):
    """An internal invariant guaranteed by the theory was violated (likely a bug)."""


class ExcludedLevelError(DomainError):
    """The quartic coefficient A equals 1, excluded by the level restriction c0 != 0."""


class InfeasibleProfileError(DomainError):
    """f(r) < 0 for all r > 0: the radial profile admits no motion."""


class DegenerateOrbitError(DomainError):
    """The radial quartic has a double positive root; the orbit is the constant-radius
    solution r == r_star, which the closed-form quadratures do not cover."""

    def __init__(self, r_star: float):
        self.r_star = r_star
        super().__init__(
            f"degenerate radial profile: double root at r = {r_star!r}; "
            "the orbit is the constant-radius solution, analytic quadrature refused"
        )


class HorizontalityError(DomainError):
    """A vector expected to be horizontal has a defect above tolerance."""

    def __init__(self, defect: float, tol: float):
        self.defect = defect
        self.tol = tol
        super().__init__(
            f"vector is not horizontal: defect {defect!r} exceeds tolerance {tol!r}"
        )


class StiffnessError(H5GeoError):
    """Adaptive step size underflowed during integration."""

    def __init__(self, t: float):
        self.t = t
        super().__init__(f"step size underflow at t = {t!r}")
