"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain where a formula is defined."""


class UnitarityError(RuntimeError):
    """Accumulated propagator drifted away from a unitary matrix."""


class QuadratureError(RuntimeError):
    """Refinement cap reached before the quadrature estimate converged."""


class SingularityError(DomainError):
    """Integration ran into a singular point of the geodesic equation.

    ``last_valid_xi`` is the last grid point that was accepted and
    ``partial`` holds the samples computed up to it (may be ``None``).
    """

    def __init__(self, message, last_valid_xi, partial=None):
        super().__init__(message)
        self.last_valid_xi = last_valid_xi
        self.partial = partial
