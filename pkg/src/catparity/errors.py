"""Exception types shared across the package."""


class CatParityError(Exception):
    """Base class for all package-specific errors."""


class DomainError(CatParityError, ValueError):
    """Input outside the mathematical domain of a kernel."""


class RangeError(CatParityError, ValueError):
    """Result would overflow; use the exponentially scaled variant."""


class TruncationError(CatParityError, ValueError):
    """Requested amplitude is too large for the Fock truncation."""


class DimensionMismatchError(CatParityError, ValueError):
    """Operands live on different Fock spaces."""


class NearResonanceError(CatParityError, ValueError):
    """A second-order denominator l_a*omega_a - l_b*omega_b is below the floor."""

    def __init__(self, l_a: int, l_b: int, gap: float, floor: float):
        self.l_a = l_a
        self.l_b = l_b
        self.gap = gap
        self.floor = floor
        super().__init__(
            f"near-resonant pair (l_a={l_a}, l_b={l_b}): "
            f"|l_a*omega_a - l_b*omega_b| = {gap:.6g} rad/s < floor {floor:.6g} rad/s"
        )


class StiffnessError(CatParityError, RuntimeError):
    """Adaptive step size underflowed during integration."""


class ConvergenceError(CatParityError, RuntimeError):
    """Iteration failed to reach the requested residual."""


class FitQualityError(CatParityError, RuntimeError):
    """Decay fit rejected; carries the achieved R^2."""

    def __init__(self, message: str, r_squared: float):
        self.r_squared = r_squared
        super().__init__(f"{message} (R^2 = {r_squared:.4f})")


class DispersiveRegimeError(CatParityError, ValueError):
    """Readout parameters violate the dispersive guard phi_c^2 * n_c <= 0.05."""
