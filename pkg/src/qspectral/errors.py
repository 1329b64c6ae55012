"""Exception types shared across the package."""


class NotNormalError(ValueError):
    """The operator fails the normality test ``T*T = TT*``."""

    def __init__(self, residual: float, tol: float):
        super().__init__(f"operator is not normal: |T*T - TT*| = {residual:.6g} (tol {tol:.3g})")
        self.residual = residual
        self.tol = tol


class NotPositiveError(ValueError):
    """A self-adjoint positive operator was required."""


class ComplexStructureError(ValueError):
    """``J`` is not an anti self-adjoint unitary."""


class CommutationError(ValueError):
    """An operator fails to commute where commutation is a precondition."""

    def __init__(self, message: str, residuals: dict):
        super().__init__(message)
        self.residuals = residuals
