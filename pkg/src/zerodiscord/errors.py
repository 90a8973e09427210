"""Exception types raised across the package."""


class DimensionError(ValueError):
    """Operand shapes are incompatible."""


class NotHermitianError(ValueError):
    """A matrix expected to be Hermitian is not, beyond tolerance."""

    def __init__(self, defect, tol):
        self.defect = defect
        self.tol = tol
        super().__init__(f"matrix is not Hermitian: ||H - H^dag||_F = {defect:.3e} > {tol:.1e} (relative)")


class ConvergenceError(RuntimeError):
    """Jacobi sweeps did not reduce the off-diagonal mass below threshold."""


class NonCommutingError(ValueError):
    """A family handed to simultaneous diagonalization is not a commuting normal family.

    ``pair`` holds the offending member indices (equal indices mean the member
    is not normal) and ``norm`` the raw Frobenius norm of the commutator.
    """

    def __init__(self, pair, norm, relative):
        self.pair = pair
        self.norm = norm
        self.relative = relative
        i, j = pair
        what = f"member {i} is not normal" if i == j else f"members {i} and {j} do not commute"
        super().__init__(f"{what}: commutator norm {norm:.6g} (relative {relative:.3e})")


class InvalidDensityMatrixError(ValueError):
    """Validation failure; ``defects`` maps each failed check to its magnitude."""

    def __init__(self, defects):
        self.defects = dict(defects)
        detail = ", ".join(f"{k}={v:.3e}" for k, v in self.defects.items())
        super().__init__(f"invalid density matrix ({detail})")


class NonzeroDiscordError(ValueError):
    """Pointer extraction was requested for a state that fails the block test."""

    def __init__(self, verdict):
        self.verdict = verdict
        super().__init__(
            "state has nonzero discord: worst block pair "
            f"{verdict.worst_pair} (normality defect {verdict.max_normality_defect:.3e}, "
            f"commutation defect {verdict.max_commutation_defect:.3e})"
        )


class PointerResidualError(RuntimeError):
    """The extracted pointer basis fails to diagonalize the blocks within tolerance."""

    def __init__(self, message, residuals=None):
        self.residuals = residuals
        super().__init__(message)
