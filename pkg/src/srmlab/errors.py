"""Exception types shared across the library."""


class SrmLabError(Exception):
    """Base class for all library-specific failures."""


class NotHermitian(SrmLabError):
    """A matrix required to be Hermitian is not, beyond tolerance."""


class NotPSD(SrmLabError):
    """A matrix required to be positive semidefinite has a negative eigenvalue."""


class ConvergenceFailure(SrmLabError):
    """The iterative eigensolver failed to converge."""


class InvalidPrior(SrmLabError):
    """Prior probabilities are out of range or incorrectly normalized."""


class GramSingular(SrmLabError):
    """The weighted Gram matrix is singular; the states are not linearly independent."""


class SingularFactor(SrmLabError):
    """A candidate measurement factor is singular or has a vanishing diagonal entry."""


class NotBlockDiagonal(SrmLabError):
    """A Gram matrix is not block diagonal with respect to the declared partition."""


class ReducibleBlock(SrmLabError):
    """A declared diagonal block is reducible; the partition must be refined."""


class InvalidFactorization(SrmLabError):
    """A candidate factor does not reproduce the Gram matrix."""


class DomainError(SrmLabError):
    """An argument is outside the domain of a closed-form evaluator."""


class NoRoot(SrmLabError):
    """A bracketed root search found no sign change."""


class GramFileError(SrmLabError):
    """A Gram description file could not be parsed or validated."""
