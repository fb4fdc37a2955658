"""Exception types shared across the package."""


class LehmerLabError(Exception):
    """Base class for package-specific errors."""


class InvalidModulus(LehmerLabError):
    """Modulus outside the supported range [2, 2**62]."""


class NotInvertible(LehmerLabError):
    """Requested the modular inverse of a non-unit."""


class ZeroExponent(LehmerLabError):
    """A power vector contains a zero component."""


class PlanMismatch(LehmerLabError):
    """A CRT plan was built for a different modulus."""


class AllZeroCoefficients(LehmerLabError):
    """The coefficient vector is identically zero where a nonzero one is required."""


class CoprimalityViolation(LehmerLabError):
    """A progression modulus shares a prime factor with q."""


class EvenModulus(LehmerLabError):
    """Parity statistics are only defined for odd q."""


class RangeTooLarge(LehmerLabError):
    """Estimated scan work exceeds the configured budget."""


class InsufficientData(LehmerLabError):
    """Too few usable points for a least-squares fit."""
