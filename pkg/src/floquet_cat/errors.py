"""Exception hierarchy shared across the package."""


class FloquetCatError(Exception):
    """Base class for all package errors."""


class InvalidDimensionError(FloquetCatError):
    """A Fock truncation or matrix dimension is out of range."""


class LayoutMismatchError(FloquetCatError):
    """Operator/state layouts are incompatible."""


class NoValidSidebandError(FloquetCatError):
    """The sideband selection rule produced no positive order."""


class AsymmetricCouplingError(FloquetCatError):
    """g1*J(mu1) != g2*J(mu2) beyond tolerance; the reduction assumes G1 = G2."""


class DegenerateOutcomeError(FloquetCatError):
    """A projective outcome has vanishing probability; the conditioned state is undefined."""


class StiffnessError(FloquetCatError):
    """Adaptive step-size control underflowed."""


class IntegratorAccuracyError(FloquetCatError):
    """A trajectory violated a positivity/trace contract beyond tolerance."""


class ConfigError(FloquetCatError):
    """Configuration file missing, malformed, or containing unknown/invalid keys."""
