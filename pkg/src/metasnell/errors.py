"""Exception types shared across the library."""


class MetasnellError(Exception):
    """Base class for library-specific failures."""


class OutOfDomain(MetasnellError):
    """A footprint point lies outside the declared surface rectangle."""


class UnknownCatalogEntry(MetasnellError):
    """Requested surface/phase catalog name does not exist."""


class BadParams(MetasnellError):
    """Catalog parameters are malformed for the requested entry."""


class TotalInternalReflection(MetasnellError):
    """The direction quadratic has no real root: no propagating branch."""


class GrazingIncidence(MetasnellError):
    """Incident direction is tangent to the interface within tolerance."""


class NoForwardRoot(MetasnellError):
    """Neither root gives a transmitted direction into the upper region."""


class NoBackwardRoot(MetasnellError):
    """Neither root gives a reflected direction back into the lower region."""


class StencilCrossesInterface(MetasnellError):
    """A finite-difference stencil straddles the interface."""


class QuadratureBudgetExceeded(MetasnellError):
    """Requested quadrature accuracy not reached at maximum refinement."""


class SingularSystem(MetasnellError):
    """Gradient-integration grid is degenerate (fewer than 2x2 nodes)."""


class NonTransmittedTarget(MetasnellError):
    """Requested outgoing direction does not point into the upper region."""


class ConfigError(MetasnellError):
    """Run configuration is missing, malformed, or inconsistent."""
