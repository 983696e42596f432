"""Exception types shared across the package.

Every error carries a short upper-case ``code`` (e.g. ``"UNIMODULAR"``) that
the command line front end prints and maps onto its exit status.
"""


class Embed47Error(Exception):
    code = "ERROR"

    def __init__(self, message: str = "", code: str | None = None):
        if code is not None:
            self.code = code
        super().__init__(f"{self.code}: {message}" if message else self.code)


class ValidationError(Embed47Error):
    """Input violates a standing hypothesis (symmetry, unimodularity, ...)."""

    code = "VALIDATION"


class DimensionError(Embed47Error):
    code = "DIMENSION"


class MembershipError(Embed47Error):
    """A vector or element is not where the operation needs it to be."""

    code = "MEMBERSHIP"


class NonIntegralError(Embed47Error):
    code = "NON_INTEGRAL"


class UnresolvedThetaError(Embed47Error):
    code = "UNRESOLVED_THETA"


class BudgetExceeded(Embed47Error):
    code = "BUDGET"


class InfiniteGroupError(Embed47Error):
    code = "INFINITE_AMBIENT"


class PsiTableError(Embed47Error):
    code = "PSI_TABLE"
