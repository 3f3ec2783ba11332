"""Exception hierarchy shared by the library and the CLI."""


class FermiconeError(Exception):
    """Base class for every error raised by fermicone."""


class InvalidArgument(FermiconeError, ValueError):
    pass


class BudgetExceeded(FermiconeError, RuntimeError):
    """Raised when an occupation basis would exceed the configured state budget."""

    def __init__(self, n, N, count, budget):
        self.n, self.N, self.count, self.budget = n, N, count, budget
        super().__init__(
            f"C({n},{N}) = {count} occupation states exceeds the budget of {budget}"
        )


class NotInDualCone(FermiconeError, ValueError):
    """The spectrum violates the membership inequality.

    ``certificate`` holds the orbital labels of the N smallest eigenvalues,
    whose sum (``min_pairing``) is negative.
    """

    def __init__(self, certificate, min_pairing):
        self.certificate = tuple(certificate)
        self.min_pairing = min_pairing
        super().__init__(
            f"not a dual-cone member: orbitals {list(self.certificate)} "
            f"sum to {min_pairing} < 0"
        )


class NonUniqueIndex(FermiconeError, RuntimeError):
    """More than one split index satisfied the canonical-decomposition test."""


class ModelHypothesisError(InvalidArgument):
    """Model parameters violate a structural hypothesis (e.g. n - m >= N - r + 1)."""


class GapConditionError(FermiconeError, ValueError):
    """Model parameters violate a gap condition; ``inequality`` names it with numbers."""

    def __init__(self, inequality, detail=""):
        self.inequality = inequality
        msg = f"gap condition violated: {inequality}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)
