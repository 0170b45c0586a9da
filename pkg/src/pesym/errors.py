class DomainError(ValueError):
    """A point or parameter lies outside the domain where a formula is valid."""


class VerificationError(RuntimeError):
    """A precondition that itself is a verified property did not hold."""
