"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of the requested quantity."""


class IntegrityError(ArithmeticError):
    """A numerical result violated an invariant it is required to satisfy.

    Raised for non-convergent iterations, non-monotone CDF values handed to a
    goodness-of-fit routine, degenerate samples, and similar failures that
    indicate a bug or an evaluation outside the supported range rather than a
    bad user argument.
    """
