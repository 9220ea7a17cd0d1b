"""Exception types shared across the package."""


class ZenothermError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(ZenothermError):
    """Invalid or malformed experiment configuration."""


class BandStraddle(ZenothermError):
    """Oscillator band straddles (or touches) the 1<->3 Bohr frequency.

    The analytic bounds require every mode frequency to sit strictly on
    one side of omega1 - omega3.
    """


class ZeroCoupling(ZenothermError):
    """A mode has |g| = 0 where threshold formulas need g_min > 0."""


class ConvergenceFailure(ZenothermError):
    """The eigensolver exceeded its sweep budget on a block."""

    def __init__(self, occupations, message=None):
        self.occupations = tuple(occupations)
        super().__init__(
            message or f"eigensolver did not converge on block {self.occupations}"
        )


class NonpositiveTemperature(ZenothermError):
    """Temperature must be positive (T = 0 has a dedicated path)."""


class PlanTooLarge(ZenothermError):
    """Truncation plan would exceed the configured block budget."""

    def __init__(self, block_count, budget):
        self.block_count = block_count
        self.budget = budget
        super().__init__(
            f"truncation plan needs {block_count} blocks, budget is {budget}"
        )


class ChiOutOfRange(ZenothermError):
    """Dominant overlap chi outside (1/2, 1]; the floor bound is vacuous."""


class InadmissibleC(ZenothermError):
    """Coupling norm below the admissibility threshold of the overlap bound."""


class EpsOutOfRange(ZenothermError):
    """epsilon must lie strictly between 0 and 1."""


class BudgetExceeded(ZenothermError):
    """Exact enumeration region contains more tuples than the budget allows."""
