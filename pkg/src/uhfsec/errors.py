"""Exception types shared across the package."""

import os

DEFAULT_BUDGET = 1 << 24
BUDGET_ENV = "UHFSEC_BUDGET"


class InvalidLengthError(ValueError):
    """Field length l for which X^l + ... + X + 1 is not irreducible."""


class BudgetExceededError(RuntimeError):
    """An exhaustive enumeration would exceed the configured budget."""

    def __init__(self, what, size, budget):
        self.what = what
        self.size = size
        self.budget = budget
        super().__init__(f"{what}: enumeration size {size} exceeds budget {budget}")


class ConfigError(ValueError):
    """Malformed experiment configuration."""

    def __init__(self, message, field=None, line=None):
        self.field = field
        self.line = line
        where = ""
        if field is not None:
            where += f" [field {field!r}"
            where += f", line {line}]" if line is not None else "]"
        super().__init__(message + where)


def default_budget():
    """Enumeration budget, overridable through ``UHFSEC_BUDGET``."""
    raw = os.environ.get(BUDGET_ENV)
    if not raw:
        return DEFAULT_BUDGET
    try:
        value = int(raw, 0)
    except ValueError:
        raise ConfigError(f"{BUDGET_ENV} must be an integer, got {raw!r}") from None
    if value <= 0:
        raise ConfigError(f"{BUDGET_ENV} must be positive, got {value}")
    return value


def check_budget(what, size, budget=None):
    budget = default_budget() if budget is None else budget
    if size > budget:
        raise BudgetExceededError(what, size, budget)
