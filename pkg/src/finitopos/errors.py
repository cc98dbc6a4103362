"""Shared exception types."""

from __future__ import annotations


class FinitoposError(Exception):
    pass


class ShapeMismatch(FinitoposError):
    """Inputs whose sources/targets/bases do not line up."""


class BudgetExceeded(FinitoposError):
    """An enumeration outgrew its candidate budget."""

    def __init__(self, what: str, budget: int):
        super().__init__(f"{what}: enumeration budget {budget} exceeded")
        self.what = what
        self.budget = budget


class NonUnique(FinitoposError):
    """A map required to be unique had zero or several candidates."""


class SaturationOverflow(FinitoposError):
    """Closing generators under composition exceeded the morphism bound."""


class InvalidStructure(FinitoposError):
    """Validation failed; carries the full violation list."""

    def __init__(self, violations):
        self.violations = list(violations)
        lines = "; ".join(str(v) for v in self.violations[:5])
        extra = "" if len(self.violations) <= 5 else f" (+{len(self.violations) - 5} more)"
        super().__init__(f"{len(self.violations)} violation(s): {lines}{extra}")
