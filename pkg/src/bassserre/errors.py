"""Exceptions shared by the search-based modules."""

from __future__ import annotations

from typing import Any


class BudgetExceeded(RuntimeError):
    """A bounded search ran out of budget; ``state`` lets the caller resume or report."""

    def __init__(self, message: str, state: Any = None):
        super().__init__(message)
        self.state = state


class NotVertexFaithful(ValueError):
    pass


class MissingMorphism(LookupError):
    pass


class FiniteGroupInput(ValueError):
    pass


class PreconditionFailed(ValueError):
    pass
