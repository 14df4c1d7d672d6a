"""Exception hierarchy shared across the solver library and the CLI.

The CLI maps these onto its exit-code contract: invalid input -> 1,
infeasible problem -> 2 (coverage gaps and delay mismatches detected by
``verify`` get their own codes 3 and 4).
"""


class AircoverError(Exception):
    """Base class for all library errors."""


class InvalidInstanceError(AircoverError):
    """Malformed input: bad fields, unsorted/duplicate agents, bad config."""


class DomainError(AircoverError):
    """A formula was evaluated outside its domain (link budget, footprint)."""


class InfeasibleError(AircoverError):
    """No deployment exists for the requested instance/deadline/budget."""


class GridExhaustedError(InfeasibleError):
    """The delay grid ran out before full coverage; signals an inconsistent
    grid unit, since the built-in budget bound is always sufficient."""


class UnsupportedError(AircoverError):
    """A configuration outside the supported solver preconditions."""


class OracleSizeError(AircoverError):
    """An exhaustive oracle was asked to handle more agents than it can."""
