"""Exceptions shared across the package.

Input validation uses plain ValueError; the classes here mark the two
conditions the CLI maps to dedicated exit codes.
"""


class EnumerationBudgetError(Exception):
    """An exact enumeration would exceed its declared operation budget."""


class InvariantError(Exception):
    """An internal cross-check failed (two evaluation routes disagreed)."""
