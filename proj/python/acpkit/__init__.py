"""Toolkit for ACP with guarded recursion."""

from ._acpkit import (
    AcpError,
    BudgetError,
    ParseError,
    Term,
    ValidationError,
    check,
    format_spec,
    hnf,
    linearize,
    lts,
    parse_term,
    prove,
    to_aut,
)

__all__ = [
    "AcpError",
    "BudgetError",
    "ParseError",
    "Term",
    "ValidationError",
    "check",
    "format_spec",
    "hnf",
    "linearize",
    "lts",
    "parse_term",
    "prove",
    "to_aut",
]
