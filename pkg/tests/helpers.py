"""Small shared test utilities for evaluating backend row payloads."""

from optmap.backends.base import ConstraintSense


def evaluate_quadratic_row(row, values):
    """Value of a stored quadratic row's left-hand side at dense-indexed values."""
    total = 0.0
    for c1, c2, coefficient in zip(row.q_columns1, row.q_columns2, row.q_coefficients):
        total += coefficient * values[c1] * values[c2]
    for column, coefficient in zip(row.columns, row.coefficients):
        total += coefficient * values[column]
    return total


def row_satisfied(row, values):
    """Whether the row holds at dense-indexed values."""
    lhs = evaluate_quadratic_row(row, values)
    if row.sense is ConstraintSense.LEQ:
        return lhs <= row.rhs
    if row.sense is ConstraintSense.GEQ:
        return lhs >= row.rhs
    return lhs == row.rhs
