"""In-memory backend reproducing solver index semantics; the test oracle.

Real solvers re-index the contents of stored rows when columns are
deleted; this backend does the same so that post-deletion constraint
correctness can be validated against it.
"""

from __future__ import annotations

import warnings
from bisect import bisect_left
from dataclasses import dataclass, field
from typing import Sequence

from optmap.backends.base import (
    Backend,
    ConstraintSense,
    ObjectiveSense,
    SosType,
    VariableDomain,
)
from optmap.errors import ContractViolationError, UnsupportedConstraintError
from optmap.expressions import ConstraintType


@dataclass(slots=True)
class Column:
    lb: float
    ub: float
    domain: VariableDomain
    name: str


@dataclass(slots=True)
class LinearRow:
    columns: list[int]
    coefficients: list[float]
    sense: ConstraintSense
    rhs: float
    name: str


@dataclass(slots=True)
class QuadraticRow:
    q_columns1: list[int]
    q_columns2: list[int]
    q_coefficients: list[float]
    columns: list[int]
    coefficients: list[float]
    sense: ConstraintSense
    rhs: float
    name: str


@dataclass(slots=True)
class SosRow:
    sos_type: SosType
    columns: list[int]
    weights: list[float]


@dataclass(slots=True)
class Objective:
    q_columns1: list[int] = field(default_factory=list)
    q_columns2: list[int] = field(default_factory=list)
    q_coefficients: list[float] = field(default_factory=list)
    columns: list[int] = field(default_factory=list)
    coefficients: list[float] = field(default_factory=list)
    constant: float = 0.0
    sense: ObjectiveSense = ObjectiveSense.MINIMIZE


_ROW_KINDS = (ConstraintType.LINEAR, ConstraintType.QUADRATIC, ConstraintType.SOS)


class ReferenceBackend(Backend):
    """Stores the full dense-indexed model in memory.

    ``optimize`` is a build-only no-op that records it was called; nothing
    in this package ever solves a model.
    """

    def __init__(self):
        self.columns: list[Column] = []
        self._rows: dict[ConstraintType, list] = {kind: [] for kind in _ROW_KINDS}
        self.objective = Objective()
        self.time_limit: float | None = None
        self.optimize_calls = 0

    # -- columns ---------------------------------------------------------

    def append_column(self, lb, ub, domain, name):
        self.columns.append(Column(lb, ub, domain, name))

    def delete_columns(self, columns):
        deleted = self._check_delete_set(columns, len(self.columns), "column")
        if len(deleted) == 1:
            del self.columns[deleted[0]]
        else:
            self.columns[:] = [
                column
                for index, column in enumerate(self.columns)
                if not _contains(deleted, index)
            ]
        dropped = 0
        for row in self._rows[ConstraintType.LINEAR]:
            dropped += _reindex_terms(deleted, row.columns, row.coefficients)
        for row in self._rows[ConstraintType.QUADRATIC]:
            dropped += _reindex_pairs(
                deleted, row.q_columns1, row.q_columns2, row.q_coefficients
            )
            dropped += _reindex_terms(deleted, row.columns, row.coefficients)
        for row in self._rows[ConstraintType.SOS]:
            dropped += _reindex_terms(deleted, row.columns, row.weights)
        if dropped:
            warnings.warn(
                f"deleted columns were still referenced; dropped {dropped} "
                "row term(s)",
                stacklevel=2,
            )
        # Objective terms over deleted columns vanish silently, as they do
        # inside a real solver.
        _reindex_terms(deleted, self.objective.columns, self.objective.coefficients)
        _reindex_pairs(
            deleted,
            self.objective.q_columns1,
            self.objective.q_columns2,
            self.objective.q_coefficients,
        )

    # -- rows --------------------------------------------------------------

    def append_linear_row(self, columns, coefficients, sense, rhs, name):
        self._check_columns(columns)
        self._rows[ConstraintType.LINEAR].append(
            LinearRow(list(columns), list(coefficients), sense, rhs, name)
        )

    def append_quadratic_row(
        self, q_columns1, q_columns2, q_coefficients, columns, coefficients, sense, rhs, name
    ):
        self._check_columns(q_columns1)
        self._check_columns(q_columns2)
        self._check_columns(columns)
        self._rows[ConstraintType.QUADRATIC].append(
            QuadraticRow(
                list(q_columns1),
                list(q_columns2),
                list(q_coefficients),
                list(columns),
                list(coefficients),
                sense,
                rhs,
                name,
            )
        )

    def append_sos_row(self, sos_type, columns, weights):
        self._check_columns(columns)
        self._rows[ConstraintType.SOS].append(
            SosRow(sos_type, list(columns), list(weights))
        )

    def delete_rows(self, kind, rows):
        if kind not in self._rows:
            raise UnsupportedConstraintError(f"no row class for {kind!r}")
        stored = self._rows[kind]
        deleted = self._check_delete_set(rows, len(stored), "row")
        if len(deleted) == 1:
            del stored[deleted[0]]
        else:
            stored[:] = [
                row
                for index, row in enumerate(stored)
                if not _contains(deleted, index)
            ]

    # -- whole-model operations --------------------------------------------

    def set_objective(
        self, q_columns1, q_columns2, q_coefficients, columns, coefficients, constant, sense
    ):
        self._check_columns(q_columns1)
        self._check_columns(q_columns2)
        self._check_columns(columns)
        self.objective = Objective(
            list(q_columns1),
            list(q_columns2),
            list(q_coefficients),
            list(columns),
            list(coefficients),
            constant,
            sense,
        )

    def set_time_limit(self, seconds):
        self.time_limit = float(seconds)

    def optimize(self):
        self.optimize_calls += 1

    def supports(self, kind):
        return kind in _ROW_KINDS

    def num_columns(self):
        return len(self.columns)

    def num_rows(self, kind):
        rows = self._rows.get(kind)
        return 0 if rows is None else len(rows)

    def rows(self, kind) -> list:
        """Stored rows of one kind, in dense order (read-only for callers)."""
        return self._rows[kind]

    # -- validation ----------------------------------------------------------

    def _check_columns(self, columns):
        count = len(self.columns)
        for column in columns:
            if column < 0 or column >= count:
                raise ContractViolationError(
                    f"column index {column} out of range [0, {count})"
                )

    @staticmethod
    def _check_delete_set(indices, count, what):
        indices = list(indices)
        previous = -1
        for index in indices:
            if index <= previous:
                raise ContractViolationError(
                    f"{what} delete set must be strictly increasing, got {indices}"
                )
            if index < 0 or index >= count:
                raise ContractViolationError(
                    f"{what} index {index} out of range [0, {count})"
                )
            previous = index
        return indices


class LinearOnlyBackend(ReferenceBackend):
    """Test double standing in for a solver without quadratic/SOS support."""

    def supports(self, kind):
        return kind == ConstraintType.LINEAR

    def append_quadratic_row(self, *args, **kwargs):
        raise UnsupportedConstraintError("backend does not support quadratic rows")

    def append_sos_row(self, *args, **kwargs):
        raise UnsupportedConstraintError("backend does not support SOS rows")


def _contains(sorted_indices, value):
    pos = bisect_left(sorted_indices, value)
    return pos < len(sorted_indices) and sorted_indices[pos] == value


def _shift(sorted_deleted, value):
    return value - bisect_left(sorted_deleted, value)


def _reindex_terms(deleted, columns, values):
    """Apply the rank-subtraction rule in place; drop vanished references.

    Returns the number of dropped terms.
    """
    if not deleted or not columns:
        return 0
    kept_columns = []
    kept_values = []
    if len(deleted) == 1:
        # Deletes arrive one at a time on the model path; plain comparisons
        # beat per-term binary searches by a wide margin there.
        gone = deleted[0]
        for column in columns:
            if column >= gone:
                break
        else:
            return 0  # every reference sits below the deleted column
        for column, value in zip(columns, values):
            if column == gone:
                continue
            kept_columns.append(column - 1 if column > gone else column)
            kept_values.append(value)
    else:
        for column, value in zip(columns, values):
            if _contains(deleted, column):
                continue
            kept_columns.append(_shift(deleted, column))
            kept_values.append(value)
    dropped = len(columns) - len(kept_columns)
    columns[:] = kept_columns
    values[:] = kept_values
    return dropped


def _reindex_pairs(deleted, columns1, columns2, values):
    """Rank-subtraction for paired references; a pair vanishes when either
    side is deleted.  Returns the number of dropped terms."""
    if not deleted or not columns1:
        return 0
    kept1 = []
    kept2 = []
    kept_values = []
    if len(deleted) == 1:
        gone = deleted[0]
        touched = False
        for c1, c2 in zip(columns1, columns2):
            if c1 >= gone or c2 >= gone:
                touched = True
                break
        if not touched:
            return 0
        for c1, c2, value in zip(columns1, columns2, values):
            if c1 == gone or c2 == gone:
                continue
            kept1.append(c1 - 1 if c1 > gone else c1)
            kept2.append(c2 - 1 if c2 > gone else c2)
            kept_values.append(value)
    else:
        for c1, c2, value in zip(columns1, columns2, values):
            if _contains(deleted, c1) or _contains(deleted, c2):
                continue
            kept1.append(_shift(deleted, c1))
            kept2.append(_shift(deleted, c2))
            kept_values.append(value)
    dropped = len(columns1) - len(kept1)
    columns1[:] = kept1
    columns2[:] = kept2
    values[:] = kept_values
    return dropped
