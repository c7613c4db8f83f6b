"""Deterministic LP-format writer backend.

Wraps a ReferenceBackend for state and renders it as LP text.  One
dialect, pinned by the golden files in the test suite:

* objective quadratic terms are doubled inside ``[ ... ] / 2`` (constraint
  brackets carry plain coefficients),
* coefficient 1 is elided, numbers use the shortest decimal that
  round-trips to the same 64-bit float,
* default bounds (0 <= x < +inf) are elided; doubly-unbounded variables
  get an explicit ``free`` line,
* SOS rows use ``S1::`` / ``S2::`` stanzas.

Variables are named by their user name when present, else ``x<column>``;
rows are written in dense order and auto-named ``c<row>`` / ``qc<row>`` /
``s<row>`` per kind when unnamed.
"""

from __future__ import annotations

import math
from pathlib import Path

from optmap.backends.base import (
    Backend,
    ConstraintSense,
    ObjectiveSense,
    VariableDomain,
)
from optmap.backends.reference import ReferenceBackend
from optmap.expressions import ConstraintType

_INF = math.inf


def format_number(value: float) -> str:
    """Shortest decimal that parses back to the identical float."""
    value = float(value)
    if value == int(value) and abs(value) < 1e16:
        return str(int(value))  # also normalizes -0.0 to "0"
    return repr(value)


def _join_terms(pieces: list[tuple[float, str]]) -> str:
    """Render (coefficient, symbol) pairs as ``a x + b y - c z``."""
    out = []
    for position, (coefficient, symbol) in enumerate(pieces):
        magnitude = format_number(abs(coefficient))
        body = symbol if magnitude == "1" else f"{magnitude} {symbol}"
        if position == 0:
            out.append(f"-{body}" if coefficient < 0 else body)
        else:
            out.append(f"- {body}" if coefficient < 0 else f"+ {body}")
    return " ".join(out)


class LpWriterBackend(Backend):
    """Backend that accumulates the model in memory and writes LP files.

    Rendering is a pure function of the stored state: writing twice
    without mutation yields byte-identical files.
    """

    def __init__(self, path: str | Path = "model.lp"):
        self._ref = ReferenceBackend()
        self.path = Path(path)

    @property
    def reference(self) -> ReferenceBackend:
        """The wrapped in-memory state."""
        return self._ref

    # -- delegated backend contract ---------------------------------------

    def append_column(self, lb, ub, domain, name):
        self._ref.append_column(lb, ub, domain, name)

    def delete_columns(self, columns):
        self._ref.delete_columns(columns)

    def append_linear_row(self, columns, coefficients, sense, rhs, name):
        self._ref.append_linear_row(columns, coefficients, sense, rhs, name)

    def append_quadratic_row(
        self, q_columns1, q_columns2, q_coefficients, columns, coefficients, sense, rhs, name
    ):
        self._ref.append_quadratic_row(
            q_columns1, q_columns2, q_coefficients, columns, coefficients, sense, rhs, name
        )

    def append_sos_row(self, sos_type, columns, weights):
        self._ref.append_sos_row(sos_type, columns, weights)

    def delete_rows(self, kind, rows):
        self._ref.delete_rows(kind, rows)

    def set_objective(
        self, q_columns1, q_columns2, q_coefficients, columns, coefficients, constant, sense
    ):
        self._ref.set_objective(
            q_columns1, q_columns2, q_coefficients, columns, coefficients, constant, sense
        )

    def set_time_limit(self, seconds):
        self._ref.set_time_limit(seconds)

    def optimize(self):
        self._ref.optimize()

    def supports(self, kind):
        return self._ref.supports(kind)

    def num_columns(self):
        return self._ref.num_columns()

    def num_rows(self, kind):
        return self._ref.num_rows(kind)

    # -- rendering -----------------------------------------------------------

    def write_lp(self, path: str | Path | None = None) -> Path:
        """Write the LP file and return its path."""
        target = Path(path) if path is not None else self.path
        target.write_text(self.render(), encoding="ascii")
        return target

    def render(self) -> str:
        ref = self._ref
        symbols = [
            column.name if column.name else f"x{index}"
            for index, column in enumerate(ref.columns)
        ]
        lines: list[str] = []

        objective = ref.objective
        lines.append(
            "minimize" if objective.sense is ObjectiveSense.MINIMIZE else "maximize"
        )
        lines.append(self._objective_line(objective, symbols))

        lines.append("subject to")
        for index, row in enumerate(ref.rows(ConstraintType.LINEAR)):
            name = row.name if row.name else f"c{index}"
            body = _join_terms(
                [(c, symbols[col]) for col, c in zip(row.columns, row.coefficients)]
            )
            lines.append(f"{name}: {self._relation(body, row.sense, row.rhs, symbols)}")
        for index, row in enumerate(ref.rows(ConstraintType.QUADRATIC)):
            name = row.name if row.name else f"qc{index}"
            body = _join_terms(
                [(c, symbols[col]) for col, c in zip(row.columns, row.coefficients)]
            )
            bracket = self._quadratic_bracket(
                row.q_columns1, row.q_columns2, row.q_coefficients, symbols, double=False
            )
            if bracket:
                body = f"{body} + {bracket}" if body else bracket
            lines.append(f"{name}: {self._relation(body, row.sense, row.rhs, symbols)}")

        lines.append("bounds")
        for index, column in enumerate(ref.columns):
            bound = self._bound_line(column, symbols[index])
            if bound:
                lines.append(f" {bound}")

        integers = [
            symbols[i]
            for i, column in enumerate(ref.columns)
            if column.domain is VariableDomain.INTEGER
        ]
        if integers:
            lines.append("general")
            lines.extend(f" {symbol}" for symbol in integers)
        binaries = [
            symbols[i]
            for i, column in enumerate(ref.columns)
            if column.domain is VariableDomain.BINARY
        ]
        if binaries:
            lines.append("binary")
            lines.extend(f" {symbol}" for symbol in binaries)

        sos_rows = ref.rows(ConstraintType.SOS)
        if sos_rows:
            lines.append("sos")
            for index, row in enumerate(sos_rows):
                lines.append(f"s{index}: S{int(row.sos_type)}::")
                lines.extend(
                    f" {symbols[col]}:{format_number(weight)}"
                    for col, weight in zip(row.columns, row.weights)
                )

        lines.append("end")
        return "\n".join(lines) + "\n"

    def _objective_line(self, objective, symbols) -> str:
        pieces = [
            (c, symbols[col])
            for col, c in zip(objective.columns, objective.coefficients)
        ]
        body = _join_terms(pieces)
        if objective.constant != 0.0:
            constant = format_number(objective.constant)
            body = f"{body} + {constant}" if body else constant
        bracket = self._quadratic_bracket(
            objective.q_columns1,
            objective.q_columns2,
            objective.q_coefficients,
            symbols,
            double=True,
        )
        if bracket:
            body = f"{body} + {bracket} / 2" if body else f"{bracket} / 2"
        return f"obj: {body}" if body else "obj:"

    @staticmethod
    def _quadratic_bracket(columns1, columns2, coefficients, symbols, double) -> str:
        if not columns1:
            return ""
        pieces = []
        for c1, c2, coefficient in zip(columns1, columns2, coefficients):
            symbol = (
                f"{symbols[c1]} ^ 2" if c1 == c2 else f"{symbols[c1]} * {symbols[c2]}"
            )
            pieces.append((2.0 * coefficient if double else coefficient, symbol))
        return f"[ {_join_terms(pieces)} ]"

    @staticmethod
    def _relation(body, sense, rhs, symbols) -> str:
        if not body:
            # Degenerate row with no surviving terms; keep a parseable lhs.
            body = f"0 {symbols[0]}" if symbols else "0"
        op = {
            ConstraintSense.LEQ: "<=",
            ConstraintSense.GEQ: ">=",
            ConstraintSense.EQ: "=",
        }[sense]
        return f"{body} {op} {format_number(rhs)}"

    @staticmethod
    def _bound_line(column, symbol) -> str | None:
        lb, ub = column.lb, column.ub
        if column.domain is VariableDomain.BINARY and lb == 0.0 and ub == 1.0:
            return None  # the binary section implies 0/1
        if lb == 0.0 and ub == _INF:
            return None  # LP default
        if lb == -_INF and ub == _INF:
            return f"{symbol} free"
        if lb == ub:
            return f"{symbol} = {format_number(lb)}"
        if ub == _INF:
            return f"{symbol} >= {format_number(lb)}"
        if lb == -_INF:
            return f"-infinity <= {symbol} <= {format_number(ub)}"
        return f"{format_number(lb)} <= {symbol} <= {format_number(ub)}"
