"""Model layer: stable user handles over a mutable backend.

The model keeps one index map for variables and one per constraint kind.
Handles carry the bit location they were issued at; the map translates
that location to the backend's current dense column/row index on every
call.  All coefficient data lives in the backend — the model forwards
each operation immediately and stores nothing but the maps.

Deletion resolves the handle first and marks the map second, so the
backend always receives a still-valid dense index; deleting an
already-deleted handle is a no-op.  Using a deleted handle inside an
expression submission is an error (failing loudly beats silently
building the wrong model), while the resolve methods report deletion
as INVALID_INDEX for callers that want to probe.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import inf, isfinite
from typing import Callable, Sequence

from optmap.backends.base import (
    Backend,
    ConstraintSense,
    ObjectiveSense,
    SosType,
    VariableDomain,
)
from optmap.errors import StaleHandleError, UnsupportedConstraintError
from optmap.expressions import (
    ConstraintIndex,
    ConstraintType,
    ScalarAffineFunction,
    ScalarQuadraticFunction,
    VariableIndex,
)
from optmap.indexmap import INVALID_INDEX, BipurMap

_ROW_KINDS = (ConstraintType.LINEAR, ConstraintType.QUADRATIC, ConstraintType.SOS)


@dataclass(frozen=True, slots=True)
class ModelCounts:
    """Live entity counts, one per handle space."""

    variables: int
    linear_rows: int
    quadratic_rows: int
    sos_rows: int


class Model:
    """Solver-facing model with delete-stable handles.

    Bridges extend the constraint vocabulary: ``register_bridge`` binds a
    kind (a :class:`ConstraintType` or any hashable tag) to a callable
    ``bridge(model, *args, **kwargs)`` that reformulates the request in
    terms the backend accepts.  ``submit`` dispatches to the backend for
    natively supported kinds and to the registered bridge otherwise.
    """

    def __init__(self, backend: Backend):
        self.backend = backend
        self.objective_sense = ObjectiveSense.MINIMIZE
        self._variables = BipurMap()
        self._rows = {kind: BipurMap() for kind in _ROW_KINDS}
        self._bridges: dict[object, Callable] = {}

    # -- variables ---------------------------------------------------------

    def add_variable(
        self,
        lb: float = 0.0,
        ub: float = inf,
        domain: VariableDomain = VariableDomain.CONTINUOUS,
        name: str = "",
    ) -> VariableIndex:
        lb, ub = float(lb), float(ub)
        if not lb <= ub:
            raise ValueError(f"lower bound {lb} exceeds upper bound {ub}")
        if domain is VariableDomain.BINARY:
            lb, ub = max(lb, 0.0), min(ub, 1.0)
            if lb > ub:
                raise ValueError(
                    f"binary bounds [{lb}, {ub}] do not intersect [0, 1]"
                )
        location = self._variables.add_entity()
        self.backend.append_column(lb, ub, domain, name)
        return VariableIndex(location)

    def delete_variable(self, variable: VariableIndex) -> None:
        """Delete the column; a no-op if the handle is already deleted."""
        column = self._variables.calculate_index(variable.bit_location)
        if column == INVALID_INDEX:
            return
        self.backend.delete_columns([column])
        self._variables.delete_entity(variable.bit_location)

    def resolve_variable(self, variable: VariableIndex) -> int:
        """Current backend column, or INVALID_INDEX if deleted."""
        return self._variables.calculate_index(variable.bit_location)

    def is_variable_live(self, variable: VariableIndex) -> bool:
        return self._variables.is_live(variable.bit_location)

    # -- constraints ---------------------------------------------------------

    def add_linear_constraint(
        self,
        expression: ScalarAffineFunction,
        sense: ConstraintSense,
        rhs: float,
        name: str = "",
    ) -> ConstraintIndex:
        self._require_support(ConstraintType.LINEAR)
        self._require_finite_rhs(rhs)
        columns, coefficients, constant = self._resolve_affine(expression)
        location = self._rows[ConstraintType.LINEAR].add_entity()
        self.backend.append_linear_row(columns, coefficients, sense, rhs - constant, name)
        return ConstraintIndex(ConstraintType.LINEAR, location)

    def add_quadratic_constraint(
        self,
        expression: ScalarQuadraticFunction,
        sense: ConstraintSense,
        rhs: float,
        name: str = "",
    ) -> ConstraintIndex:
        self._require_support(ConstraintType.QUADRATIC)
        self._require_finite_rhs(rhs)
        q1, q2, qc = self._resolve_quadratic(expression)
        columns, coefficients, constant = self._resolve_affine(expression.affine)
        location = self._rows[ConstraintType.QUADRATIC].add_entity()
        self.backend.append_quadratic_row(
            q1, q2, qc, columns, coefficients, sense, rhs - constant, name
        )
        return ConstraintIndex(ConstraintType.QUADRATIC, location)

    def add_sos_constraint(
        self,
        variables: Sequence[VariableIndex],
        weights: Sequence[float],
        sos_type: SosType,
    ) -> ConstraintIndex:
        self._require_support(ConstraintType.SOS)
        if len(variables) != len(weights):
            raise ValueError(
                f"{len(variables)} variables but {len(weights)} weights"
            )
        if not variables:
            raise ValueError("an ordered set needs at least one variable")
        weights = [float(w) for w in weights]
        if len(set(weights)) != len(weights):
            raise ValueError(f"weights must be distinct, got {weights}")
        columns = [self._live_column(v) for v in variables]
        location = self._rows[ConstraintType.SOS].add_entity()
        self.backend.append_sos_row(sos_type, columns, weights)
        return ConstraintIndex(ConstraintType.SOS, location)

    def delete_constraint(self, constraint: ConstraintIndex) -> None:
        """Delete the row; a no-op if the handle is already deleted."""
        row = self._row_map(constraint).calculate_index(constraint.bit_location)
        if row == INVALID_INDEX:
            return
        self.backend.delete_rows(constraint.type, [row])
        self._rows[constraint.type].delete_entity(constraint.bit_location)

    def resolve_constraint(self, constraint: ConstraintIndex) -> int:
        """Current backend row within its kind, or INVALID_INDEX if deleted."""
        return self._row_map(constraint).calculate_index(constraint.bit_location)

    def is_constraint_live(self, constraint: ConstraintIndex) -> bool:
        return self._row_map(constraint).is_live(constraint.bit_location)

    # -- objective ---------------------------------------------------------

    def set_objective(
        self,
        expression: ScalarAffineFunction | ScalarQuadraticFunction,
        sense: ObjectiveSense = ObjectiveSense.MINIMIZE,
    ) -> None:
        """Replace the backend objective wholesale."""
        if isinstance(expression, ScalarQuadraticFunction):
            q1, q2, qc = self._resolve_quadratic(expression)
            columns, coefficients, constant = self._resolve_affine(expression.affine)
        else:
            q1, q2, qc = [], [], []
            columns, coefficients, constant = self._resolve_affine(expression)
        self.backend.set_objective(q1, q2, qc, columns, coefficients, constant, sense)
        self.objective_sense = sense

    # -- bridges ---------------------------------------------------------

    def register_bridge(self, kind, bridge: Callable) -> None:
        """Bind ``kind`` to a reformulation callable.

        Raises ValueError if the kind already has a bridge; deregister
        first to replace one.
        """
        if kind in self._bridges:
            raise ValueError(f"a bridge for kind {kind!r} is already registered")
        self._bridges[kind] = bridge

    def deregister_bridge(self, kind) -> None:
        del self._bridges[kind]

    def submit(self, kind, *args, **kwargs):
        """Add a constraint of any kind, bridging when needed.

        Natively supported core kinds go straight to the matching add
        method; anything else dispatches to its registered bridge.
        """
        if isinstance(kind, ConstraintType) and kind in self._rows:
            if self.backend.supports(kind):
                adder = {
                    ConstraintType.LINEAR: self.add_linear_constraint,
                    ConstraintType.QUADRATIC: self.add_quadratic_constraint,
                    ConstraintType.SOS: self.add_sos_constraint,
                }[kind]
                return adder(*args, **kwargs)
        if kind in self._bridges:
            return self._bridges[kind](self, *args, **kwargs)
        raise UnsupportedConstraintError(
            f"backend does not support kind {kind!r} and no bridge is registered"
        )

    # -- bookkeeping ---------------------------------------------------------

    def counts(self) -> ModelCounts:
        return ModelCounts(
            variables=self._variables.live_count,
            linear_rows=self._rows[ConstraintType.LINEAR].live_count,
            quadratic_rows=self._rows[ConstraintType.QUADRATIC].live_count,
            sos_rows=self._rows[ConstraintType.SOS].live_count,
        )

    def set_time_limit(self, seconds: float) -> None:
        self.backend.set_time_limit(seconds)

    def optimize(self) -> None:
        self.backend.optimize()

    # -- internals ---------------------------------------------------------

    def _row_map(self, constraint: ConstraintIndex) -> BipurMap:
        try:
            return self._rows[constraint.type]
        except KeyError:
            raise UnsupportedConstraintError(
                f"constraint kind {constraint.type!r} is reserved"
            ) from None

    def _require_support(self, kind: ConstraintType) -> None:
        if not self.backend.supports(kind):
            raise UnsupportedConstraintError(
                f"backend does not support {kind.name} constraints; "
                f"register a bridge and use submit() instead"
            )

    @staticmethod
    def _require_finite_rhs(rhs: float) -> None:
        if not isfinite(rhs):
            raise ValueError(f"right-hand side must be finite, got {rhs}")

    def _live_column(self, variable: VariableIndex) -> int:
        column = self._variables.calculate_index(variable.bit_location)
        if column == INVALID_INDEX:
            raise StaleHandleError(
                f"variable handle at location {variable.bit_location} was deleted"
            )
        return column

    def _resolve_affine(
        self, expression: ScalarAffineFunction
    ) -> tuple[list[int], list[float], float]:
        canonical = expression.canonicalize()
        columns = [self._live_column(v) for v, _ in canonical.terms]
        coefficients = [c for _, c in canonical.terms]
        return columns, coefficients, canonical.constant

    def _resolve_quadratic(
        self, expression: ScalarQuadraticFunction
    ) -> tuple[list[int], list[int], list[float]]:
        canonical = expression.canonicalize()
        q1 = [self._live_column(v1) for v1, _, _ in canonical.quadratic_terms]
        q2 = [self._live_column(v2) for _, v2, _ in canonical.quadratic_terms]
        qc = [c for _, _, c in canonical.quadratic_terms]
        return q1, q2, qc
