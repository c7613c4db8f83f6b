"""Constraint bridges: reformulations for kinds a backend lacks.

A bridge is a callable ``bridge(model, *args, **kwargs)`` registered on a
model under a kind tag.  ``Model.submit`` routes to it whenever the kind
is not natively supported, so generators can emit one vocabulary and run
against backends of different capability.
"""

from __future__ import annotations

from optmap.backends.base import ConstraintSense
from optmap.expressions import (
    ConstraintIndex,
    ScalarQuadraticFunction,
    VariableIndex,
)
from optmap.model import Model

SECOND_ORDER_CONE = "second_order_cone"


def bridge_soc(
    model: Model, cone_variables: list[VariableIndex], name: str = ""
) -> ConstraintIndex:
    """Lower ``x0 >= sqrt(x1^2 + ... + xk^2)`` to one quadratic row.

    Emits ``x0^2 - x1^2 - ... - xk^2 >= 0`` and returns its handle, so
    deleting the returned constraint deletes the reformulation.  The
    quadratic form alone admits the reflected cone (x0 <= 0) as well;
    callers that need the true cone must bound x0 below by zero
    themselves.  The row is emitted without that side condition so the
    lowering stays a pure one-row rewrite of the membership inequality.
    """
    if len(cone_variables) < 2:
        raise ValueError(
            f"a second-order cone needs at least 2 variables, got {len(cone_variables)}"
        )
    expression = ScalarQuadraticFunction()
    expression.add_quadratic_term(cone_variables[0], cone_variables[0], 1.0)
    for variable in cone_variables[1:]:
        expression.add_quadratic_term(variable, variable, -1.0)
    return model.add_quadratic_constraint(expression, ConstraintSense.GEQ, 0.0, name)


def register_soc_bridge(model: Model) -> None:
    """Register :func:`bridge_soc` under :data:`SECOND_ORDER_CONE`."""
    model.register_bridge(SECOND_ORDER_CONE, bridge_soc)
