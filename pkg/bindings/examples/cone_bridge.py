"""Attach a cone reformulation to one model instance by monkeypatching.

The reformulation below is defined entirely in script code: it builds a
quadratic expression with the bindings' builder and posts it through the
ordinary quadratic-constraint method, so no core changes are needed to
"support" the new constraint shape.
"""

import types

import pyoptmap as pom
from pyoptmap import ScalarQuadraticFunction


def bridge_soc(model, cone_variables, name=""):
    """Rewrite x[0] >= ||(x[1], ..., x[n])|| as one quadratic row.

    The emitted row is x[0]^2 - x[1]^2 - ... - x[n]^2 >= 0.
    """
    expr = ScalarQuadraticFunction()
    x0 = cone_variables[0]
    expr.add_quadratic_term(x0, x0, 1.0)
    for xi in cone_variables[1:]:
        expr.add_quadratic_term(xi, xi, -1.0)
    con = model.add_quadratic_constraint(expr, pom.Geq, 0.0, name)
    return con


model = pom.BoundModel(pom.LpWriterBackend())
model.add_second_order_cone_constraint = types.MethodType(bridge_soc, model)

radius = model.add_variable(lb=0.0, name="r")
s1 = model.add_variable(lb=float("-inf"), name="s1")
s2 = model.add_variable(lb=float("-inf"), name="s2")
cone = model.add_second_order_cone_constraint([radius, s1, s2])

if __name__ == "__main__":
    print(model.backend.render(), end="")
