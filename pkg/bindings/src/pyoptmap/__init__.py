"""Script-friendly bindings for the optmap modeling core.

The core keeps expression construction explicit (``add_term`` calls on
handle objects).  This layer adds the surface a script user expects:

* operator-built expressions — ``x + 2 * y + 3 * z``, ``x * x``,
  ``expr * scalar``, ``expr + expr``;
* a :class:`BoundModel` whose methods take keyword arguments and the
  sense symbols :data:`Leq` / :data:`Geq` / :data:`Eq`;
* :func:`attach_method` for binding extra procedures (such as the
  second-order cone reformulation) onto a single model instance.

Every call delegates 1:1 to a core operation; this layer holds no model
state of its own.  Variables are opaque value objects: scripts compare
and hash them but never see or manage dense solver indices.
"""

from __future__ import annotations

import math
import types

from optmap import ConstraintSense, ObjectiveSense, SosType, VariableDomain
from optmap import LpWriterBackend, ReferenceBackend
from optmap import Model as _CoreModel
from optmap import ScalarAffineFunction as _CoreAffine
from optmap import ScalarQuadraticFunction as _CoreQuadratic
from optmap import bridge_soc as _core_bridge_soc

__all__ = [
    "BoundModel",
    "Eq",
    "Geq",
    "Leq",
    "LinExpr",
    "LpWriterBackend",
    "Maximize",
    "Minimize",
    "QuadExpr",
    "ReferenceBackend",
    "ScalarAffineFunction",
    "ScalarQuadraticFunction",
    "SosType",
    "Var",
    "VariableDomain",
    "add_second_order_cone_constraint",
    "attach_method",
]

#: Constraint sense symbols, script-side names for the core enum.
Leq = ConstraintSense.LEQ
Geq = ConstraintSense.GEQ
Eq = ConstraintSense.EQ

#: Objective sense symbols.
Minimize = ObjectiveSense.MINIMIZE
Maximize = ObjectiveSense.MAXIMIZE


class Var:
    """Opaque variable token with operator-based expression building.

    Equality and hashing follow the underlying core handle, so variables
    work as dictionary keys and set members.  No numeric index is
    exposed; deleting and resolving happen through the model.
    """

    __slots__ = ("_handle",)

    def __init__(self, handle):
        self._handle = handle

    def __eq__(self, other):
        if not isinstance(other, Var):
            return NotImplemented
        return self._handle == other._handle

    def __hash__(self):
        return hash(self._handle)

    def __repr__(self):
        return f"Var({self._handle!r})"

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        return _as_linear(self).__add__(other)

    __radd__ = __add__

    def __sub__(self, other):
        return _as_linear(self).__sub__(other)

    def __rsub__(self, other):
        return _as_linear(self).__rsub__(other)

    def __neg__(self):
        return LinExpr([(self, -1.0)], 0.0)

    def __mul__(self, other):
        return _as_linear(self).__mul__(other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return _as_linear(self).__truediv__(other)


class LinExpr:
    """Affine expression: ordered (variable, coefficient) terms + constant.

    Instances are immutable from the operator API; every operation
    returns a new expression.  Terms are kept in build order — merging,
    sorting, and zero-cancellation are the core's job.
    """

    __slots__ = ("_terms", "_constant")

    def __init__(self, terms=(), constant=0.0):
        self._terms = list(terms)
        self._constant = float(constant)

    def __repr__(self):
        return f"LinExpr({self._terms!r}, {self._constant!r})"

    def __add__(self, other):
        operand = _linear_operand(other)
        if operand is None:
            quadratic = _quadratic_operand(other)
            if quadratic is None:
                return NotImplemented
            return quadratic.__add__(self)
        return LinExpr(
            self._terms + operand._terms, self._constant + operand._constant
        )

    __radd__ = __add__

    def __sub__(self, other):
        operand = _linear_operand(other)
        if operand is None:
            quadratic = _quadratic_operand(other)
            if quadratic is None:
                return NotImplemented
            return self.__add__(quadratic._scaled(-1.0))
        return self.__add__(operand._scaled(-1.0))

    def __rsub__(self, other):
        operand = _linear_operand(other)
        if operand is None:
            return NotImplemented
        return operand.__add__(self._scaled(-1.0))

    def __neg__(self):
        return self._scaled(-1.0)

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return self._scaled(float(other))
        operand = _linear_operand(other)
        if operand is None:
            return NotImplemented
        q_terms = [
            (va, vb, ca * cb)
            for va, ca in self._terms
            for vb, cb in operand._terms
        ]
        terms = []
        if self._constant:
            terms += [(vb, self._constant * cb) for vb, cb in operand._terms]
        if operand._constant:
            terms += [(va, operand._constant * ca) for va, ca in self._terms]
        return QuadExpr(q_terms, terms, self._constant * operand._constant)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, (int, float)):
            return NotImplemented
        return self._scaled(1.0 / float(other))

    def _scaled(self, factor):
        return LinExpr(
            [(variable, coefficient * factor) for variable, coefficient in self._terms],
            self._constant * factor,
        )

    def _to_core(self):
        expression = _CoreAffine(constant=self._constant)
        for variable, coefficient in self._terms:
            expression.add_term(_handle(variable), coefficient)
        return expression


class QuadExpr:
    """Quadratic expression: pair terms + affine terms + constant.

    Also usable as a mutable builder through :meth:`add_quadratic_term` /
    :meth:`add_affine_term`, mirroring the core builder's method names so
    reformulation procedures read the same on either layer.
    """

    __slots__ = ("_q_terms", "_terms", "_constant")

    def __init__(self, q_terms=(), terms=(), constant=0.0):
        self._q_terms = list(q_terms)
        self._terms = list(terms)
        self._constant = float(constant)

    def __repr__(self):
        return f"QuadExpr({self._q_terms!r}, {self._terms!r}, {self._constant!r})"

    def add_quadratic_term(self, variable1, variable2, coefficient):
        self._q_terms.append((variable1, variable2, float(coefficient)))

    def add_affine_term(self, variable, coefficient):
        self._terms.append((variable, float(coefficient)))

    def __add__(self, other):
        operand = _quadratic_operand(other)
        if operand is None:
            return NotImplemented
        return QuadExpr(
            self._q_terms + operand._q_terms,
            self._terms + operand._terms,
            self._constant + operand._constant,
        )

    __radd__ = __add__

    def __sub__(self, other):
        operand = _quadratic_operand(other)
        if operand is None:
            return NotImplemented
        return self.__add__(operand._scaled(-1.0))

    def __rsub__(self, other):
        operand = _quadratic_operand(other)
        if operand is None:
            return NotImplemented
        return operand.__add__(self._scaled(-1.0))

    def __neg__(self):
        return self._scaled(-1.0)

    def __mul__(self, other):
        if not isinstance(other, (int, float)):
            return NotImplemented  # degree > 2 has no home in the core
        return self._scaled(float(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, (int, float)):
            return NotImplemented
        return self._scaled(1.0 / float(other))

    def _scaled(self, factor):
        return QuadExpr(
            [(v1, v2, c * factor) for v1, v2, c in self._q_terms],
            [(v, c * factor) for v, c in self._terms],
            self._constant * factor,
        )

    def _to_core(self):
        expression = _CoreQuadratic()
        for variable1, variable2, coefficient in self._q_terms:
            expression.add_quadratic_term(
                _handle(variable1), _handle(variable2), coefficient
            )
        for variable, coefficient in self._terms:
            expression.add_affine_term(_handle(variable), coefficient)
        expression.constant = self._constant
        return expression


#: Builder aliases matching the core's class names, so a reformulation
#: procedure written against the core reads identically here.
ScalarAffineFunction = LinExpr
ScalarQuadraticFunction = QuadExpr


def _handle(variable):
    if not isinstance(variable, Var):
        raise TypeError(
            f"expected a model variable, got {type(variable).__name__}"
        )
    return variable._handle


def _as_linear(value):
    expression = _linear_operand(value)
    if expression is None:
        raise TypeError(
            f"cannot use {type(value).__name__} as a linear expression"
        )
    return expression


def _linear_operand(value):
    if isinstance(value, LinExpr):
        return value
    if isinstance(value, Var):
        return LinExpr([(value, 1.0)], 0.0)
    if isinstance(value, (int, float)):
        return LinExpr((), float(value))
    return None


def _quadratic_operand(value):
    if isinstance(value, QuadExpr):
        return value
    linear = _linear_operand(value)
    if linear is None:
        return None
    return QuadExpr((), linear._terms, linear._constant)


class BoundModel:
    """Model surface bound to a chosen backend.

    Construct with any core backend (defaults to the in-memory
    reference backend).  Methods mirror the core one-to-one; the only
    translation is unwrapping variable tokens and operator-built
    expressions into the core's explicit builders.
    """

    def __init__(self, backend=None):
        self.core = _CoreModel(backend if backend is not None else ReferenceBackend())

    @property
    def backend(self):
        return self.core.backend

    # -- variables -----------------------------------------------------------

    def add_variable(
        self,
        lb=0.0,
        ub=math.inf,
        domain=VariableDomain.CONTINUOUS,
        name="",
    ):
        return Var(self.core.add_variable(lb=lb, ub=ub, domain=domain, name=name))

    def delete_variable(self, variable):
        self.core.delete_variable(_handle(variable))

    def is_variable_live(self, variable):
        return self.core.is_variable_live(_handle(variable))

    # -- constraints -----------------------------------------------------------

    def add_linear_constraint(self, expression, sense, rhs, name=""):
        if isinstance(expression, QuadExpr):
            raise TypeError(
                "quadratic expression in a linear constraint; use "
                "add_quadratic_constraint"
            )
        return self.core.add_linear_constraint(
            _as_linear(expression)._to_core(), sense, rhs, name
        )

    def add_quadratic_constraint(self, expression, sense, rhs, name=""):
        operand = _quadratic_operand(expression)
        if operand is None:
            raise TypeError(
                f"cannot use {type(expression).__name__} as a quadratic expression"
            )
        return self.core.add_quadratic_constraint(operand._to_core(), sense, rhs, name)

    def add_sos_constraint(self, variables, weights, sos_type):
        return self.core.add_sos_constraint(
            [_handle(variable) for variable in variables], weights, sos_type
        )

    def delete_constraint(self, constraint):
        self.core.delete_constraint(constraint)

    def is_constraint_live(self, constraint):
        return self.core.is_constraint_live(constraint)

    # -- whole-model operations -------------------------------------------------

    def set_objective(self, expression, sense=Minimize):
        operand = _quadratic_operand(expression)
        if operand is None:
            raise TypeError(
                f"cannot use {type(expression).__name__} as an objective"
            )
        if operand._q_terms:
            self.core.set_objective(operand._to_core(), sense)
        else:
            self.core.set_objective(
                LinExpr(operand._terms, operand._constant)._to_core(), sense
            )

    def counts(self):
        return self.core.counts()

    def set_time_limit(self, seconds):
        self.core.set_time_limit(seconds)

    def optimize(self):
        self.core.optimize()


def attach_method(model_instance, name, procedure):
    """Bind ``procedure`` as a method named ``name`` on one model instance.

    The instance-level monkeypatch idiom for pluggable reformulations:
    the procedure's first parameter receives the model.  Raises
    AttributeError if the name is already bound (method or attribute).
    """
    if hasattr(model_instance, name):
        raise AttributeError(f"{name!r} is already bound on this model")
    setattr(model_instance, name, types.MethodType(procedure, model_instance))


def add_second_order_cone_constraint(model, cone_variables, name=""):
    """Cone membership r >= ||(x1..xn)|| as the quadratic row r² − Σxᵢ² ≥ 0.

    Delegates to the core reformulation; attach it to a model with
    ``attach_method(model, "add_second_order_cone_constraint", ...)``.
    The r >= 0 side condition is not added (matching the core bridge).
    """
    return _core_bridge_soc(
        model.core, [_handle(variable) for variable in cone_variables], name
    )
