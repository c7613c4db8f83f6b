"""Entity handles and the scalar expression payloads submitted to backends.

Handles are plain values: they carry a bit location in one of the model's
index maps and stay valid across unrelated deletions, because resolution
to a dense index happens at submission time, not at build time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum
from typing import Iterable, Mapping


@dataclass(frozen=True, slots=True)
class VariableIndex:
    """Persistent handle to a variable: a bit location in the variable map."""

    bit_location: int


class ConstraintType(IntEnum):
    """Constraint kinds with independent dense numbering.

    GENERAL is a reserved tag: it exists so the enum covers all four solver
    counter classes, but no operation accepts it.
    """

    LINEAR = 0
    QUADRATIC = 1
    SOS = 2
    GENERAL = 3


@dataclass(frozen=True, slots=True)
class ConstraintIndex:
    """Persistent handle to a constraint: its type picks the index map, the
    bit location picks the entity inside it."""

    type: ConstraintType
    bit_location: int


def _check_finite(value, what):
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"{what} must be finite, got {value!r}")
    return value


class ScalarAffineFunction:
    """Sum of coefficient*variable terms plus a constant.

    Terms are appended as-is; ``canonicalize`` merges duplicates, drops
    zeros and sorts by handle location.
    """

    __slots__ = ("terms", "constant")

    def __init__(self, terms=None, constant=0.0):
        self.terms: list[tuple[VariableIndex, float]] = list(terms or ())
        self.constant = float(constant)

    def add_term(self, variable: VariableIndex, coefficient: float) -> None:
        self.terms.append((variable, _check_finite(coefficient, "coefficient")))

    def canonicalize(self) -> "ScalarAffineFunction":
        """Return an equivalent sorted, merged, zero-free function."""
        merged: dict[VariableIndex, float] = {}
        for variable, coefficient in self.terms:
            merged[variable] = merged.get(variable, 0.0) + coefficient
        terms = sorted(
            ((v, c) for v, c in merged.items() if c != 0.0),
            key=lambda term: term[0].bit_location,
        )
        return ScalarAffineFunction(terms, self.constant)

    def evaluate(self, assignment: Mapping[VariableIndex, float]) -> float:
        """Value of the function at the given variable assignment."""
        total = self.constant
        for variable, coefficient in self.terms:
            try:
                value = assignment[variable]
            except KeyError:
                raise KeyError(f"no value assigned for {variable!r}") from None
            total += coefficient * value
        return total

    def variables(self) -> Iterable[VariableIndex]:
        return (variable for variable, _ in self.terms)

    def __eq__(self, other):
        if not isinstance(other, ScalarAffineFunction):
            return NotImplemented
        return self.terms == other.terms and self.constant == other.constant

    def __repr__(self):
        return f"ScalarAffineFunction(terms={self.terms!r}, constant={self.constant!r})"


class ScalarQuadraticFunction:
    """Quadratic terms plus an affine part.

    A pair (v1, v2) carries the full polynomial coefficient of x1*x2 (the
    sum over both orderings); canonical form stores v1 <= v2 by location.
    Writers that need the half-convention convert locally.
    """

    __slots__ = ("quadratic_terms", "affine")

    def __init__(self, quadratic_terms=None, affine=None):
        self.quadratic_terms: list[tuple[VariableIndex, VariableIndex, float]] = list(
            quadratic_terms or ()
        )
        self.affine = affine if affine is not None else ScalarAffineFunction()

    def add_quadratic_term(
        self, v1: VariableIndex, v2: VariableIndex, coefficient: float
    ) -> None:
        self.quadratic_terms.append(
            (v1, v2, _check_finite(coefficient, "coefficient"))
        )

    def add_affine_term(self, variable: VariableIndex, coefficient: float) -> None:
        self.affine.add_term(variable, coefficient)

    @property
    def constant(self) -> float:
        return self.affine.constant

    @constant.setter
    def constant(self, value: float) -> None:
        self.affine.constant = float(value)

    def canonicalize(self) -> "ScalarQuadraticFunction":
        """Return an equivalent function with ordered pairs, merged
        duplicates, no zero coefficients and a canonical affine part."""
        merged: dict[tuple[VariableIndex, VariableIndex], float] = {}
        for v1, v2, coefficient in self.quadratic_terms:
            if v2.bit_location < v1.bit_location:
                v1, v2 = v2, v1
            merged[(v1, v2)] = merged.get((v1, v2), 0.0) + coefficient
        terms = sorted(
            ((v1, v2, c) for (v1, v2), c in merged.items() if c != 0.0),
            key=lambda term: (term[0].bit_location, term[1].bit_location),
        )
        return ScalarQuadraticFunction(terms, self.affine.canonicalize())

    def evaluate(self, assignment: Mapping[VariableIndex, float]) -> float:
        """Value of the function at the given variable assignment."""
        total = self.affine.evaluate(assignment)
        for v1, v2, coefficient in self.quadratic_terms:
            try:
                x1 = assignment[v1]
                x2 = assignment[v2]
            except KeyError as exc:
                raise KeyError(f"no value assigned for {exc.args[0]!r}") from None
            total += coefficient * x1 * x2
        return total

    def variables(self) -> Iterable[VariableIndex]:
        for v1, v2, _ in self.quadratic_terms:
            yield v1
            yield v2
        yield from self.affine.variables()

    def __eq__(self, other):
        if not isinstance(other, ScalarQuadraticFunction):
            return NotImplemented
        return (
            self.quadratic_terms == other.quadratic_terms
            and self.affine == other.affine
        )

    def __repr__(self):
        return (
            f"ScalarQuadraticFunction(quadratic_terms={self.quadratic_terms!r}, "
            f"affine={self.affine!r})"
        )
