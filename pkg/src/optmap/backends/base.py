"""The backend contract: dense-indexed model operations.

A backend sees only contiguous 0-based column/row numbers per entity
class.  Deleting entries renumbers the survivors downward by their rank
among the deleted, which is exactly the behavior the index maps model.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from enum import Enum, IntEnum
from typing import Sequence

from optmap.expressions import ConstraintType


class VariableDomain(Enum):
    CONTINUOUS = "continuous"
    BINARY = "binary"
    INTEGER = "integer"


class ConstraintSense(Enum):
    LEQ = "<="
    GEQ = ">="
    EQ = "="


class ObjectiveSense(Enum):
    MINIMIZE = "minimize"
    MAXIMIZE = "maximize"


class SosType(IntEnum):
    SOS1 = 1
    SOS2 = 2


class Backend(ABC):
    """Abstract dense-indexed model store.

    Implementations must keep dense indices contiguous per class and apply
    the rank-subtraction rule on deletion.  ``delete_columns`` and
    ``delete_rows`` receive strictly increasing index sequences; the model
    layer sorts before calling.
    """

    @abstractmethod
    def append_column(
        self, lb: float, ub: float, domain: VariableDomain, name: str
    ) -> None: ...

    @abstractmethod
    def delete_columns(self, columns: Sequence[int]) -> None: ...

    @abstractmethod
    def append_linear_row(
        self,
        columns: Sequence[int],
        coefficients: Sequence[float],
        sense: ConstraintSense,
        rhs: float,
        name: str,
    ) -> None: ...

    @abstractmethod
    def append_quadratic_row(
        self,
        q_columns1: Sequence[int],
        q_columns2: Sequence[int],
        q_coefficients: Sequence[float],
        columns: Sequence[int],
        coefficients: Sequence[float],
        sense: ConstraintSense,
        rhs: float,
        name: str,
    ) -> None: ...

    @abstractmethod
    def append_sos_row(
        self, sos_type: SosType, columns: Sequence[int], weights: Sequence[float]
    ) -> None: ...

    @abstractmethod
    def delete_rows(self, kind: ConstraintType, rows: Sequence[int]) -> None: ...

    @abstractmethod
    def set_objective(
        self,
        q_columns1: Sequence[int],
        q_columns2: Sequence[int],
        q_coefficients: Sequence[float],
        columns: Sequence[int],
        coefficients: Sequence[float],
        constant: float,
        sense: ObjectiveSense,
    ) -> None: ...

    @abstractmethod
    def set_time_limit(self, seconds: float) -> None: ...

    @abstractmethod
    def optimize(self) -> None: ...

    @abstractmethod
    def supports(self, kind: ConstraintType) -> bool: ...

    @abstractmethod
    def num_columns(self) -> int: ...

    @abstractmethod
    def num_rows(self, kind: ConstraintType) -> int: ...
