"""Model-generation benchmark families and the harness that times them.

Two generator families of tunable size n:

* ``fac`` — min-max facility location on the unit square: places n
  facilities to serve an (n+1) x (n+1) customer grid, with binary
  assignments, big-M distance linking rows, and one second-order cone per
  (customer, facility) pair submitted through the cone bridge.
* ``lqcp`` — discretized linear-quadratic control of a 1-D heat profile:
  a (n+1) x (n+1) state grid with Crank-Nicolson interior rows, two
  boundary rows per time step, bounded controls, and a quadratic tracking
  objective.

Each family has a closed-form count function; generators and formulas
are checked against each other in the test suite.  ``run_benchmark``
times generation only (model operations forward to the backend inside
the generator), takes the minimum over repetitions, and triggers a
zero-time-limit optimize untimed.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from math import inf
from typing import Callable

from optmap.backends.base import (
    Backend,
    ConstraintSense,
    ObjectiveSense,
    VariableDomain,
)
from optmap.backends.lp_writer import LpWriterBackend
from optmap.bridge import SECOND_ORDER_CONE, register_soc_bridge
from optmap.expressions import ScalarAffineFunction, ScalarQuadraticFunction
from optmap.model import Model, ModelCounts

FAMILY_NAMES = ("fac", "lqcp")


@dataclass(frozen=True, slots=True)
class FacConfig:
    """Size and big-M for the facility-location family."""

    n: int
    big_m: float = 2.0 * math.sqrt(2.0)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"fac needs n >= 1, got {self.n}")


@dataclass(frozen=True, slots=True)
class LqcpConfig:
    """Size and control-effort weight for the control family."""

    n: int
    alpha: float = 0.001

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"lqcp needs n >= 1, got {self.n}")


@dataclass(frozen=True, slots=True)
class BenchReport:
    family: str
    n: int
    backend: str
    variables: int
    linear_rows: int
    quadratic_rows: int
    sos_rows: int
    build_seconds: float
    reps: int


def fac_counts(n: int) -> ModelCounts:
    """Entity counts gen_fac produces for size n, in closed form."""
    grid = (n + 1) * (n + 1)
    return ModelCounts(
        variables=4 * n * grid + 2 * n + 1,
        linear_rows=grid * (3 * n + 1),
        quadratic_rows=n * grid,
        sos_rows=0,
    )


def lqcp_counts(n: int) -> ModelCounts:
    """Entity counts gen_lqcp produces for size n, in closed form."""
    return ModelCounts(
        variables=(n + 1) * (n + 1) + n,
        linear_rows=n * n + n,
        quadratic_rows=0,
        sos_rows=0,
    )


def gen_fac(model: Model, config: FacConfig) -> None:
    """Build the facility-location instance into ``model``.

    Minimizes the worst service distance d.  For each customer (i, j) on
    the unit-square grid and each facility f: binary assignment z, radius
    r >= 0, displacement pair (s1, s2) tied to the facility position by
    equality rows, a big-M row forcing r <= d when assigned, and a cone
    r >= ||(s1, s2)|| submitted through the bridge.  Each customer is
    assigned exactly once.
    """
    n = config.n
    big_m = config.big_m
    register_soc_bridge(model)

    d = model.add_variable(lb=-inf, ub=inf)
    positions = [
        (model.add_variable(lb=-inf, ub=inf), model.add_variable(lb=-inf, ub=inf))
        for _ in range(n)
    ]

    for i in range(n + 1):
        for j in range(n + 1):
            assignment = ScalarAffineFunction()
            for f in range(n):
                z = model.add_variable(domain=VariableDomain.BINARY)
                r = model.add_variable(lb=0.0, ub=inf)
                s = (
                    model.add_variable(lb=-inf, ub=inf),
                    model.add_variable(lb=-inf, ub=inf),
                )
                for axis, coordinate in enumerate((i / n, j / n)):
                    tie = ScalarAffineFunction()
                    tie.add_term(s[axis], 1.0)
                    tie.add_term(positions[f][axis], -1.0)
                    model.add_linear_constraint(tie, ConstraintSense.EQ, -coordinate)
                link = ScalarAffineFunction()
                link.add_term(r, 1.0)
                link.add_term(d, -1.0)
                link.add_term(z, big_m)
                model.add_linear_constraint(link, ConstraintSense.LEQ, big_m)
                model.submit(SECOND_ORDER_CONE, [r, s[0], s[1]])
                assignment.add_term(z, 1.0)
            model.add_linear_constraint(assignment, ConstraintSense.EQ, 1.0)

    objective = ScalarAffineFunction()
    objective.add_term(d, 1.0)
    model.set_objective(objective, ObjectiveSense.MINIMIZE)


def gen_lqcp(model: Model, config: LqcpConfig) -> None:
    """Build the control instance into ``model``.

    State y[t][x] on an (n+1) x (n+1) grid with y[0][*] pinned to zero,
    controls u[t] in [-1, 1] entering through the right boundary.
    Interior rows are the Crank-Nicolson stencil; the objective tracks
    the final-time profile 0.5 * (1 - x^2) plus an alpha-weighted control
    effort term, both in expanded quadratic form (targets squared fold
    into the objective constant).
    """
    n = config.n
    m = n
    dx = 1.0 / n
    dt = 1.0 / m

    y = [
        [
            model.add_variable(lb=0.0, ub=0.0)
            if t == 0
            else model.add_variable(lb=-inf, ub=inf)
            for _ in range(n + 1)
        ]
        for t in range(m + 1)
    ]
    u = [model.add_variable(lb=-1.0, ub=1.0) for _ in range(m)]

    half_inv_dx2 = 1.0 / (2.0 * dx * dx)
    for t in range(m):
        for x in range(1, n):
            row = ScalarAffineFunction()
            row.add_term(y[t + 1][x], 1.0 / dt)
            row.add_term(y[t][x], -1.0 / dt)
            row.add_term(y[t][x - 1], -half_inv_dx2)
            row.add_term(y[t][x], 2.0 * half_inv_dx2)
            row.add_term(y[t][x + 1], -half_inv_dx2)
            row.add_term(y[t + 1][x - 1], -half_inv_dx2)
            row.add_term(y[t + 1][x], 2.0 * half_inv_dx2)
            row.add_term(y[t + 1][x + 1], -half_inv_dx2)
            model.add_linear_constraint(row, ConstraintSense.EQ, 0.0)
    for t in range(1, m + 1):
        row = ScalarAffineFunction()
        row.add_term(y[t][1], 1.0)
        row.add_term(y[t][0], -1.0)
        model.add_linear_constraint(row, ConstraintSense.EQ, 0.0)
    for t in range(1, m + 1):
        row = ScalarAffineFunction()
        row.add_term(y[t][n], 1.0 + dx)
        row.add_term(y[t][n - 1], -1.0)
        row.add_term(u[t - 1], -dx)
        model.add_linear_constraint(row, ConstraintSense.EQ, 0.0)

    objective = ScalarQuadraticFunction()
    constant = 0.0
    quarter_dx = 0.25 * dx
    for j in range(n + 1):
        weight = 1.0 if j in (0, n) else 2.0
        target = 0.5 * (1.0 - (j * dx) ** 2)
        scale = quarter_dx * weight
        objective.add_quadratic_term(y[m][j], y[m][j], scale)
        if target != 0.0:
            objective.add_affine_term(y[m][j], -2.0 * scale * target)
        constant += scale * target * target
    quarter_alpha_dt = 0.25 * config.alpha * dt
    for t in range(1, m + 1):
        weight = 2.0 if t < m else 1.0
        objective.add_quadratic_term(u[t - 1], u[t - 1], quarter_alpha_dt * weight)
    objective.constant = constant
    model.set_objective(objective, ObjectiveSense.MINIMIZE)


_FAMILIES: dict[str, tuple[type, Callable, Callable[[int], ModelCounts]]] = {
    "fac": (FacConfig, gen_fac, fac_counts),
    "lqcp": (LqcpConfig, gen_lqcp, lqcp_counts),
}


def expected_counts(family: str, n: int) -> ModelCounts:
    """Closed-form counts for a family, without building anything."""
    _, _, counter = _require_family(family)
    return counter(n)


def run_benchmark(
    family: str,
    n: int,
    backend_factory: Callable[[], Backend],
    reps: int = 1,
    backend_label: str | None = None,
) -> BenchReport:
    """Generate the instance ``reps`` times on fresh models, report the best.

    Only generation is timed.  After each rep the solve path is exercised
    untimed with a zero time limit; an LP-writing backend flushes its file
    once, after the final rep.
    """
    if reps < 1:
        raise ValueError(f"reps must be >= 1, got {reps}")
    config_type, generator, _ = _require_family(family)
    config = config_type(n)

    best = inf
    backend = model = None
    for _ in range(reps):
        backend = backend_factory()
        model = Model(backend)
        start = time.perf_counter()
        generator(model, config)
        best = min(best, time.perf_counter() - start)
        model.set_time_limit(0.0)
        model.optimize()
    counts = model.counts()

    if isinstance(backend, LpWriterBackend):
        backend.write_lp()

    return BenchReport(
        family=family,
        n=n,
        backend=backend_label if backend_label else type(backend).__name__,
        variables=counts.variables,
        linear_rows=counts.linear_rows,
        quadratic_rows=counts.quadratic_rows,
        sos_rows=counts.sos_rows,
        build_seconds=best,
        reps=reps,
    )


def _require_family(family: str):
    try:
        return _FAMILIES[family]
    except KeyError:
        raise ValueError(
            f"unknown family {family!r}; expected one of {FAMILY_NAMES}"
        ) from None
