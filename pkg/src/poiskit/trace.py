"""Numeric probe of the leaves: RK4 flow along Hamiltonian vector fields.

The tracer cycles through the Hamiltonian fields of the supplied functions
(coordinate functions by default), emitting the visited points, a local
leaf-dimension estimate (numeric rank of the field values along the trace),
and the drift of any supplied conserved quantities.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .polyalg import DifferentialForm, Polynomial
from .poisson import PoissonStructure

__all__ = ["TraceResult", "trace_leaf", "trace_to_csv"]

NORM_GUARD = 1e8


class TraceBlowupError(RuntimeError):
    """Trajectory norm exceeded the guard."""


@dataclass
class TraceResult:
    points: np.ndarray                  # (steps + 1, n)
    dimension_estimate: int
    conserved_drift: dict[str, float]   # relative drift per supplied invariant
    steps: int
    dt: float
    hamiltonian_labels: list[str]


def _field_evaluator(structure: PoissonStructure, f: Polynomial):
    coeffs = structure.sharp(DifferentialForm.d_of(f)).coefficients()

    def ev(x: np.ndarray) -> np.ndarray:
        pt = [float(v) for v in x]
        return np.array([float(p.eval(pt)) for p in coeffs])

    return ev


def trace_leaf(structure: PoissonStructure, x0: Sequence[float],
               hamiltonians: Sequence[Polynomial] | None = None,
               steps: int = 1000, dt: float = 1e-3,
               invariants: Sequence[Polynomial] | None = None,
               rank_tol: float = 1e-8, rank_every: int = 97) -> TraceResult:
    """Classical RK4 along the Hamiltonian fields of the given functions."""
    variables = structure.variables
    n = len(variables)
    if len(x0) != n:
        raise ValueError("starting point dimension mismatch")
    if hamiltonians is None:
        hamiltonians = [Polynomial.variable(variables, v) for v in variables]
    fields = [_field_evaluator(structure, h) for h in hamiltonians]
    labels = [str(h) for h in hamiltonians]
    invariants = list(invariants or [])
    inv_start = None

    x = np.array([float(v) for v in x0])
    points = np.empty((steps + 1, n))
    points[0] = x
    if invariants:
        inv_start = [float(f.eval(list(x))) for f in invariants]
    dim = 0

    def rank_at(y: np.ndarray) -> int:
        vals = np.array([ev(y) for ev in fields])
        if not np.any(vals):
            return 0
        return int(np.linalg.matrix_rank(vals, tol=rank_tol * max(1.0, float(np.max(np.abs(vals))))))

    dim = rank_at(x)
    for s in range(steps):
        ev = fields[s % len(fields)]
        k1 = ev(x)
        k2 = ev(x + 0.5 * dt * k1)
        k3 = ev(x + 0.5 * dt * k2)
        k4 = ev(x + dt * k3)
        x = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if float(np.linalg.norm(x)) > NORM_GUARD:
            raise TraceBlowupError(f"trajectory norm exceeded {NORM_GUARD:.0e} at step {s}")
        points[s + 1] = x
        if s % rank_every == 0:
            dim = max(dim, rank_at(x))
    dim = max(dim, rank_at(x))

    drift: dict[str, float] = {}
    for f, start in zip(invariants, inv_start or []):
        values = [float(f.eval(list(points[i]))) for i in range(0, steps + 1, max(1, steps // 100))]
        denom = max(abs(start), 1e-30)
        drift[str(f)] = max(abs(v - start) for v in values) / denom
    return TraceResult(points=points, dimension_estimate=dim, conserved_drift=drift,
                       steps=steps, dt=dt, hamiltonian_labels=labels)


def trace_to_csv(result: TraceResult, variables: Sequence[str]) -> str:
    lines = ["step," + ",".join(variables)]
    for i, row in enumerate(result.points):
        lines.append(str(i) + "," + ",".join(f"{v:.17g}" for v in row))
    return "\n".join(lines) + "\n"
