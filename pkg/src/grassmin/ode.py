"""Fixed-step RK4 integration of the slope-evolution equations.

The right-hand sides reuse the quadratic curvature term shared with the
residual operators, with the sign and Gram factor chosen per model. Runs
stop early with a blow-up status when the slope norm explodes and, for the
Lorentzian model, with a chart-breakdown status when det(I - Z Z^T) dips
below threshold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import matlin
from .geodesic import curvature_quadratic

__all__ = [
    "IntegrationRun",
    "COMPLETED",
    "BLOW_UP",
    "CHART_BREAKDOWN",
    "EXACT_ORDER",
    "integrate",
    "convergence_order",
]

COMPLETED = "completed"
BLOW_UP = "blow-up"
CHART_BREAKDOWN = "chart-breakdown"

BLOW_UP_NORM = 1e8
LORENTZ_DET_MIN = 1e-10

# Sentinel returned by convergence_order when the integrator reproduces the
# reference to rounding at every step size (nothing left to fit).
EXACT_ORDER = math.inf

_ORDER_STEPS = (1e-2, 5e-3, 2.5e-3)


@dataclass(frozen=True)
class IntegrationRun:
    """Trajectory samples (t, Z, Zd) plus the stop status of the run."""

    samples: tuple
    status: str
    stop_time: float | None
    rhs_kind: str
    step: float

    @property
    def final(self) -> tuple[float, np.ndarray, np.ndarray]:
        return self.samples[-1]


def _rhs(kind: str):
    if kind == "euclidean":
        return lambda z, zd: curvature_quadratic(z, zd, 1)
    if kind == "lorentzian":
        return lambda z, zd: -curvature_quadratic(z, zd, -1)
    raise ValueError(f"unknown rhs_kind {kind!r}")


def _violation(z: np.ndarray, zd: np.ndarray, kind: str) -> str | None:
    if not (np.isfinite(z).all() and np.isfinite(zd).all()):
        return BLOW_UP
    if float(np.linalg.norm(z)) > BLOW_UP_NORM:
        return BLOW_UP
    if kind == "lorentzian":
        if matlin.det(np.eye(z.shape[0]) - z @ z.T) < LORENTZ_DET_MIN:
            return CHART_BREAKDOWN
    return None


def integrate(z0, zd0, t_end: float, step: float, rhs_kind: str = "euclidean") -> IntegrationRun:
    """Classical RK4 on the first-order system (Z, Zd) from t = 0 to t_end.

    The step is fixed except for one final truncated step landing exactly on
    t_end. Blow-up and (Lorentzian) chart-breakdown checks run after every
    step; the violating sample is kept as the final one.
    """
    z = matlin.as_matrix(z0)
    zd = matlin.as_matrix(zd0)
    if zd.shape != z.shape:
        raise ValueError(f"z0 and zd0 shapes differ: {z.shape} vs {zd.shape}")
    if step <= 0.0:
        raise ValueError(f"step must be positive, got {step}")
    if t_end <= 0.0:
        raise ValueError(f"t_end must be positive, got {t_end}")
    rhs = _rhs(rhs_kind)

    samples = [(0.0, z.copy(), zd.copy())]
    status = _violation(z, zd, rhs_kind)
    if status is not None:
        return IntegrationRun(tuple(samples), status, 0.0, rhs_kind, step)

    k = 0
    t = 0.0
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        while t < t_end:
            h = min(step, t_end - t)
            try:
                a1 = rhs(z, zd)
                z2 = z + 0.5 * h * zd
                v2 = zd + 0.5 * h * a1
                a2 = rhs(z2, v2)
                z3 = z + 0.5 * h * v2
                v3 = zd + 0.5 * h * a2
                a3 = rhs(z3, v3)
                z4 = z + h * v3
                v4 = zd + h * a3
                a4 = rhs(z4, v4)
            except matlin.SingularMatrixError:
                status = CHART_BREAKDOWN if rhs_kind == "lorentzian" else BLOW_UP
                return IntegrationRun(tuple(samples), status, t, rhs_kind, step)
            z = z + (h / 6.0) * (zd + 2.0 * v2 + 2.0 * v3 + v4)
            zd = zd + (h / 6.0) * (a1 + 2.0 * a2 + 2.0 * a3 + a4)
            k += 1
            t = min(k * step, t_end)
            samples.append((t, z.copy(), zd.copy()))
            status = _violation(z, zd, rhs_kind)
            if status is not None:
                return IntegrationRun(tuple(samples), status, t, rhs_kind, step)
    return IntegrationRun(tuple(samples), COMPLETED, None, rhs_kind, step)


def convergence_order(z0, zd0, t_end: float, rhs_kind: str, reference) -> float:
    """Estimated order from errors against `reference` at steps 1e-2, 5e-3,
    2.5e-3. `reference` maps t to the exact slope matrix; failures inside it
    propagate. Returns EXACT_ORDER when every error sits at rounding level.
    """
    errors = []
    for h in _ORDER_STEPS:
        run = integrate(z0, zd0, t_end, h, rhs_kind)
        if run.status != COMPLETED:
            raise RuntimeError(
                f"integration at step {h} stopped with status {run.status!r} "
                f"at t={run.stop_time!r}; cannot fit an order"
            )
        t_fin, z_fin, _ = run.final
        errors.append(float(np.linalg.norm(z_fin - matlin.as_matrix(reference(t_fin)))))
    if max(errors) < 1e-13:
        return EXACT_ORDER
    logs = np.log(np.maximum(errors, 1e-300))
    slope = np.polyfit(np.log(_ORDER_STEPS), logs, 1)[0]
    return float(slope)
