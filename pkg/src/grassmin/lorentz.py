"""Graphs over a Minkowski base: geodesic residual, metric, tanh family.

Over the base R^{n-1,1} the Gram factor flips to I - Z Z^T and the induced
metric picks up sign flips in its border and corner. The hyperbolic analogue
of the zero-slope family, built entrywise from tanh and sech^2, is a global
solution whose induced metric stays Lorentzian of index one everywhere.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import matlin
from .geodesic import CurveJet, SpectralBlock, curvature_quadratic
from .graph import AnsatzPoint

__all__ = [
    "SpacelikeBreakdownError",
    "SignatureCount",
    "lorentz_residual",
    "lorentz_metric",
    "tanh_family_eval",
]

# Eigenvalues within this (scaled) band of zero count as zero in signatures.
SIGNATURE_ZERO_RTOL = 1e-10


class SpacelikeBreakdownError(RuntimeError):
    """I - Z Z^T is singular: the plane is no longer spacelike."""


@dataclass(frozen=True)
class SignatureCount:
    plus: int
    minus: int
    zero: int

    def __post_init__(self):
        if min(self.plus, self.minus, self.zero) < 0:
            raise ValueError("signature counts must be non-negative")


def lorentz_residual(jet: CurveJet) -> np.ndarray:
    """Geodesic defect Zdd + 2 Zd Z^T (I - Z Z^T)^{-1} Zd of the Minkowski-base
    model; raises SpacelikeBreakdownError when I - Z Z^T is singular."""
    try:
        quad = curvature_quadratic(jet.z, jet.zd, -1)
    except matlin.SingularMatrixError as exc:
        raise SpacelikeBreakdownError(
            f"I - Z Z^T is singular at t={jet.t!r}"
        ) from exc
    return jet.zdd + quad


def lorentz_metric(
    jet: CurveJet, p: AnsatzPoint
) -> tuple[np.ndarray, SignatureCount, float]:
    """Induced metric over the Minkowski base, its signature and determinant.

    Top-left block I - Z Z^T, borders -Z (Zd^T x), corner -1 - |Zd^T x|^2.
    Signature counting thresholds eigenvalues at 1e-10 * ||g||_F.
    """
    if p.x.shape[0] != jet.shape[0]:
        raise ValueError(
            f"point has {p.x.shape[0]} spatial coordinates, jet expects {jet.shape[0]}"
        )
    nm1 = jet.shape[0]
    w = jet.zd.T @ p.x
    g = np.empty((nm1 + 1, nm1 + 1))
    g[:nm1, :nm1] = np.eye(nm1) - jet.z @ jet.z.T
    border = -(jet.z @ w)
    g[:nm1, nm1] = border
    g[nm1, :nm1] = border
    g[nm1, nm1] = -1.0 - float(w @ w)
    _, eigvals = matlin.sym_eigen(g)
    thr = SIGNATURE_ZERO_RTOL * float(np.linalg.norm(g))
    zero = int(np.sum(np.abs(eigvals) <= thr))
    plus = int(np.sum(eigvals > thr))
    minus = int(np.sum(eigvals < -thr))
    return g, SignatureCount(plus=plus, minus=minus, zero=zero), matlin.det(g)


def tanh_family_eval(spec: SpectralBlock, t: float) -> CurveJet:
    """The hyperbolic diagonal family: z_ii = tanh(lambda_i t), entire in t.

    Derivatives are the entrywise analytic ones, so the Minkowski-base
    residual of the returned jet vanishes to rounding.
    """
    nm1, m = spec.n - 1, spec.m
    z = np.zeros((nm1, m))
    zd = np.zeros((nm1, m))
    zdd = np.zeros((nm1, m))
    for i, lam in enumerate(spec.lambdas):
        th = np.tanh(lam * t)
        sech2 = 1.0 / np.cosh(lam * t) ** 2
        z[i, i] = th
        zd[i, i] = lam * sech2
        zdd[i, i] = -2.0 * lam * lam * th * sech2
    return CurveJet(t, z, zd, zdd)
