"""The evolving-plane graph: embedding, induced metric, minimality residuals.

A slope curve Z(t) sweeps the linear maps f(x, t) = Z(t)^T x, whose graph is
an n-dimensional submanifold of R^{n+m}. The graph is minimal exactly when
the contraction of the inverse induced metric with each coordinate Hessian
vanishes; equivalently, when per-row Schur values of a bordered block matrix
vanish, which reproduces the affine geodesic equation. Both analytic routes
are implemented here, plus a finite-difference oracle that shares nothing
with them.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import matlin
from .geodesic import CurveJet

__all__ = [
    "AnsatzPoint",
    "MetricReport",
    "embed",
    "induced_metric",
    "hessian_blocks",
    "mss_residual",
    "mss_residual_det_form",
    "metric_report",
    "fd_oracle_residual",
]


@dataclass(frozen=True)
class AnsatzPoint:
    """A base point (x^1, ..., x^{n-1}, t) of the swept graph."""

    x: np.ndarray
    t: float

    def __post_init__(self):
        object.__setattr__(self, "x", matlin.as_vector(self.x))
        object.__setattr__(self, "t", float(self.t))


@dataclass(frozen=True)
class MetricReport:
    """Induced metric, its determinant, the per-component minimality residual
    and the coordinate Hessians at one point."""

    g: np.ndarray
    det_g: float
    residual: np.ndarray
    hessians: tuple[np.ndarray, ...]


def _check_point(jet: CurveJet, p: AnsatzPoint) -> None:
    if p.x.shape[0] != jet.shape[0]:
        raise ValueError(
            f"point has {p.x.shape[0]} spatial coordinates, jet expects {jet.shape[0]}"
        )


def embed(jet: CurveJet, p: AnsatzPoint) -> np.ndarray:
    """Ambient coordinates (x, t, Z(t)^T x) of the graph point.

    The jet must be the curve data at p.t; only the slope matrix is used.
    """
    _check_point(jet, p)
    return np.concatenate([p.x, [p.t], jet.z.T @ p.x])


def induced_metric(jet: CurveJet, p: AnsatzPoint) -> np.ndarray:
    """The n x n induced metric of the swept graph at (x, t).

    Top-left block I + Z Z^T, borders Z (Zd^T x), corner 1 + |Zd^T x|^2.
    """
    _check_point(jet, p)
    nm1 = jet.shape[0]
    w = jet.zd.T @ p.x
    g = np.empty((nm1 + 1, nm1 + 1))
    g[:nm1, :nm1] = np.eye(nm1) + jet.z @ jet.z.T
    border = jet.z @ w
    g[:nm1, nm1] = border
    g[nm1, :nm1] = border
    g[nm1, nm1] = 1.0 + float(w @ w)
    return g


def hessian_blocks(jet: CurveJet, p: AnsatzPoint) -> tuple[np.ndarray, ...]:
    """Coordinate Hessians: zero spatial block, borders zd column, corner
    <x, zdd column>, one n x n matrix per graph component."""
    _check_point(jet, p)
    nm1, m = jet.shape
    out = []
    for alpha in range(m):
        h = np.zeros((nm1 + 1, nm1 + 1))
        h[:nm1, nm1] = jet.zd[:, alpha]
        h[nm1, :nm1] = jet.zd[:, alpha]
        h[nm1, nm1] = float(p.x @ jet.zdd[:, alpha])
        out.append(h)
    return tuple(out)


def mss_residual(jet: CurveJet, p: AnsatzPoint) -> np.ndarray:
    """Minimality defect per component: contraction of the inverse induced
    metric with each coordinate Hessian. Vanishes at every point exactly when
    the swept graph is minimal."""
    g = induced_metric(jet, p)
    _, ginv = matlin.invert_with_det(g)
    return np.array([float(np.sum(ginv * h)) for h in hessian_blocks(jet, p)])


def mss_residual_det_form(jet: CurveJet, metric_sign: int = 1) -> np.ndarray:
    """Per-row Schur values of the bordered determinant condition.

    Entry (k, alpha) is D - C A^{-1} B for the block matrix with
    A = I + sign * Z Z^T, border column 2 * zd[:, alpha], border row
    sign * row k of (Zd Z^T), and scalar D = zdd[k, alpha]. The result is
    independent of x and vanishes exactly when the slope curve is geodesic;
    metric_sign=-1 gives the Minkowski-base variant.
    """
    z, zd, zdd = jet.z, jet.zd, jet.zdd
    gram = np.eye(z.shape[0]) + metric_sign * (z @ z.T)
    _, ainv = matlin.invert_with_det(gram)
    rows = metric_sign * (zd @ z.T)  # border row k of the block matrix
    cols = 2.0 * zd  # border column per component
    return zdd - rows @ ainv @ cols


def metric_report(jet: CurveJet, p: AnsatzPoint) -> MetricReport:
    """Bundle metric, determinant, residual and Hessians at one point."""
    g = induced_metric(jet, p)
    det_g, ginv = matlin.invert_with_det(g)
    hs = hessian_blocks(jet, p)
    res = np.array([float(np.sum(ginv * h)) for h in hs])
    return MetricReport(g=g, det_g=det_g, residual=res, hessians=hs)


def fd_oracle_residual(curve, p: AnsatzPoint, h: float = 1e-4) -> np.ndarray:
    """Finite-difference minimality defect, independent of the analytic path.

    `curve` maps t to the slope matrix Z(t). Graph heights are evaluated on a
    centered stencil, gradients and Hessians come from central differences,
    the metric is assembled from the difference gradients, and the
    contraction uses numpy's own inverse. Agreement with mss_residual is
    O(h^2).
    """
    if h <= 0.0:
        raise ValueError(f"step must be positive, got {h}")
    x0 = p.x
    nm1 = x0.shape[0]
    n = nm1 + 1
    cache: dict[float, np.ndarray] = {}

    def zval(t: float) -> np.ndarray:
        if t not in cache:
            cache[t] = matlin.as_matrix(curve(t))
        return cache[t]

    def f(coords: np.ndarray) -> np.ndarray:
        return zval(float(coords[nm1])).T @ coords[:nm1]

    base = np.concatenate([x0, [p.t]])
    m = f(base).shape[0]

    grad = np.zeros((n, m))
    for i in range(n):
        up = base.copy()
        dn = base.copy()
        up[i] += h
        dn[i] -= h
        grad[i] = (f(up) - f(dn)) / (2.0 * h)

    hess = np.zeros((n, n, m))
    f0 = f(base)
    for i in range(n):
        up = base.copy()
        dn = base.copy()
        up[i] += h
        dn[i] -= h
        hess[i, i] = (f(up) - 2.0 * f0 + f(dn)) / (h * h)
        for j in range(i + 1, n):
            pp = base.copy()
            pm = base.copy()
            mp = base.copy()
            mm = base.copy()
            pp[[i, j]] += h
            mm[[i, j]] -= h
            pm[i] += h
            pm[j] -= h
            mp[i] -= h
            mp[j] += h
            val = (f(pp) - f(pm) - f(mp) + f(mm)) / (4.0 * h * h)
            hess[i, j] = val
            hess[j, i] = val

    g = np.eye(n) + grad @ grad.T
    ginv = np.linalg.inv(g)
    return np.einsum("ij,ijb->b", ginv, hess)
