"""Grassmannian geodesics in the affine chart and the Stiefel model.

A slope curve Z(t), of shape (n-1) x m, is geodesic when its second
derivative balances the quadratic curvature term built from (I + Z Z^T)^{-1}.
This module provides the residual operators for both chart and frame
descriptions, chart transport Z = Q P^{-1}, the trigonometric closed-form
family driven by a spectral block and an initial slope B, and the fractional
linear / orthogonal symmetries that carry geodesics to geodesics.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import matlin

__all__ = [
    "ChartBreakdownError",
    "CurveJet",
    "SpectralBlock",
    "ClosedFormGeodesic",
    "StiefelFrame",
    "OrthPartition",
    "curvature_quadratic",
    "affine_residual",
    "stiefel_residual",
    "left_orthogonal_action",
    "trig_frame",
    "closed_form_build",
    "closed_form_eval",
    "closed_form_lift",
    "stiefel_to_affine",
    "mobius_transform",
    "orthogonal_symmetry",
]

# Orthogonality rejection threshold for frames, factors and partitions.
ORTHO_TOL = 1e-8
# |det P| at or below this means the curve has left the affine chart. The
# top blocks compared against it come from orthonormal frames, so their
# natural scale is 1 and an absolute cutoff is the right test.
CHART_DET_TOL = 1e-12
# Construction-time checks of the closed-form factor matrices.
INTERTWINE_RTOL = 1e-10
FACTOR_ORTHO_TOL = 1e-9


class ChartBreakdownError(RuntimeError):
    """The curve left the affine chart: the top block is not invertible."""

    def __init__(self, t: float | None = None):
        self.t = t
        where = f" at t={t!r}" if t is not None else ""
        super().__init__(f"affine chart breakdown{where}: top block is singular")


def _ortho_defect(mat: np.ndarray) -> float:
    return float(np.linalg.norm(mat.T @ mat - np.eye(mat.shape[1])))


@dataclass(frozen=True)
class CurveJet:
    """Slope matrix and its first two derivatives at one parameter value."""

    t: float
    z: np.ndarray
    zd: np.ndarray
    zdd: np.ndarray

    def __post_init__(self):
        z = matlin.as_matrix(self.z)
        zd = matlin.as_matrix(self.zd)
        zdd = matlin.as_matrix(self.zdd)
        if zd.shape != z.shape or zdd.shape != z.shape:
            raise ValueError(
                f"jet matrices must share one shape, got {z.shape}, {zd.shape}, {zdd.shape}"
            )
        object.__setattr__(self, "t", float(self.t))
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "zd", zd)
        object.__setattr__(self, "zdd", zdd)

    @property
    def shape(self) -> tuple[int, int]:
        return self.z.shape


@dataclass(frozen=True)
class SpectralBlock:
    """Frequencies lambda_1 <= ... <= lambda_r embedded in an (n-1) x m slot.

    Realizes the rectangular frequency block and its trigonometric companions:
    a diagonal cos block of size m x m (identity on the last m - r slots) and
    a rectangular sin block of size (n-1) x m (zero off the leading diagonal).
    All blocks are built entrywise from the frequencies; derivative orders 0,
    1 and 2 are supported.
    """

    n: int
    m: int
    lambdas: tuple[float, ...] = ()

    def __post_init__(self):
        n = int(self.n)
        m = int(self.m)
        lams = tuple(float(v) for v in self.lambdas)
        if n < 2:
            raise ValueError(f"n must be at least 2, got {n}")
        if m < 1:
            raise ValueError(f"m must be at least 1, got {m}")
        if len(lams) > min(n - 1, m):
            raise ValueError(
                f"too many frequencies: {len(lams)} > min(n-1, m) = {min(n - 1, m)}"
            )
        for i, lam in enumerate(lams):
            if lam <= 0.0:
                raise ValueError(f"frequencies must be positive, got lambda[{i}]={lam}")
            if i and lam < lams[i - 1]:
                raise ValueError("frequencies must be ascending")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "lambdas", lams)

    @property
    def r(self) -> int:
        return len(self.lambdas)

    def lam_tilde(self) -> np.ndarray:
        """The (n-1) x m frequency block: diag(lambdas) in the top-left corner."""
        out = np.zeros((self.n - 1, self.m))
        for i, lam in enumerate(self.lambdas):
            out[i, i] = lam
        return out

    def cos_block(self, t: float, deriv: int = 0) -> np.ndarray:
        """m x m cosine block, or its first or second time derivative."""
        if deriv not in (0, 1, 2):
            raise ValueError(f"deriv must be 0, 1 or 2, got {deriv}")
        out = np.eye(self.m) if deriv == 0 else np.zeros((self.m, self.m))
        for i, lam in enumerate(self.lambdas):
            if deriv == 0:
                out[i, i] = np.cos(lam * t)
            elif deriv == 1:
                out[i, i] = -lam * np.sin(lam * t)
            else:
                out[i, i] = -lam * lam * np.cos(lam * t)
        return out

    def sin_block(self, t: float, deriv: int = 0) -> np.ndarray:
        """(n-1) x m sine block, or its first or second time derivative."""
        if deriv not in (0, 1, 2):
            raise ValueError(f"deriv must be 0, 1 or 2, got {deriv}")
        out = np.zeros((self.n - 1, self.m))
        for i, lam in enumerate(self.lambdas):
            if deriv == 0:
                out[i, i] = np.sin(lam * t)
            elif deriv == 1:
                out[i, i] = lam * np.cos(lam * t)
            else:
                out[i, i] = -lam * lam * np.sin(lam * t)
        return out


@dataclass(frozen=True)
class ClosedFormGeodesic:
    """Closed-form geodesic data: frequencies, initial slope B, and the factor
    matrices msqrt_inv = (I + B^T B)^{-1/2} and nsqrt_inv = (I + B B^T)^{-1/2}.

    Construction verifies the intertwining identity nsqrt_inv @ B =
    B @ msqrt_inv and that the assembled block factor is orthogonal; both
    are what make the trigonometric frame transport work.
    """

    spec: SpectralBlock
    b: np.ndarray
    msqrt_inv: np.ndarray
    nsqrt_inv: np.ndarray

    def __post_init__(self):
        b = matlin.as_matrix(self.b)
        msi = matlin.as_matrix(self.msqrt_inv)
        nsi = matlin.as_matrix(self.nsqrt_inv)
        nm1, m = self.spec.n - 1, self.spec.m
        if b.shape != (nm1, m):
            raise ValueError(f"b must be {(nm1, m)}, got {b.shape}")
        if msi.shape != (m, m) or nsi.shape != (nm1, nm1):
            raise ValueError("factor matrices do not match (n, m)")
        defect = float(np.linalg.norm(nsi @ b - b @ msi))
        if defect > INTERTWINE_RTOL * (1.0 + float(np.linalg.norm(b))):
            raise ValueError(f"intertwining identity NB = BM fails (defect {defect:.3e})")
        factor = np.block([[msi, msi @ b.T], [-nsi @ b, nsi]])
        if _ortho_defect(factor) > FACTOR_ORTHO_TOL:
            raise ValueError("assembled block factor is not orthogonal")
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "msqrt_inv", msi)
        object.__setattr__(self, "nsqrt_inv", nsi)

    def orthogonal_factor(self) -> np.ndarray:
        """The (n-1+m) x (n-1+m) orthogonal factor [[M, M B^T], [-N B, N]]."""
        return np.block(
            [
                [self.msqrt_inv, self.msqrt_inv @ self.b.T],
                [-self.nsqrt_inv @ self.b, self.nsqrt_inv],
            ]
        )


@dataclass(frozen=True)
class StiefelFrame:
    """Orthonormal m-frame split into a square top block P and bottom block Q."""

    v: np.ndarray
    split: int

    def __post_init__(self):
        v = matlin.as_matrix(self.v)
        split = int(self.split)
        if split != v.shape[1]:
            raise ValueError(
                f"split must equal the frame width (top block is square), "
                f"got split={split} for shape {v.shape}"
            )
        if v.shape[0] <= split:
            raise ValueError("frame must have rows below the split")
        defect = _ortho_defect(v)
        if defect > ORTHO_TOL:
            raise ValueError(f"frame columns are not orthonormal (defect {defect:.3e})")
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "split", split)

    @property
    def p(self) -> np.ndarray:
        return self.v[: self.split, :]

    @property
    def q(self) -> np.ndarray:
        return self.v[self.split :, :]


@dataclass(frozen=True)
class OrthPartition:
    """Blocks (a, bblk, c, d) of an orthogonal matrix [[a, bblk], [c, d]].

    a is m x m and d is (n-1) x (n-1); bblk is the top-right block, named to
    avoid clashing with the initial slope B of the closed forms.
    """

    a: np.ndarray
    bblk: np.ndarray
    c: np.ndarray
    d: np.ndarray

    def __post_init__(self):
        a = matlin.as_matrix(self.a)
        bblk = matlin.as_matrix(self.bblk)
        c = matlin.as_matrix(self.c)
        d = matlin.as_matrix(self.d)
        m = a.shape[0]
        k = d.shape[0]
        if a.shape != (m, m) or d.shape != (k, k):
            raise ValueError("diagonal blocks must be square")
        if bblk.shape != (m, k) or c.shape != (k, m):
            raise ValueError(
                f"off-diagonal blocks must be {m}x{k} and {k}x{m}, "
                f"got {bblk.shape} and {c.shape}"
            )
        full = np.block([[a, bblk], [c, d]])
        defect = _ortho_defect(full)
        if defect > ORTHO_TOL:
            raise ValueError(f"assembled partition is not orthogonal (defect {defect:.3e})")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "bblk", bblk)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", d)

    @classmethod
    def identity(cls, n: int, m: int) -> "OrthPartition":
        return cls(
            np.eye(m), np.zeros((m, n - 1)), np.zeros((n - 1, m)), np.eye(n - 1)
        )

    @classmethod
    def from_matrix(cls, l, m: int) -> "OrthPartition":
        lm = matlin.as_matrix(l)
        return cls(lm[:m, :m], lm[:m, m:], lm[m:, :m], lm[m:, m:])

    def assembled(self) -> np.ndarray:
        return np.block([[self.a, self.bblk], [self.c, self.d]])


def curvature_quadratic(z: np.ndarray, zd: np.ndarray, metric_sign: int = 1) -> np.ndarray:
    """The quadratic term 2 Zd Z^T (I + sign * Z Z^T)^{-1} Zd.

    This is the single implementation of the core algebra shared by the
    residual operators and the integrator right-hand sides; metric_sign is
    +1 for the Euclidean model and -1 for the Lorentzian one.  For -1 the
    Gram factor can be singular, in which case SingularMatrixError
    propagates to the caller.
    """
    gram = np.eye(z.shape[0]) + metric_sign * (z @ z.T)
    _, inv = matlin.invert_with_det(gram)
    return 2.0 * (zd @ z.T) @ inv @ zd


def affine_residual(jet: CurveJet) -> np.ndarray:
    """Geodesic defect Zdd - 2 Zd Z^T (I + Z Z^T)^{-1} Zd in the affine chart.

    Zero (to rounding) exactly when the jet satisfies the geodesic equation.
    The Gram factor I + Z Z^T is always invertible.
    """
    return jet.zdd - curvature_quadratic(jet.z, jet.zd, 1)


def stiefel_residual(
    frame: StiefelFrame, vd, vdd
) -> tuple[float, float, np.ndarray]:
    """Frame-model geodesic defect.

    Returns (||V^T V - I||_F, ||V^T Vd||_F, Vdd + V (Vd^T Vd)); all three
    vanish exactly when (V, Vd, Vdd) is a geodesic frame curve.
    """
    v = frame.v
    vd = matlin.as_matrix(vd)
    vdd = matlin.as_matrix(vdd)
    if vd.shape != v.shape or vdd.shape != v.shape:
        raise ValueError("vd and vdd must match the frame shape")
    c1 = float(np.linalg.norm(v.T @ v - np.eye(v.shape[1])))
    c2 = float(np.linalg.norm(v.T @ vd))
    res = vdd + v @ (vd.T @ vd)
    return c1, c2, res


FrameSample = tuple[StiefelFrame, np.ndarray, np.ndarray]


def left_orthogonal_action(l, samples) -> list[FrameSample]:
    """Apply V -> L V (and likewise Vd, Vdd) to frame-curve samples.

    L must be orthogonal of the full ambient size; geodesic samples map to
    geodesic samples since the frame residual transforms by L as well.
    """
    lm = matlin.as_matrix(l)
    if lm.shape[0] != lm.shape[1]:
        raise ValueError("l must be square")
    defect = _ortho_defect(lm)
    if defect > ORTHO_TOL:
        raise ValueError(f"l is not orthogonal (defect {defect:.3e})")
    out: list[FrameSample] = []
    for frame, vd, vdd in samples:
        if frame.v.shape[0] != lm.shape[0]:
            raise ValueError("l size does not match frame size")
        vd = matlin.as_matrix(vd)
        vdd = matlin.as_matrix(vdd)
        out.append((StiefelFrame(lm @ frame.v, frame.split), lm @ vd, lm @ vdd))
    return out


def trig_frame(spec: SpectralBlock, t: float) -> FrameSample:
    """The stacked cosine/sine frame sample at time t, with derivatives."""
    v = np.vstack([spec.cos_block(t), spec.sin_block(t)])
    vd = np.vstack([spec.cos_block(t, 1), spec.sin_block(t, 1)])
    vdd = np.vstack([spec.cos_block(t, 2), spec.sin_block(t, 2)])
    return StiefelFrame(v, spec.m), vd, vdd


def closed_form_build(spec: SpectralBlock, b) -> ClosedFormGeodesic:
    """Assemble a closed-form geodesic from frequencies and initial slope B."""
    bm = matlin.as_matrix(b)
    nm1, m = spec.n - 1, spec.m
    if bm.shape != (nm1, m):
        raise ValueError(f"b must be {(nm1, m)}, got {bm.shape}")
    _, msqrt_inv = matlin.spd_roots(np.eye(m) + bm.T @ bm)
    _, nsqrt_inv = matlin.spd_roots(np.eye(nm1) + bm @ bm.T)
    return ClosedFormGeodesic(spec, bm, msqrt_inv, nsqrt_inv)


def _pq_blocks(g: ClosedFormGeodesic, t: float, deriv: int) -> tuple[np.ndarray, np.ndarray]:
    c = g.spec.cos_block(t, deriv)
    s = g.spec.sin_block(t, deriv)
    p = g.msqrt_inv @ c + (g.msqrt_inv @ g.b.T) @ s
    q = -(g.nsqrt_inv @ g.b) @ c + g.nsqrt_inv @ s
    return p, q


def closed_form_eval(g: ClosedFormGeodesic, t: float) -> CurveJet:
    """Evaluate the closed-form slope curve and its first two derivatives.

    Z(t) = Q(t) P(t)^{-1} with P = M cos + M B^T sin and Q = -N B cos + N sin;
    the derivatives come from the analytic product/inverse rule, never from
    finite differences, so residual checks on the result are exact up to
    rounding. Raises ChartBreakdownError (carrying t) when P(t) is singular,
    which cannot happen for certified entire pairs.
    """
    p, q = _pq_blocks(g, t, 0)
    pd, qd = _pq_blocks(g, t, 1)
    pdd, qdd = _pq_blocks(g, t, 2)
    if abs(matlin.det(p)) <= CHART_DET_TOL:
        raise ChartBreakdownError(t)
    try:
        _, pinv = matlin.invert_with_det(p)
    except matlin.SingularMatrixError:
        raise ChartBreakdownError(t) from None
    z = q @ pinv
    zd = (qd - z @ pd) @ pinv
    zdd = (qdd - 2.0 * (zd @ pd) - z @ pdd) @ pinv
    return CurveJet(t, z, zd, zdd)


def closed_form_lift(g: ClosedFormGeodesic, t: float) -> FrameSample:
    """Frame-model lift of the closed form: the orthogonal factor applied to
    the trigonometric frame sample at t."""
    (sample,) = left_orthogonal_action(g.orthogonal_factor(), [trig_frame(g.spec, t)])
    return sample


def stiefel_to_affine(frame: StiefelFrame) -> np.ndarray:
    """Chart transport Z = Q P^{-1}; raises ChartBreakdownError off the chart."""
    p = frame.p
    if abs(matlin.det(p)) <= CHART_DET_TOL:
        raise ChartBreakdownError()
    try:
        _, pinv = matlin.invert_with_det(p)
    except matlin.SingularMatrixError:
        raise ChartBreakdownError() from None
    return frame.q @ pinv


def mobius_transform(part: OrthPartition, jet: CurveJet) -> CurveJet:
    """Fractional linear action W = (C + D Z)(A + Bblk Z)^{-1} on a jet.

    Derivatives follow analytically; the residual transforms as
    (D - W Bblk) R_Z (A + Bblk Z)^{-1}, so geodesic jets map to geodesic
    jets. Raises ChartBreakdownError when A + Bblk Z is singular.
    """
    nm1, m = jet.shape
    if part.a.shape[0] != m or part.d.shape[0] != nm1:
        raise ValueError(
            f"partition blocks ({part.a.shape[0]}, {part.d.shape[0]}) do not match "
            f"jet shape {jet.shape}"
        )
    s = part.a + part.bblk @ jet.z
    try:
        _, sinv = matlin.invert_with_det(s)
    except matlin.SingularMatrixError:
        raise ChartBreakdownError(jet.t) from None
    w = (part.c + part.d @ jet.z) @ sinv
    sd = part.bblk @ jet.zd
    sdd = part.bblk @ jet.zdd
    wd = (part.d @ jet.zd - w @ sd) @ sinv
    wdd = (part.d @ jet.zdd - 2.0 * (wd @ sd) - w @ sdd) @ sinv
    return CurveJet(jet.t, w, wd, wdd)


def orthogonal_symmetry(jet: CurveJet, s=None, rmat=None) -> CurveJet:
    """Left action by S in O(n-1) and right action by R in O(m) on a jet.

    The affine residual transforms as S R_Z R, so geodesics stay geodesics
    and the residual norm is preserved. Non-orthogonal factors are rejected.
    """
    nm1, m = jet.shape
    z, zd, zdd = jet.z, jet.zd, jet.zdd
    if s is not None:
        sm = matlin.as_matrix(s)
        if sm.shape != (nm1, nm1):
            raise ValueError(f"s must be {nm1}x{nm1}, got {sm.shape}")
        defect = _ortho_defect(sm)
        if defect > ORTHO_TOL:
            raise ValueError(f"s is not orthogonal (defect {defect:.3e})")
        z, zd, zdd = sm @ z, sm @ zd, sm @ zdd
    if rmat is not None:
        rm = matlin.as_matrix(rmat)
        if rm.shape != (m, m):
            raise ValueError(f"rmat must be {m}x{m}, got {rm.shape}")
        defect = _ortho_defect(rm)
        if defect > ORTHO_TOL:
            raise ValueError(f"rmat is not orthogonal (defect {defect:.3e})")
        z, zd, zdd = z @ rm, zd @ rm, zdd @ rm
    return CurveJet(jet.t, z, zd, zdd)
