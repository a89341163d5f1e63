"""Construction and certification of globally defined closed-form pairs.

A pair (frequencies, B) yields a slope curve defined for all t exactly when
det(cos_block(t) + B^T sin_block(t)) stays positive. For odd ambient
dimension, stacking 2x2 rotation-like cells a*I + b*J along the diagonal of B
(one group per frequency) guarantees positivity; this module builds such
pairs and scans arbitrary pairs for violations. With rational frequencies
p/q the determinant is periodic and a finite scan certifies all of t.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import matlin
from .geodesic import SpectralBlock

__all__ = [
    "BlockSpec",
    "PositivityReport",
    "CERTIFIED",
    "VIOLATION",
    "build_odd_pair",
    "positivity_scan",
    "char_poly_positive_2x2",
    "tan_blow_up_time",
]

CERTIFIED = "entire-certified-on-interval"
VIOLATION = "violation-found"

GOLDEN_WIDTH = 1e-10
DEFAULT_GRID = 4096
RATIONAL_MATCH_RTOL = 1e-12


@dataclass(frozen=True)
class BlockSpec:
    """Diagonal-block recipe: per frequency, a list of (a, b) cells.

    Each block contributes an even-sized square cell group to B, built from
    2x2 cells [[a, b], [-b, a]] (eigenvalues a +- ib, never real since
    b != 0). Frequencies must be distinct across blocks and the total block
    size must fit inside min(n-1, m).
    """

    n: int
    m: int
    blocks: tuple

    def __post_init__(self):
        n = int(self.n)
        m = int(self.m)
        if n < 2 or m < 1:
            raise ValueError(f"need n >= 2 and m >= 1, got n={n}, m={m}")
        norm = []
        seen = set()
        total = 0
        if not self.blocks:
            raise ValueError("at least one block is required")
        for lam, pairs in self.blocks:
            lam = float(lam)
            if lam <= 0.0:
                raise ValueError(f"block frequency must be positive, got {lam}")
            if lam in seen:
                raise ValueError(f"block frequencies must be distinct, {lam} repeats")
            seen.add(lam)
            cells = tuple((float(a), float(b)) for a, b in pairs)
            if not cells:
                raise ValueError("each block needs at least one (a, b) cell")
            for a, b in cells:
                if b == 0.0:
                    raise ValueError(
                        f"cell ({a}, {b}) has a real eigenvalue; b must be nonzero"
                    )
            total += 2 * len(cells)
            norm.append((lam, cells))
        if total > min(n - 1, m):
            raise ValueError(
                f"total block size {total} exceeds min(n-1, m) = {min(n - 1, m)}"
            )
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "blocks", tuple(norm))


@dataclass(frozen=True)
class PositivityReport:
    min_det: float
    argmin_t: float
    scanned_interval: tuple[float, float]
    periodic: bool
    verdict: str


_J = np.array([[0.0, 1.0], [-1.0, 0.0]])


def build_odd_pair(spec: BlockSpec) -> tuple[SpectralBlock, np.ndarray]:
    """Realize a BlockSpec as (frequencies, B) with guaranteed positivity.

    Frequencies repeat per block size and come out ascending (blocks are
    sorted, which permutes the aligned diagonal cell groups of B along with
    them). B is zero outside its leading diagonal cell groups.
    """
    ordered = sorted(spec.blocks, key=lambda blk: blk[0])
    lambdas: list[float] = []
    cells_2x2: list[np.ndarray] = []
    for lam, cells in ordered:
        lambdas.extend([lam] * (2 * len(cells)))
        for a, bc in cells:
            cells_2x2.append(a * np.eye(2) + bc * _J)
    sb = SpectralBlock(spec.n, spec.m, tuple(lambdas))
    b = np.zeros((spec.n - 1, spec.m))
    off = 0
    for cell in cells_2x2:
        b[off : off + 2, off : off + 2] = cell
        off += 2
    return sb, b


def char_poly_positive_2x2(cell) -> bool:
    """True when a 2x2 cell has no real eigenvalue (negative discriminant)."""
    c = matlin.as_matrix(cell)
    if c.shape != (2, 2):
        raise ValueError(f"expected a 2x2 cell, got {c.shape}")
    tr = c[0, 0] + c[1, 1]
    d = c[0, 0] * c[1, 1] - c[0, 1] * c[1, 0]
    return tr * tr < 4.0 * d


def tan_blow_up_time(spec: SpectralBlock) -> float | None:
    """First blow-up time pi / (2 lambda_r) of the zero-slope family.

    Returns None when there are no frequencies (the curve is constant and
    never blows up).
    """
    if spec.r == 0:
        return None
    return math.pi / (2.0 * spec.lambdas[-1])


def _golden_minimize(f, lo: float, hi: float, width: float = GOLDEN_WIDTH):
    """Golden-section minimization of f over [lo, hi] down to bracket width."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while (b - a) > width:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    t = 0.5 * (a + b)
    return t, f(t)


def _common_period(lambdas: tuple[float, ...], rational_lambdas) -> float:
    """Smallest T > 0 with lambda_i * T in 2*pi*Z for all i, from (p, q) pairs."""
    pairs = [(int(p), int(q)) for p, q in rational_lambdas]
    if len(pairs) != len(lambdas):
        raise ValueError(
            f"need one (p, q) pair per frequency: {len(pairs)} != {len(lambdas)}"
        )
    ps: list[int] = []
    qs: list[int] = []
    for lam, (p, q) in zip(lambdas, pairs):
        if p <= 0 or q <= 0:
            raise ValueError(f"rational frequencies must be positive, got {p}/{q}")
        if abs(p / q - lam) > RATIONAL_MATCH_RTOL * lam:
            raise ValueError(f"rational {p}/{q} does not match frequency {lam}")
        g = math.gcd(p, q)
        ps.append(p // g)
        qs.append(q // g)
    if not ps:
        return 2.0 * math.pi
    lcm_q = 1
    for q in qs:
        lcm_q = math.lcm(lcm_q, q)
    gcd_p = 0
    for p in ps:
        gcd_p = math.gcd(gcd_p, p)
    return 2.0 * math.pi * lcm_q / gcd_p


def positivity_scan(
    spec: SpectralBlock,
    b,
    interval: tuple[float, float] | None = None,
    grid_points: int = DEFAULT_GRID,
    rational_lambdas=None,
) -> PositivityReport:
    """Scan det(cos_block(t) + B^T sin_block(t)) for a sign violation.

    The determinant is sampled on a grid, every local minimum is refined by
    golden section to bracket width 1e-10, and the reported minimum is
    re-evaluated at its argmin so a violation verdict is reproducible.

    With rational_lambdas given as (p, q) integer pairs matching the
    frequencies, the interval may be omitted: the exact common period is
    scanned and the certificate is global (periodic=True). Irrational
    frequencies only ever earn an interval verdict and require an explicit
    interval.
    """
    bm = matlin.as_matrix(b)
    if bm.shape != (spec.n - 1, spec.m):
        raise ValueError(f"b must be {(spec.n - 1, spec.m)}, got {bm.shape}")
    if grid_points < 16:
        raise ValueError(f"grid_points must be at least 16, got {grid_points}")

    periodic = False
    if interval is None:
        if spec.r == 0:
            interval = (0.0, 2.0 * math.pi)
            periodic = True
        elif rational_lambdas is not None:
            interval = (0.0, _common_period(spec.lambdas, rational_lambdas))
            periodic = True
        else:
            raise ValueError(
                "an explicit interval is required unless all frequencies are "
                "rational (pass rational_lambdas)"
            )
    lo, hi = float(interval[0]), float(interval[1])
    if not hi > lo:
        raise ValueError(f"empty scan interval ({lo}, {hi})")

    def det_at(t: float) -> float:
        return matlin.det(spec.cos_block(t) + bm.T @ spec.sin_block(t))

    ts = np.linspace(lo, hi, grid_points)
    vals = np.array([det_at(t) for t in ts])

    best_t = float(ts[int(np.argmin(vals))])
    best_v = float(np.min(vals))
    # Dips shallower than rounding noise are plateaus, not minima to refine.
    dip_tol = 1e-12 * max(1.0, float(np.max(np.abs(vals))))
    for i in range(len(ts)):
        left = vals[i - 1] if i > 0 else np.inf
        right = vals[i + 1] if i + 1 < len(ts) else np.inf
        if vals[i] <= left and vals[i] <= right and max(left, right) - vals[i] > dip_tol:
            a = ts[i - 1] if i > 0 else ts[i]
            c = ts[i + 1] if i + 1 < len(ts) else ts[i]
            if c > a:
                t_ref, v_ref = _golden_minimize(det_at, float(a), float(c))
                if v_ref < best_v:
                    best_t, best_v = t_ref, v_ref
    best_v = det_at(best_t)  # reported minimum must reproduce at argmin_t
    verdict = CERTIFIED if best_v > 0.0 else VIOLATION
    return PositivityReport(
        min_det=best_v,
        argmin_t=best_t,
        scanned_interval=(lo, hi),
        periodic=periodic,
        verdict=verdict,
    )
