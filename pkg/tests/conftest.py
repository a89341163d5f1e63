"""Shared generators for property tests and the acceptance suite."""

from __future__ import annotations

import numpy as np

from grassmin import entire, geodesic

# Rational frequency menu (p, q) with values 1/2, 1, 3/2, 2, 5/2, 3.
RATIONAL_MENU = ((1, 2), (1, 1), (3, 2), (2, 1), (5, 2), (3, 1))


def random_pair(rng, max_dim: int = 6):
    """Random (SpectralBlock, B) with 1 <= n-1, m <= max_dim.

    The pair need not satisfy the positivity condition; the closed form is
    still valid near t = 0.
    """
    nm1 = int(rng.integers(1, max_dim + 1))
    m = int(rng.integers(1, max_dim + 1))
    r = int(rng.integers(0, min(nm1, m) + 1))
    lams = tuple(sorted(rng.uniform(0.3, 2.5, size=r).tolist()))
    spec = geodesic.SpectralBlock(nm1 + 1, m, lams)
    b = rng.normal(size=(nm1, m))
    return spec, b


def safe_time_window(spec, b) -> float:
    """Half-width of a t-window around 0 guaranteed to stay in the chart.

    P(t) differs from P(0) by an operator-norm perturbation bounded by
    (lam_max * |t|)^2 / 2 + ||B||_2 * lam_max * |t| after factoring out the
    invertible M; keeping that below ~0.35 keeps P invertible, and
    0.3 / (lam_max * (1 + ||B||_2)) does so for every pair.
    """
    lam_max = max(spec.lambdas) if spec.lambdas else 1.0
    bnorm = float(np.linalg.norm(b, 2))
    return 0.3 / (lam_max * (1.0 + bnorm))


def random_entire_blockspec(rng, max_blocks: int = 2, menu=RATIONAL_MENU):
    """Random diagonal-cell recipe with rational frequencies from the menu.

    Returns (BlockSpec, rational_lambdas) where the rational pairs align with
    the frequencies emitted by build_odd_pair (blocks come out ascending).
    The ambient dimension n is odd by construction.
    """
    k = int(rng.integers(1, max_blocks + 1))
    chosen = sorted(rng.choice(len(menu), size=k, replace=False).tolist())
    blocks = []
    rationals: list[tuple[int, int]] = []
    total = 0
    for idx in chosen:
        p, q = menu[idx]
        n_cells = int(rng.integers(1, 3))
        pairs = []
        for _ in range(n_cells):
            a = float(rng.uniform(-0.8, 0.8))
            off = float(rng.uniform(0.3, 1.2)) * (1.0 if rng.random() < 0.5 else -1.0)
            pairs.append((a, off))
        blocks.append((p / q, tuple(pairs)))
        rationals.extend([(p, q)] * (2 * n_cells))
        total += 2 * n_cells
    return entire.BlockSpec(total + 1, total, tuple(blocks)), tuple(rationals)


def random_orthogonal(rng, size: int) -> np.ndarray:
    """Haar-ish orthogonal matrix from QR of a Gaussian sample."""
    q, r = np.linalg.qr(rng.normal(size=(size, size)))
    return q * np.sign(np.diag(r))


def rotation_pair():
    """The worked n=3, m=2 instance: frequencies (1/2, 1/2), B = J."""
    spec = geodesic.SpectralBlock(3, 2, (0.5, 0.5))
    b = np.array([[0.0, 1.0], [-1.0, 0.0]])
    return spec, b


def rotation_jet(t: float) -> geodesic.CurveJet:
    """Analytic jet of the rotating solution [[sin t, -cos t], [cos t, sin t]]."""
    z = np.array([[np.sin(t), -np.cos(t)], [np.cos(t), np.sin(t)]])
    zd = np.array([[np.cos(t), np.sin(t)], [-np.sin(t), np.cos(t)]])
    return geodesic.CurveJet(t, z, zd, -z)


def rotation_embed_jet(t: float) -> geodesic.CurveJet:
    """The transposed rotating solution, whose swept graph is the worked
    embedding (x1 sin t - x2 cos t, x1 cos t + x2 sin t); it is the closed
    form for initial slope J^T."""
    z = np.array([[np.sin(t), np.cos(t)], [-np.cos(t), np.sin(t)]])
    zd = np.array([[np.cos(t), -np.sin(t)], [np.sin(t), np.cos(t)]])
    return geodesic.CurveJet(t, z, zd, -z)


def tan_jet(t: float, lam: float = 1.0) -> geodesic.CurveJet:
    """Analytic scalar jet of z = tan(lam t) for n = 2, m = 1."""
    sec2 = 1.0 / np.cos(lam * t) ** 2
    z = np.array([[np.tan(lam * t)]])
    zd = np.array([[lam * sec2]])
    zdd = np.array([[2.0 * lam * lam * np.tan(lam * t) * sec2]])
    return geodesic.CurveJet(t, z, zd, zdd)
