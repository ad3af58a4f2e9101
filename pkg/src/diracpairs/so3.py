"""Rotation-group helpers for the numeric tier.

Exponential-chart plumbing (Rodrigues formula, left Jacobian and its
inverse, with series fallbacks near zero) plus the Cayley bridge used to
freeze floating rotations into exactly orthogonal rational matrices.
"""

from __future__ import annotations

import numpy as np

from . import rational as rat


def hat(x):
    x = np.asarray(x, dtype=float)
    return np.array(
        [
            [0.0, -x[2], x[1]],
            [x[2], 0.0, -x[0]],
            [-x[1], x[0], 0.0],
        ]
    )


def exp_rotation(x):
    """Rodrigues rotation for a chart point ``x``."""
    x = np.asarray(x, dtype=float)
    theta = float(np.linalg.norm(x))
    h = hat(x)
    if theta < 1e-8:
        return np.eye(3) + h + 0.5 * (h @ h)
    a = np.sin(theta) / theta
    b = (1.0 - np.cos(theta)) / theta**2
    return np.eye(3) + a * h + b * (h @ h)


def left_jacobian(x):
    x = np.asarray(x, dtype=float)
    theta = float(np.linalg.norm(x))
    h = hat(x)
    if theta < 1e-6:
        return np.eye(3) + 0.5 * h + (h @ h) / 6.0
    b = (1.0 - np.cos(theta)) / theta**2
    c = (theta - np.sin(theta)) / theta**3
    return np.eye(3) + b * h + c * (h @ h)


def left_jacobian_inv(x):
    x = np.asarray(x, dtype=float)
    theta = float(np.linalg.norm(x))
    h = hat(x)
    if theta < 1e-6:
        return np.eye(3) - 0.5 * h + (h @ h) / 12.0
    c = 1.0 / theta**2 - (1.0 + np.cos(theta)) / (2.0 * theta * np.sin(theta))
    return np.eye(3) - 0.5 * h + c * (h @ h)


def rationalize_rotation(r, max_denominator=10**8):
    """Exactly orthogonal rational matrix near the rotation ``r``.

    Round the Cayley preimage (a skew matrix, kept exactly skew by mirroring
    the strict upper triangle) and map back; requires the rotation angle to
    stay away from a half turn, where the Cayley chart blows up.
    """
    r = np.asarray(r, dtype=float)
    s = np.linalg.solve((r + np.eye(3)).T, (r - np.eye(3)).T).T
    q = [[rat.scalar(0)] * 3 for _ in range(3)]
    for i in range(3):
        for j in range(i + 1, 3):
            v = rat.rationalize(0.5 * (s[i, j] - s[j, i]), max_denominator)
            q[i][j] = v
            q[j][i] = -v
    sq = rat.matrix(q)
    eye = rat.identity(3)
    return rat.mat_mul(rat.invert(rat.mat_sub(eye, sq)), rat.mat_add(eye, sq))


def rationalize_matrix(m, max_denominator=10**8):
    return rat.matrix(
        [[rat.rationalize(float(v), max_denominator) for v in row] for row in np.asarray(m, dtype=float)]
    )


def sample_chart_points(count, seed, radius=np.pi - 0.2, min_radius=0.15):
    """Seeded points in the exponential chart, away from both the origin and
    the cut locus."""
    rng = np.random.default_rng(seed)
    pts = []
    while len(pts) < count:
        p = rng.uniform(-radius, radius, size=3)
        r = float(np.linalg.norm(p))
        if min_radius < r < radius:
            pts.append(p)
    return pts
