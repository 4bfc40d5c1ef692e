"""Shared samplers for the test suite.

Random configurations are drawn with seeded generators so every run is
reproducible; margins keep sampled configurations away from case
boundaries where a different branch could legitimately answer.
"""

from __future__ import annotations

import math

import numpy as np

TWO_PI = 2.0 * math.pi


def random_points(rng: np.random.Generator, n: int) -> np.ndarray:
    """Uniform points on the sphere as (n, 2) [theta, phi] rows."""
    theta = rng.uniform(-math.pi, math.pi, n)
    phi = np.arcsin(rng.uniform(-1.0, 1.0, n))
    return np.stack([theta, phi], axis=1)


def random_partial_overlap_triples(
    rng: np.random.Generator,
    n: int,
    margin: float = 1e-3,
    r1_range: tuple[float, float] = (0.05, math.pi - 0.05),
) -> list[tuple[float, float, float]]:
    """Sample (r1, r2, d) strictly inside the partial-overlap regime.

    ``d`` stays at least ``margin`` away from every case boundary.
    """
    out: list[tuple[float, float, float]] = []
    while len(out) < n:
        r1 = rng.uniform(*r1_range)
        r2 = rng.uniform(0.05, math.pi - 0.05)
        lo = abs(r1 - r2) + margin
        hi = min(r1 + r2, TWO_PI - r1 - r2) - margin
        if hi <= lo:
            continue
        out.append((r1, r2, rng.uniform(lo, hi)))
    return out


def random_view_triples(
    rng: np.random.Generator, n: int, margin: float = 1e-3
) -> list[tuple[float, float, float]]:
    """Sample (r_fov, r_sv, e) strictly inside the partial-overlap case,
    with the field-of-view radius restricted to its API range."""
    return [
        (r1, r2, d)
        for r1, r2, d in random_partial_overlap_triples(
            rng, n, margin=margin, r1_range=(0.2, math.pi / 2)
        )
    ]
