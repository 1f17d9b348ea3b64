"""Deterministic toy datasets: a square-wave regression set and a star classification set."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import ConfigurationError


@dataclass
class RegressionSet:
    xs: np.ndarray
    ys: np.ndarray

    @property
    def features(self) -> np.ndarray:
        return self.xs[:, None]

    @property
    def targets(self) -> np.ndarray:
        return self.ys


@dataclass
class StarSet:
    points: np.ndarray  # (N, 2)
    labels: np.ndarray  # +1 inside, -1 outside
    polygon: np.ndarray  # (2*arms, 2), open ring; the last vertex joins the first

    @property
    def features(self) -> np.ndarray:
        return self.points

    @property
    def targets(self) -> np.ndarray:
        return self.labels

    @property
    def inside_fraction(self) -> float:
        return float(np.mean(self.labels > 0))


def make_step_dataset(num_points: int = 200, periods: int = 2, domain: tuple[float, float] = (0.0, 1.0)) -> RegressionSet:
    """Square wave sampled at ``num_points`` equally spaced inputs.

    ``y = +1`` where ``floor(2 * periods * u)`` is even and ``-1`` otherwise,
    with ``u`` the position rescaled to ``[0, 1]``.  The wave is periodic
    with period ``1 / periods``, so the right endpoint ``u = 1`` takes the
    same value as ``u = 0``.
    """
    if num_points < 2:
        raise ConfigurationError(f"num_points must be >= 2, got {num_points}")
    if periods < 1:
        raise ConfigurationError(f"periods must be >= 1, got {periods}")
    lo, hi = domain
    if not hi > lo:
        raise ConfigurationError(f"empty domain {domain}")
    u = np.arange(num_points) / (num_points - 1)
    ys = np.where(np.floor(2 * periods * u) % 2 == 0, 1.0, -1.0)
    return RegressionSet(lo + (hi - lo) * u, ys)


def star_polygon(
    outer_r: float = 0.9,
    inner_r: float = 0.35,
    arms: int = 5,
    center: tuple[float, float] = (0.0, 0.0),
    rotation: float = math.pi / 2,
) -> np.ndarray:
    """Vertices of a star alternating outer and inner radius, first vertex at ``rotation``."""
    if not 0 < inner_r < outer_r:
        raise ConfigurationError(f"need 0 < inner_r < outer_r, got inner_r={inner_r}, outer_r={outer_r}")
    if arms < 2:
        raise ConfigurationError(f"a star needs at least 2 arms, got {arms}")
    k = np.arange(2 * arms)
    angle = rotation + k * math.pi / arms
    radius = np.where(k % 2 == 0, outer_r, inner_r)
    return np.column_stack([center[0] + radius * np.cos(angle), center[1] + radius * np.sin(angle)])


def _on_segment(px, py, ax, ay, bx, by, tol=1e-12) -> bool:
    cross = (bx - ax) * (py - ay) - (by - ay) * (px - ax)
    if abs(cross) > tol * max(1.0, math.hypot(bx - ax, by - ay)):
        return False
    return min(ax, bx) - tol <= px <= max(ax, bx) + tol and min(ay, by) - tol <= py <= max(ay, by) + tol


def point_in_star(p: Sequence[float], polygon: np.ndarray) -> bool:
    """Even-odd ray casting; points on an edge or vertex count as inside."""
    px, py = float(p[0]), float(p[1])
    verts = np.asarray(polygon, dtype=float)
    inside = False
    n = len(verts)
    for i in range(n):
        ax, ay = verts[i]
        bx, by = verts[(i + 1) % n]
        if _on_segment(px, py, ax, ay, bx, by):
            return True
        if (ay > py) != (by > py):
            x_cross = ax + (py - ay) * (bx - ax) / (by - ay)
            if px < x_cross:
                inside = not inside
    return inside


def make_star_dataset(
    grid_side: int = 40,
    outer_r: float = 0.9,
    inner_r: float = 0.35,
    arms: int = 5,
    center: tuple[float, float] = (0.0, 0.0),
    rotation: float = math.pi / 2,
) -> StarSet:
    """Regular ``grid_side x grid_side`` grid over ``[-1, 1]^2`` labelled by a star polygon."""
    if grid_side < 2:
        raise ConfigurationError(f"grid_side must be >= 2, got {grid_side}")
    polygon = star_polygon(outer_r, inner_r, arms, center, rotation)
    axis = np.linspace(-1.0, 1.0, grid_side)
    gx, gy = np.meshgrid(axis, axis, indexing="xy")
    points = np.column_stack([gx.ravel(), gy.ravel()])
    labels = np.array([1.0 if point_in_star(p, polygon) else -1.0 for p in points])
    return StarSet(points, labels, polygon)


def write_dataset_csv(path: str | Path, features: np.ndarray, labels: np.ndarray) -> None:
    """Write ``features..., label`` rows with a header and 17 significant digits."""
    features = np.asarray(features, dtype=float)
    if features.ndim == 1:
        features = features[:, None]
    header = [f"x{k}" for k in range(features.shape[1])] + ["label"]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row, y in zip(features, labels):
            w.writerow([f"{v:.17g}" for v in row] + [f"{float(y):.17g}"])
