"""Seeded sampling of points and tangent vectors."""

from typing import List, Optional

import numpy as np

from app.config import settings
from app.models.manifold import BASEPOINT, Manifold, Point


def default_tolerance(manifold: Manifold) -> float:
    return settings.frame_tolerance if manifold.is_frame else settings.coordinate_tolerance


def shrunk_box(manifold: Manifold, shrink: float) -> np.ndarray:
    box = np.asarray(manifold.chart_box, dtype=float)
    width = box[:, 1] - box[:, 0]
    return np.stack([box[:, 0] + shrink * width, box[:, 1] - shrink * width], axis=1)


def sample_points(
    manifold: Manifold,
    count: int,
    rng: np.random.Generator,
    shrink: Optional[float] = None,
) -> List[Point]:
    """Uniform points in the chart box shrunk by ``shrink`` of its width per side.

    Homogeneous frames have a single basepoint; it is repeated ``count`` times
    so per-sample vectors still vary.
    """
    if manifold.is_frame:
        return [BASEPOINT] * count
    box = shrunk_box(manifold, settings.box_shrink if shrink is None else shrink)
    coords = rng.uniform(box[:, 0], box[:, 1], size=(count, manifold.dim))
    return [Point(coords=tuple(float(x) for x in row)) for row in coords]
