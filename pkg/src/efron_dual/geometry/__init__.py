"""Convex bodies, uniform samplers and exact-decision convex hulls (d = 1, 2, 3)."""
from __future__ import annotations

import numpy as np

from ..rng import RngStreamSpec
from .bodies import PRESETS, ConvexBody, parse_body, reference_volume
from .hull import HullSummary, convex_hull, hull_volume_exact

__all__ = [
    "ConvexBody",
    "HullSummary",
    "PRESETS",
    "RngStreamSpec",
    "convex_hull",
    "hull_volume_exact",
    "parse_body",
    "reference_volume",
    "sample_uniform",
]


def sample_uniform(body: ConvexBody, count: int, stream: RngStreamSpec) -> np.ndarray:
    """``count`` uniform points in ``body`` drawn from ``stream``; shape ``(count, d)``."""
    from ..kernels import get_backend

    if count < 1:
        raise ValueError("count must be positive")
    return get_backend().sample_points(
        body.code, np.asarray(body.params, dtype=np.float64), body.dimension, count,
        stream.master_seed, stream.stream_index,
    )
