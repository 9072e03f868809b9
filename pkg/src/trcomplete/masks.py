"""Observation-set generation and the sampling projection.

Masks are boolean tensors (True = observed).  Random masks draw an exact
count ``round(sr * N)`` of entries without replacement, so the realized
sampling rate is reproducible; a fixed seed gives a deterministic mask.
Structural masks (stripes, external bitmap patterns) are defined on the
original index space; tensorize them alongside the data so they keep their
visual meaning.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod

import numpy as np
from PIL import Image

__all__ = ["MaskSpec", "generate_mask", "apply_mask", "load_external_mask"]


@dataclass(frozen=True)
class MaskSpec:
    """What to observe: random at rate ``sr``, periodic stripes, or an
    external bitmap (pixel 0 = missing, nonzero = observed).

    For random masks, ``shared_spatial`` samples one mask over the first two
    modes and broadcasts it across the rest (one hole through all channels)
    instead of sampling every entry independently.
    """

    kind: str = "random"
    sr: float = 0.3
    seed: int = 0
    shared_spatial: bool = False
    stripe_axis: int = 2
    stripe_period: int = 2
    stripe_width: int = 1
    path: str | None = None

    def __post_init__(self):
        if self.kind not in ("random", "stripes", "external"):
            raise ValueError(f"unknown mask kind {self.kind!r}")
        if self.kind == "random" and not 0.0 < self.sr <= 1.0:
            raise ValueError(f"sampling rate must be in (0, 1], got {self.sr}")
        if self.kind == "stripes" and (
            self.stripe_period < 1 or not 0 < self.stripe_width <= self.stripe_period
        ):
            raise ValueError("stripe width must be in 1..period")
        if self.kind == "external" and not self.path:
            raise ValueError("external mask needs a path")


def generate_mask(dims, spec: MaskSpec) -> np.ndarray:
    """Boolean observation tensor of shape ``dims`` per ``spec``."""
    dims = tuple(int(d) for d in dims)
    if any(d < 1 for d in dims):
        raise ValueError(f"invalid dims {dims}")
    if spec.kind == "random":
        if spec.shared_spatial:
            if len(dims) < 2:
                raise ValueError("shared-spatial mask needs at least two modes")
            plane = _random_mask(dims[:2], spec.sr, spec.seed)
            return np.broadcast_to(
                plane.reshape(dims[:2] + (1,) * (len(dims) - 2)), dims
            ).copy()
        return _random_mask(dims, spec.sr, spec.seed)
    if spec.kind == "stripes":
        axis = spec.stripe_axis
        if not 1 <= axis <= len(dims):
            raise ValueError(f"stripe axis {axis} out of range for dims {dims}")
        idx = np.arange(dims[axis - 1])
        line = (idx % spec.stripe_period) < spec.stripe_width
        shape = [1] * len(dims)
        shape[axis - 1] = dims[axis - 1]
        return np.broadcast_to(line.reshape(shape), dims).copy()
    return load_external_mask(spec.path, dims)


def _random_mask(dims, sr: float, seed: int) -> np.ndarray:
    n = prod(dims)
    count = int(round(sr * n))
    rng = np.random.default_rng(seed)
    chosen = rng.permutation(n)[:count]
    flat = np.zeros(n, dtype=bool)
    flat[chosen] = True
    return flat.reshape(dims, order="F")


def load_external_mask(path, dims) -> np.ndarray:
    """Read an 8-bit grayscale image as a spatial mask and broadcast it
    across any trailing (channel/band/frame) modes."""
    dims = tuple(int(d) for d in dims)
    with Image.open(path) as img:
        plane = np.asarray(img.convert("L"))
    if plane.shape != dims[:2]:
        raise ValueError(f"mask image is {plane.shape}, data plane is {dims[:2]}")
    observed = plane != 0
    return np.broadcast_to(
        observed.reshape(dims[:2] + (1,) * (len(dims) - 2)), dims
    ).copy()


def apply_mask(t: np.ndarray, mask: np.ndarray) -> np.ndarray:
    """Keep observed entries, zero the rest."""
    t = np.asarray(t)
    mask = np.asarray(mask, dtype=bool)
    if t.shape != mask.shape:
        raise ValueError(f"tensor dims {t.shape} != mask dims {mask.shape}")
    return np.where(mask, t, 0.0)
