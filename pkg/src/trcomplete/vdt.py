"""Visual-data tensorization: reversible patch-scale rearrangement.

A low-order visual tensor ``(m, n, p_1, ..., p_s)`` is turned into a
high-order one whose d-th mode ranges over an ``m_d x n_d`` patch of the
source plane: factor the two spatial dims, interleave row and column factors,
then merge each (row, column) pair.  Every step is a bijection, so the
inverse is exact and bitwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod

import numpy as np

from .tensor import permute, reshape

__all__ = ["VdtPlan", "vdt_forward", "vdt_inverse", "default_image_plan"]


@dataclass(frozen=True)
class VdtPlan:
    """Factorization of the two spatial dims plus optional mode bookkeeping.

    ``row_factors`` and ``col_factors`` must have equal length q and multiply
    to the source rows/cols.  ``trailing_dims``, when given, pins the expected
    non-spatial source dims (they pass through unchanged).  ``pre_permute`` is
    a 1-based permutation applied to the source before tensorization and
    undone last by the inverse.
    """

    row_factors: tuple[int, ...]
    col_factors: tuple[int, ...]
    trailing_dims: tuple[int, ...] | None = None
    pre_permute: tuple[int, ...] | None = None

    def __post_init__(self):
        if len(self.row_factors) != len(self.col_factors) or not self.row_factors:
            raise ValueError("row and column factor lists must be equal length, q >= 1")
        if any(f < 1 for f in self.row_factors + self.col_factors):
            raise ValueError("factors must be positive")

    @property
    def q(self) -> int:
        return len(self.row_factors)

    @property
    def paired_dims(self) -> tuple[int, ...]:
        return tuple(r * c for r, c in zip(self.row_factors, self.col_factors))

    def source_dims_after_permute(self, source_dims) -> tuple[int, ...]:
        """Validate ``source_dims`` against the plan; return them permuted."""
        dims = tuple(int(d) for d in source_dims)
        if self.pre_permute is not None:
            if sorted(self.pre_permute) != list(range(1, len(dims) + 1)):
                raise ValueError(f"pre_permute {self.pre_permute} is not a permutation")
            dims = tuple(dims[p - 1] for p in self.pre_permute)
        if len(dims) < 2:
            raise ValueError("source must have at least two (spatial) modes")
        if prod(self.row_factors) != dims[0]:
            raise ValueError(f"row factors {self.row_factors} do not multiply to {dims[0]}")
        if prod(self.col_factors) != dims[1]:
            raise ValueError(f"col factors {self.col_factors} do not multiply to {dims[1]}")
        if self.trailing_dims is not None and dims[2:] != tuple(self.trailing_dims):
            raise ValueError(f"trailing dims {dims[2:]} do not match plan {self.trailing_dims}")
        return dims

    def output_dims(self, source_dims) -> tuple[int, ...]:
        dims = self.source_dims_after_permute(source_dims)
        return self.paired_dims + dims[2:]


def _interleave_order(q: int, s: int) -> list[int]:
    # (r1..rq, c1..cq, rest) -> (r1, c1, r2, c2, ..., rq, cq, rest), 1-based
    order = []
    for d in range(1, q + 1):
        order += [d, q + d]
    return order + list(range(2 * q + 1, 2 * q + s + 1))


def vdt_forward(t: np.ndarray, plan: VdtPlan) -> np.ndarray:
    """Tensorize: output mode d ranges over an m_d x n_d patch of the plane."""
    t = np.asarray(t)
    dims = plan.source_dims_after_permute(t.shape)
    if plan.pre_permute is not None:
        t = permute(t, plan.pre_permute)
    rest = dims[2:]
    split = reshape(t, plan.row_factors + plan.col_factors + rest)
    paired = permute(split, _interleave_order(plan.q, len(rest)))
    return reshape(paired, plan.paired_dims + rest)


def vdt_inverse(t: np.ndarray, plan: VdtPlan) -> np.ndarray:
    """Exact inverse of :func:`vdt_forward` for the same plan."""
    t = np.asarray(t)
    if t.shape[: plan.q] != plan.paired_dims:
        raise ValueError(f"tensor dims {t.shape} do not start with {plan.paired_dims}")
    rest = t.shape[plan.q:]
    if plan.trailing_dims is not None and rest != tuple(plan.trailing_dims):
        raise ValueError(f"trailing dims {rest} do not match plan {plan.trailing_dims}")
    interleaved = tuple(
        f for pair in zip(plan.row_factors, plan.col_factors) for f in pair
    )
    paired = reshape(t, interleaved + rest)
    inverse_order = np.argsort([a - 1 for a in _interleave_order(plan.q, len(rest))]) + 1
    split = permute(paired, inverse_order)
    out = reshape(split, (prod(plan.row_factors), prod(plan.col_factors)) + rest)
    if plan.pre_permute is not None:
        out = permute(out, np.argsort([p - 1 for p in plan.pre_permute]) + 1)
    return out


def default_image_plan(dims) -> VdtPlan:
    """Bundled plan for 256x256 visual data: eight patch scales of size 4.

    Works for any trailing modes (RGB channels, spectral bands); the spatial
    dims must be 256x256.
    """
    dims = tuple(dims)
    if len(dims) < 2 or dims[0] != 256 or dims[1] != 256:
        raise ValueError(f"no bundled plan for dims {dims}; supply factors explicitly")
    return VdtPlan(row_factors=(2,) * 8, col_factors=(2,) * 8)
