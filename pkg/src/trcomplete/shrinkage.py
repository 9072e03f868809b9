"""Singular-value shrinkage operators.

``logdet_shrink`` is the closed-form scalar minimizer rule for

    min_{t >= 0}  lam * log(t + eps) + (t - |x|)^2 / 2

applied with the sign of x restored: with c1 = |x| - eps and
c2 = c1^2 - 4*(lam - eps*|x|), the output is 0 when c2 <= 0 and otherwise
sign(x) * (c1 + sqrt(c2)) / 2.  The rule keeps large inputs nearly intact and
drives small ones to zero (the shrinkage amount grows as the input gets
smaller).  Two boundary details are pinned here:

* a positive-branch candidate that lands below zero is clamped to 0 (the
  domain is nonnegative singular values);
* the c2 sign test is followed as stated even in the small region where the
  objective value at 0 beats the interior root, so the operator is the
  published rule, not a full argmin.  ``logdet_shrink_is_branch_ambiguous``
  identifies that region for callers that want to flag it.
"""

from __future__ import annotations

import numpy as np

from .tensor import circular_spec, unfold

__all__ = [
    "logdet_shrink",
    "logdet_shrink_is_branch_ambiguous",
    "logdet_matrix_prox",
    "nuclear_prox",
    "logtr_value",
]


def _check_params(lam: float, eps: float):
    if lam < 0:
        raise ValueError(f"shrink weight must be nonnegative, got {lam}")
    if eps <= 0:
        raise ValueError(f"smoothing eps must be positive, got {eps}")


def logdet_shrink(x, lam: float, eps: float):
    """Closed-form logdet shrinkage of ``x`` (scalar or array, elementwise)."""
    _check_params(lam, eps)
    x = np.asarray(x, dtype=np.float64)
    ax = np.abs(x)
    c1 = ax - eps
    c2 = c1 * c1 - 4.0 * (lam - eps * ax)
    root = 0.5 * (c1 + np.sqrt(np.maximum(c2, 0.0)))
    out = np.where(c2 > 0.0, np.sign(x) * np.maximum(root, 0.0), 0.0)
    if out.ndim == 0:
        return float(out)
    return out


def logdet_shrink_is_branch_ambiguous(x, lam: float, eps: float):
    """True where the c2 rule keeps an interior root whose objective does not
    beat the boundary value at 0 (the documented deviation from a full argmin)."""
    _check_params(lam, eps)
    x = np.asarray(x, dtype=np.float64)
    ax = np.abs(x)
    c1 = ax - eps
    c2 = c1 * c1 - 4.0 * (lam - eps * ax)
    root = 0.5 * (c1 + np.sqrt(np.maximum(c2, 0.0)))
    with np.errstate(divide="ignore"):
        f_root = lam * np.log(root + eps) + 0.5 * (root - ax) ** 2
    f_zero = lam * np.log(eps) + 0.5 * ax * ax
    return (c2 > 0.0) & (root > 0.0) & (f_zero <= f_root)


def logdet_matrix_prox(y: np.ndarray, lam: float, eps: float) -> np.ndarray:
    """Apply :func:`logdet_shrink` to the singular values of ``y``.

    Thin SVD on the smaller dimension; all singular values are shrunk, large
    ones proportionally less than small ones.
    """
    y = np.asarray(y, dtype=np.float64)
    if not np.all(np.isfinite(y)):
        raise ValueError("matrix has non-finite entries")
    u, s, vt = np.linalg.svd(y, full_matrices=False)
    return (u * logdet_shrink(s, lam, eps)) @ vt


def nuclear_prox(y: np.ndarray, tau: float) -> np.ndarray:
    """Soft-threshold the singular values of ``y`` by ``tau``."""
    if tau < 0:
        raise ValueError(f"threshold must be nonnegative, got {tau}")
    y = np.asarray(y, dtype=np.float64)
    if not np.all(np.isfinite(y)):
        raise ValueError("matrix has non-finite entries")
    u, s, vt = np.linalg.svd(y, full_matrices=False)
    return (u * np.maximum(s - tau, 0.0)) @ vt


def logtr_value(t: np.ndarray, weights, eps: float) -> float:
    """Weighted sum of log(sigma + eps) over the first ceil(j/2) circular
    unfoldings anchored at l = ceil(j/2).  Diagnostic objective value."""
    t = np.asarray(t, dtype=np.float64)
    j = t.ndim
    half = (j + 1) // 2
    weights = list(weights)
    if len(weights) != half:
        raise ValueError(f"expected {half} weights for order {j}, got {len(weights)}")
    if any(w < 0 for w in weights):
        raise ValueError("weights must be nonnegative")
    if eps <= 0:
        raise ValueError(f"smoothing eps must be positive, got {eps}")
    total = 0.0
    for n in range(1, half + 1):
        s = np.linalg.svd(unfold(t, circular_spec(t.shape, n, half)), compute_uv=False)
        total += weights[n - 1] * float(np.sum(np.log(s + eps)))
    return total
