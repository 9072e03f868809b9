"""Image-quality scoring: PSNR and single-window SSIM.

SSIM here is the global-statistics form: one mean/variance/covariance over
the whole plane, not the common sliding-window variant, so values can differ
from windowed implementations.  Identical planes give PSNR = +inf; infinite
plane values are excluded from report averages with a warning.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from itertools import product

import numpy as np

__all__ = ["psnr", "ssim", "QualityReport", "quality_report", "DEFAULT_C1", "DEFAULT_C2"]

DEFAULT_MAX = 255.0
DEFAULT_C1 = (0.01 * 255.0) ** 2
DEFAULT_C2 = (0.03 * 255.0) ** 2


def _check_pair(reference, estimate):
    reference = np.asarray(reference, dtype=np.float64)
    estimate = np.asarray(estimate, dtype=np.float64)
    if reference.shape != estimate.shape:
        raise ValueError(f"shape mismatch: {reference.shape} vs {estimate.shape}")
    return reference, estimate


def psnr(reference, estimate, max_val: float = DEFAULT_MAX) -> float:
    """Peak signal-to-noise ratio in dB; +inf for identical planes."""
    reference, estimate = _check_pair(reference, estimate)
    if max_val <= 0:
        raise ValueError(f"peak value must be positive, got {max_val}")
    mse = float(np.mean((reference - estimate) ** 2))
    if mse == 0.0:
        return float("inf")
    return 10.0 * np.log10(max_val * max_val / mse)


def ssim(reference, estimate, c1: float = DEFAULT_C1, c2: float = DEFAULT_C2) -> float:
    """Global-statistics structural similarity of two grayscale planes.

    Means, variances, and covariance are taken over the whole plane (sample
    normalization, N-1); c1 and c2 must be positive stabilizers.
    """
    reference, estimate = _check_pair(reference, estimate)
    if c1 <= 0 or c2 <= 0:
        raise ValueError("c1 and c2 must be positive")
    f = reference.ravel()
    g = estimate.ravel()
    mu_f, mu_g = f.mean(), g.mean()
    ddof = 1 if f.size > 1 else 0
    var_f = f.var(ddof=ddof)
    var_g = g.var(ddof=ddof)
    cov = float(((f - mu_f) @ (g - mu_g)) / max(f.size - 1, 1))
    num = (2.0 * mu_f * mu_g + c1) * (2.0 * cov + c2)
    den = (mu_f * mu_f + mu_g * mu_g + c1) * (var_f + var_g + c2)
    return float(num / den)


@dataclass
class QualityReport:
    """Per-plane PSNR/SSIM plus their averages and solver bookkeeping."""

    psnr_db: float
    ssim: float
    per_plane_psnr_db: list[float] = field(default_factory=list)
    per_plane_ssim: list[float] = field(default_factory=list)
    iterations: int = 0
    final_residual: float = float("nan")
    elapsed_ms: float = 0.0
    converged: bool = True

    def to_dict(self) -> dict:
        def jsonable(v: float):
            # +inf is the identical-planes sentinel; keep JSON strict
            return v if np.isfinite(v) else "inf"

        return {
            "psnr_db": jsonable(self.psnr_db),
            "ssim": self.ssim,
            "per_plane_psnr_db": [jsonable(p) for p in self.per_plane_psnr_db],
            "per_plane_ssim": self.per_plane_ssim,
            "iters": self.iterations,
            "final_residual": self.final_residual,
            "elapsed_ms": self.elapsed_ms,
            "converged": self.converged,
        }


def quality_report(reference, estimate, max_val: float = DEFAULT_MAX) -> QualityReport:
    """Score ``estimate`` against ``reference`` plane by plane and average.

    The first two modes are the image plane; every combination of the
    remaining modes (channels, bands, frames) is scored separately, and the
    report carries the plain averages.  Planes with infinite PSNR are left
    out of the PSNR average (with a warning) unless all planes are infinite.
    """
    reference, estimate = _check_pair(reference, estimate)
    if reference.ndim < 2:
        raise ValueError("need at least two spatial modes")
    trailing = reference.shape[2:]
    psnrs: list[float] = []
    ssims: list[float] = []
    for idx in product(*(range(d) for d in trailing)):
        sel = (slice(None), slice(None)) + idx
        psnrs.append(psnr(reference[sel], estimate[sel], max_val))
        ssims.append(ssim(reference[sel], estimate[sel]))
    finite = [p for p in psnrs if np.isfinite(p)]
    if not finite:
        mean_psnr = float("inf")
    else:
        if len(finite) < len(psnrs):
            warnings.warn(
                f"{len(psnrs) - len(finite)} identical plane(s) excluded from PSNR average",
                stacklevel=2,
            )
        mean_psnr = float(np.mean(finite))
    return QualityReport(
        psnr_db=mean_psnr,
        ssim=float(np.mean(ssims)),
        per_plane_psnr_db=psnrs,
        per_plane_ssim=ssims,
    )
