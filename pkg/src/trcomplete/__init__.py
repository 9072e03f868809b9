"""Tensor completion via circular unfoldings with a logdet singular-value
penalty, plus the nuclear-norm baseline, exact matricization algebra,
visual-data tensorization, and image-quality scoring."""

from .masks import MaskSpec, apply_mask, generate_mask
from .metrics import QualityReport, psnr, quality_report, ssim
from .shrinkage import logdet_matrix_prox, logdet_shrink, logtr_value, nuclear_prox
from .solver import (
    CompletionProblem,
    IterationRecord,
    SolveResult,
    SolverDivergence,
    default_weights,
    solve,
    write_trace_csv,
)
from .tensor import (
    UnfoldSpec,
    canonical_spec,
    circular_spec,
    fold,
    matricize_canonical,
    mode_spec,
    permute,
    reshape,
    tensor_from_flat,
    tensor_to_flat,
    tr_synthesize,
    unfold,
    unfold_circular,
    unfold_mode,
)
from .tensorfile import TensorFileError, load_tensor, save_tensor
from .vdt import VdtPlan, default_image_plan, vdt_forward, vdt_inverse

__version__ = "0.1.0"

__all__ = [
    "MaskSpec", "apply_mask", "generate_mask",
    "QualityReport", "psnr", "quality_report", "ssim",
    "logdet_matrix_prox", "logdet_shrink", "logtr_value", "nuclear_prox",
    "CompletionProblem", "IterationRecord", "SolveResult", "SolverDivergence",
    "default_weights", "solve", "write_trace_csv",
    "UnfoldSpec", "canonical_spec", "circular_spec", "fold",
    "matricize_canonical", "mode_spec", "permute", "reshape",
    "tensor_from_flat", "tensor_to_flat", "tr_synthesize",
    "unfold", "unfold_circular", "unfold_mode",
    "TensorFileError", "load_tensor", "save_tensor",
    "VdtPlan", "default_image_plan", "vdt_forward", "vdt_inverse",
]
