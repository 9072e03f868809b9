"""Command-line front end: load -> mask -> tensorize -> solve -> score -> save.

The input image (or raw tensor file) is the ground truth; the job simulates
missing entries with the requested mask, recovers them, scores the result
against the original, and writes the recovered data plus a JSON quality
report and a CSV iteration trace.

Exit codes: 0 solver completed, 2 solver diverged, 3 I/O error,
4 invalid configuration.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from .masks import MaskSpec, apply_mask, generate_mask
from .metrics import quality_report
from .solver import CompletionProblem, SolverDivergence, solve, write_trace_csv
from .tensorfile import TensorFileError, load_tensor, save_tensor
from .vdt import VdtPlan, vdt_forward, vdt_inverse

__all__ = ["load_image", "save_image", "run_job", "main"]

EXIT_OK = 0
EXIT_DIVERGED = 2
EXIT_IO = 3
EXIT_CONFIG = 4


def load_image(path) -> np.ndarray:
    """Decode an 8-bit image as an (m, n, channels) tensor in [0, 255].

    Grayscale loads as m x n x 1; palette and RGBA inputs are converted to
    RGB.  Higher bit depths are rejected.
    """
    with Image.open(path) as img:
        if img.mode in ("P", "RGBA"):
            img = img.convert("RGB")
        if img.mode == "RGB":
            arr = np.asarray(img, dtype=np.float64)
        elif img.mode == "L":
            arr = np.asarray(img, dtype=np.float64)[:, :, None]
        else:
            raise ValueError(f"{path}: unsupported image mode {img.mode!r}")
    return arr


def save_image(path, t: np.ndarray) -> None:
    """Write an (m, n, 1|3) tensor as an 8-bit PNG, clipping to [0, 255]."""
    t = np.asarray(t)
    if t.ndim != 3 or t.shape[2] not in (1, 3):
        raise ValueError(f"cannot save dims {t.shape} as an image")
    pixels = np.clip(np.rint(t), 0, 255).astype(np.uint8)
    if pixels.shape[2] == 1:
        Image.fromarray(pixels[:, :, 0], mode="L").save(path)
    else:
        Image.fromarray(pixels, mode="RGB").save(path)


def _parse_factors(text: str) -> tuple[int, ...]:
    try:
        factors = tuple(int(p) for p in text.split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad factor list {text!r}; use e.g. 4x4x4x4")
    if not factors or any(f < 1 for f in factors):
        raise argparse.ArgumentTypeError(f"factors must be positive: {text!r}")
    return factors


def _parse_permutation(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(p) for p in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad permutation {text!r}; use e.g. 1,4,3,2")


_CONFIG_BOOL = {"true": True, "false": False, "1": True, "0": False,
                "yes": True, "no": False}


def read_config_file(path) -> dict:
    """Parse a key=value config file ('#' starts a comment)."""
    values: dict[str, str] = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, value = line.split("=", 1)
        values[key.strip().replace("-", "_")] = value.strip()
    return values


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="complete",
        description="Recover missing entries of images or dense tensors.",
    )
    p.add_argument("--config", help="key=value config file; flags override it")
    p.add_argument("--input", help="input image (.png/.jpg) or tensor (.tnsr)")
    p.add_argument("--out", help="recovered output path (.png or .tnsr)")
    p.add_argument("--report", help="JSON quality report path")
    p.add_argument("--trace", help="CSV iteration trace path")

    p.add_argument("--mask", default="random", choices=["random", "stripes", "external"])
    p.add_argument("--sr", type=float, default=0.3, help="sampling rate in (0, 1]")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--shared-spatial", action="store_true",
                   help="one spatial mask shared across channels")
    p.add_argument("--stripe-axis", type=int, default=2)
    p.add_argument("--stripe-period", type=int, default=2)
    p.add_argument("--stripe-width", type=int, default=1)
    p.add_argument("--mask-path", help="external mask image (0 = missing)")

    p.add_argument("--vdt-rows", type=_parse_factors,
                   help="row-dim factorization, e.g. 2x2x2x2x2x2x2x2")
    p.add_argument("--vdt-cols", type=_parse_factors)
    p.add_argument("--vdt-permute", type=_parse_permutation,
                   help="1-based mode permutation applied before tensorization")
    p.add_argument("--no-vdt", action="store_true",
                   help="solve on the raw tensor even when a bundled plan exists")

    p.add_argument("--penalty", default="logdet", choices=["logdet", "nuclear"])
    p.add_argument("--eps", type=float, default=1.0, help="logdet smoothing")
    p.add_argument("--eta0", type=float, default=1e-6, help="initial penalty")
    p.add_argument("--growth", type=float, default=1.1, help="penalty growth factor")
    p.add_argument("--max-iters", type=int, default=500)
    p.add_argument("--rel-tol", type=float, default=1e-4)
    return p


_CONFIG_TYPES = {
    "sr": float, "eps": float, "eta0": float, "growth": float, "rel_tol": float,
    "seed": int, "stripe_axis": int, "stripe_period": int, "stripe_width": int,
    "max_iters": int,
    "vdt_rows": _parse_factors, "vdt_cols": _parse_factors,
    "vdt_permute": _parse_permutation,
    "shared_spatial": lambda s: _CONFIG_BOOL[s.lower()],
    "no_vdt": lambda s: _CONFIG_BOOL[s.lower()],
}


def parse_args(argv=None) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        raw = read_config_file(args.config)
        defaults = {}
        for key, value in raw.items():
            defaults[key] = _CONFIG_TYPES.get(key, str)(value)
        parser.set_defaults(**defaults)
        args = parser.parse_args(argv)
    if not args.input or not args.out:
        parser.error("--input and --out are required (via flags or config)")
    return args


def _build_plan(args, dims) -> VdtPlan | None:
    if args.no_vdt:
        return None
    if args.vdt_rows or args.vdt_cols:
        if not (args.vdt_rows and args.vdt_cols):
            raise ValueError("--vdt-rows and --vdt-cols must be given together")
        return VdtPlan(
            row_factors=args.vdt_rows,
            col_factors=args.vdt_cols,
            pre_permute=args.vdt_permute,
        )
    lead = dims if args.vdt_permute is None else tuple(
        dims[p - 1] for p in args.vdt_permute
    )
    if len(lead) >= 2 and lead[0] == 256 and lead[1] == 256:
        return VdtPlan(row_factors=(2,) * 8, col_factors=(2,) * 8,
                       pre_permute=args.vdt_permute)
    return None


def run_job(args) -> int:
    """Execute one completion job; returns a process exit code."""
    input_path = Path(args.input)
    is_image = input_path.suffix.lower() != ".tnsr"
    try:
        data = load_image(input_path) if is_image else load_tensor(input_path)
    except (FileNotFoundError, UnidentifiedImageError, TensorFileError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO

    try:
        spec = MaskSpec(
            kind=args.mask,
            sr=args.sr,
            seed=args.seed,
            shared_spatial=args.shared_spatial,
            stripe_axis=args.stripe_axis,
            stripe_period=args.stripe_period,
            stripe_width=args.stripe_width,
            path=args.mask_path,
        )
        mask = generate_mask(data.shape, spec)
        observed = apply_mask(data, mask)
        plan = _build_plan(args, data.shape)
        problem = CompletionProblem(
            observed=vdt_forward(observed, plan) if plan else observed,
            mask=vdt_forward(mask, plan) if plan else mask,
            eta0=args.eta0,
            eta_growth=args.growth,
            epsilon=args.eps,
            max_iters=args.max_iters,
            rel_tol=args.rel_tol,
            penalty=args.penalty,
        )
    except (FileNotFoundError, UnidentifiedImageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        result = solve(problem)
    except SolverDivergence as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIVERGED

    recovered = vdt_inverse(result.x, plan) if plan else result.x
    report = quality_report(data, recovered)
    report.iterations = result.iterations
    report.final_residual = result.final_residual
    report.elapsed_ms = result.elapsed_ms
    report.converged = result.converged

    try:
        out_path = Path(args.out)
        if out_path.suffix.lower() == ".tnsr":
            save_tensor(out_path, recovered)
        else:
            save_image(out_path, recovered)
        if args.report:
            Path(args.report).write_text(json.dumps(report.to_dict(), indent=2) + "\n")
        if args.trace:
            write_trace_csv(args.trace, result.records)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO

    print(
        f"done: {result.iterations} iters, converged={result.converged}, "
        f"psnr={report.psnr_db:.2f} dB, ssim={report.ssim:.4f}"
    )
    return EXIT_OK


def main(argv=None) -> int:
    try:
        args = parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code not in (0, None) else 0
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return run_job(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
