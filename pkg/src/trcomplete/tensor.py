"""Dense tensor algebra: matricizations, their inverses, and ring synthesis.

Tensors are plain ``numpy.ndarray`` objects (float64 for numeric work).  The
semantic model is 1-based multi-indices ``(i_1, ..., i_j)`` with the *first*
index fastest in the linearization, so every index map below is realized with
Fortran-order reshapes; nothing depends on the memory layout of the input
array.  Mode arguments (``n``, ``l``, permutations) are 1-based throughout,
matching the matricization formulas they implement.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod

import numpy as np

__all__ = [
    "UnfoldSpec",
    "tensor_from_flat",
    "tensor_to_flat",
    "permute",
    "reshape",
    "unfold_mode",
    "matricize_canonical",
    "unfold_circular",
    "mode_spec",
    "canonical_spec",
    "circular_spec",
    "unfold",
    "fold",
    "tr_synthesize",
]


def tensor_from_flat(values, dims) -> np.ndarray:
    """Build a tensor from values listed in semantic index order (i_1 fastest)."""
    values = np.asarray(values, dtype=np.float64)
    if values.size != prod(dims):
        raise ValueError(f"{values.size} values cannot fill dims {tuple(dims)}")
    return values.reshape(tuple(dims), order="F")


def tensor_to_flat(t: np.ndarray) -> np.ndarray:
    """Flatten a tensor in semantic index order (i_1 fastest)."""
    return np.asarray(t).ravel(order="F")


def permute(t: np.ndarray, order) -> np.ndarray:
    """Reorder tensor modes by a 1-based permutation of ``1..j``."""
    t = np.asarray(t)
    order = tuple(int(p) for p in order)
    if sorted(order) != list(range(1, t.ndim + 1)):
        raise ValueError(f"{order} is not a permutation of 1..{t.ndim}")
    return np.transpose(t, axes=[p - 1 for p in order])


def reshape(t: np.ndarray, new_dims) -> np.ndarray:
    """Reinterpret the semantic linearization under new dims (total size fixed)."""
    t = np.asarray(t)
    new_dims = tuple(int(d) for d in new_dims)
    if prod(new_dims) != t.size:
        raise ValueError(f"cannot reshape size {t.size} into dims {new_dims}")
    return t.reshape(new_dims, order="F")


def _cyclic_modes(j: int, start: int, count: int) -> list[int]:
    """1-based modes ``start, start+1, ...`` (count of them), wrapped into 1..j."""
    return [(start - 1 + k) % j + 1 for k in range(count)]


@dataclass(frozen=True)
class UnfoldSpec:
    """Description of one matricization, sufficient to invert it.

    ``kind`` is ``"mode"`` (row mode n, remaining modes in natural order),
    ``"canonical"`` (split after the first n modes), or ``"circular"``
    (rotate mode l to the front, then split after n modes, cyclically).
    """

    kind: str
    n: int
    source_dims: tuple[int, ...]
    l: int = 1

    def __post_init__(self):
        j = len(self.source_dims)
        if j < 1 or any(d < 1 for d in self.source_dims):
            raise ValueError(f"invalid source dims {self.source_dims}")
        if self.kind == "mode":
            if not 1 <= self.n <= j:
                raise ValueError(f"mode index {self.n} out of range for order {j}")
        elif self.kind == "canonical":
            if not 1 <= self.n <= j - 1:
                raise ValueError(f"canonical split {self.n} out of range for order {j}")
        elif self.kind == "circular":
            if not 1 <= self.n <= j:
                raise ValueError(f"row mode count {self.n} out of range for order {j}")
            if not 1 <= self.l <= j:
                raise ValueError(f"start mode {self.l} out of range for order {j}")
        else:
            raise ValueError(f"unknown unfolding kind {self.kind!r}")

    @property
    def order(self) -> int:
        return len(self.source_dims)

    @property
    def row_modes(self) -> list[int]:
        """1-based source modes mapped to the matrix rows, fastest first."""
        if self.kind == "mode":
            return [self.n]
        if self.kind == "canonical":
            return list(range(1, self.n + 1))
        return _cyclic_modes(self.order, self.l, self.n)

    @property
    def col_modes(self) -> list[int]:
        """1-based source modes mapped to the matrix columns, fastest first."""
        if self.kind == "mode":
            return [d for d in range(1, self.order + 1) if d != self.n]
        if self.kind == "canonical":
            return list(range(self.n + 1, self.order + 1))
        return _cyclic_modes(self.order, self.l + self.n, self.order - self.n)

    @property
    def matrix_shape(self) -> tuple[int, int]:
        dims = self.source_dims
        rows = prod(dims[d - 1] for d in self.row_modes)
        cols = prod(dims[d - 1] for d in self.col_modes)
        return rows, cols


def mode_spec(dims, n: int) -> UnfoldSpec:
    return UnfoldSpec("mode", n, tuple(int(d) for d in dims))


def canonical_spec(dims, n: int) -> UnfoldSpec:
    return UnfoldSpec("canonical", n, tuple(int(d) for d in dims))


def circular_spec(dims, n: int, l: int) -> UnfoldSpec:
    return UnfoldSpec("circular", n, tuple(int(d) for d in dims), l=l)


def unfold(t: np.ndarray, spec: UnfoldSpec) -> np.ndarray:
    """Matricize ``t`` according to ``spec``."""
    t = np.asarray(t)
    if t.shape != spec.source_dims:
        raise ValueError(f"tensor dims {t.shape} do not match spec {spec.source_dims}")
    axes = [d - 1 for d in spec.row_modes + spec.col_modes]
    return np.transpose(t, axes).reshape(spec.matrix_shape, order="F")


def fold(m: np.ndarray, spec: UnfoldSpec) -> np.ndarray:
    """Invert the matricization described by ``spec`` (exact bijection)."""
    m = np.asarray(m)
    if m.shape != spec.matrix_shape:
        raise ValueError(f"matrix shape {m.shape} does not match spec {spec.matrix_shape}")
    modes = spec.row_modes + spec.col_modes
    permuted_dims = tuple(spec.source_dims[d - 1] for d in modes)
    t = m.reshape(permuted_dims, order="F")
    inverse = np.argsort([d - 1 for d in modes])
    return np.transpose(t, inverse)


def unfold_mode(t: np.ndarray, n: int) -> np.ndarray:
    """Mode-n unfolding: rows indexed by i_n, columns by the remaining
    indices in natural order with the lowest index fastest."""
    return unfold(t, mode_spec(np.shape(t), n))


def matricize_canonical(t: np.ndarray, n: int) -> np.ndarray:
    """Canonical matricization: first n indices to rows, the rest to columns."""
    return unfold(t, canonical_spec(np.shape(t), n))


def unfold_circular(t: np.ndarray, n: int, l: int) -> np.ndarray:
    """Circular unfolding: rotate modes so l leads, then split after n modes.

    Equals the canonical matricization at split n of the tensor permuted by
    ``[l, ..., j, 1, ..., l-1]``; mode subscripts wrap modulo the order.
    """
    return unfold(t, circular_spec(np.shape(t), n, l))


def tr_synthesize(cores) -> np.ndarray:
    """Contract a cyclic chain of third-order cores into a dense tensor.

    ``cores[h]`` has shape ``(r_h, m_h, r_{h+1})`` with the last bond wrapping
    back to the first.  Entry ``(i_1, ..., i_j)`` of the result is the trace of
    the product of the lateral slices ``cores[0][:, i_1, :] @ ... ``.  Every
    circular unfolding of the result has rank at most the product of the two
    bond dimensions it cuts.
    """
    cores = [np.asarray(c, dtype=np.float64) for c in cores]
    if not cores:
        raise ValueError("need at least one core")
    for c in cores:
        if c.ndim != 3:
            raise ValueError(f"cores must be third-order, got shape {c.shape}")
    for h, (a, b) in enumerate(zip(cores, cores[1:] + cores[:1])):
        if a.shape[2] != b.shape[0]:
            raise ValueError(
                f"bond mismatch between cores {h + 1} and {(h + 1) % len(cores) + 1}: "
                f"{a.shape[2]} vs {b.shape[0]}"
            )
    chain = cores[0]
    for core in cores[1:]:
        chain = np.einsum("a...b,bic->a...ic", chain, core)
    return np.einsum("a...a->...", chain)
