"""Matricization index maps against brute-force oracles, fold/unfold
bijectivity, and ring synthesis."""

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from trcomplete.tensor import (
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

# ---------------------------------------------------------------- oracles
# Literal transcriptions of the 1-based index maps, element by element.


def oracle_mode(t, n):
    dims = t.shape
    j = len(dims)
    cols = 1
    for d in range(1, j + 1):
        if d != n:
            cols *= dims[d - 1]
    m = np.zeros((dims[n - 1], cols))
    for idx in itertools.product(*(range(1, d + 1) for d in dims)):
        b = 1
        for d in range(1, j + 1):
            if d == n:
                continue
            jd = 1
            for t_ in range(1, d):
                if t_ != n:
                    jd *= dims[t_ - 1]
            b += (idx[d - 1] - 1) * jd
        m[idx[n - 1] - 1, b - 1] = t[tuple(i - 1 for i in idx)]
    return m


def oracle_canonical(t, n):
    dims = t.shape
    j = len(dims)
    rows = int(np.prod(dims[:n]))
    cols = int(np.prod(dims[n:]))
    m = np.zeros((rows, cols))
    for idx in itertools.product(*(range(1, d + 1) for d in dims)):
        a, stride = 1, 1
        for d in range(1, n + 1):
            a += (idx[d - 1] - 1) * stride
            stride *= dims[d - 1]
        b, stride = 1, 1
        for d in range(n + 1, j + 1):
            b += (idx[d - 1] - 1) * stride
            stride *= dims[d - 1]
        m[a - 1, b - 1] = t[tuple(i - 1 for i in idx)]
    return m


def oracle_circular(t, n, l):
    dims = t.shape
    j = len(dims)
    row_modes = [(l - 1 + k) % j + 1 for k in range(n)]
    col_modes = [(l - 1 + n + k) % j + 1 for k in range(j - n)]
    rows = int(np.prod([dims[d - 1] for d in row_modes])) if row_modes else 1
    cols = int(np.prod([dims[d - 1] for d in col_modes])) if col_modes else 1
    m = np.zeros((rows, cols))
    for idx in itertools.product(*(range(1, d + 1) for d in dims)):
        a, stride = 1, 1
        for d in row_modes:
            a += (idx[d - 1] - 1) * stride
            stride *= dims[d - 1]
        b, stride = 1, 1
        for d in col_modes:
            b += (idx[d - 1] - 1) * stride
            stride *= dims[d - 1]
        m[a - 1, b - 1] = t[tuple(i - 1 for i in idx)]
    return m


def ramp(dims):
    return tensor_from_flat(np.arange(1.0, np.prod(dims) + 1.0), dims)


# ------------------------------------------------------------- mode-n


def test_mode1_of_matrix_is_identity():
    m = np.array([[1.0, 2.0], [3.0, 4.0]])
    assert np.array_equal(unfold_mode(m, 1), m)


def test_mode2_ramp_234_matches_oracle():
    t = ramp((2, 3, 4))
    got = unfold_mode(t, 2)
    assert got.shape == (3, 8)
    assert np.array_equal(got, oracle_mode(t, 2))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_mode_roundtrip_random(rng, n):
    t = rng.standard_normal((3, 2, 4, 2))
    spec = mode_spec(t.shape, n)
    assert np.array_equal(fold(unfold(t, spec), spec), t)


def test_mode_out_of_range():
    t = ramp((2, 3))
    with pytest.raises(ValueError):
        unfold_mode(t, 3)
    with pytest.raises(ValueError):
        unfold_mode(t, 0)


# ------------------------------------------------------------- canonical


def test_canonical_234_split2_matches_oracle():
    t = ramp((2, 3, 4))
    got = matricize_canonical(t, 2)
    assert got.shape == (6, 4)
    assert np.array_equal(got, oracle_canonical(t, 2))


def test_canonical_order2_split1_is_matrix():
    m = ramp((3, 5))
    assert np.array_equal(matricize_canonical(m, 1), m)


def test_canonical_shapes():
    t = ramp((2, 3, 4))
    assert matricize_canonical(t, 2).shape == (6, 4)
    assert matricize_canonical(t, 1).shape == (2, 12)


def test_canonical_out_of_range():
    t = ramp((2, 3, 4))
    with pytest.raises(ValueError):
        matricize_canonical(t, 3)


# ------------------------------------------------------------- circular


def test_circular_l1_equals_canonical():
    t = ramp((2, 3, 4))
    for n in (1, 2):
        assert np.array_equal(unfold_circular(t, n, 1), matricize_canonical(t, n))


def test_circular_234_n1_l2_matches_permute_reshape_oracle():
    t = ramp((2, 3, 4))
    got = unfold_circular(t, 1, 2)
    assert got.shape == (3, 8)
    assert np.array_equal(got, oracle_canonical(permute(t, (2, 3, 1)), 1))
    assert np.array_equal(got, oracle_circular(t, 1, 2))


def test_circular_all_nl_match_oracle(rng):
    t = rng.standard_normal((2, 3, 2, 4))
    for n in range(1, 5):
        for l in range(1, 5):
            assert np.array_equal(unfold_circular(t, n, l), oracle_circular(t, n, l))


def test_circular_roundtrip_2222(rng):
    t = rng.standard_normal((2, 2, 2, 2))
    for n in range(1, 5):
        for l in range(1, 5):
            spec = circular_spec(t.shape, n, l)
            assert np.array_equal(fold(unfold(t, spec), spec), t)


def test_circular_out_of_range():
    t = ramp((2, 3, 4))
    with pytest.raises(ValueError):
        unfold_circular(t, 4, 1)
    with pytest.raises(ValueError):
        unfold_circular(t, 1, 0)


# ------------------------------------------------------------- fold


def test_fold_zero_matrix():
    spec = circular_spec((2, 3, 4), 2, 2)
    t = fold(np.zeros(spec.matrix_shape), spec)
    assert t.shape == (2, 3, 4)
    assert not t.any()


def test_fold_ramp_canonical_matches_oracle():
    spec = canonical_spec((2, 3, 4), 2)
    m = np.arange(1.0, 25.0).reshape(6, 4)
    t = fold(m, spec)
    assert np.array_equal(oracle_canonical(t, 2), m)


def test_fold_shape_mismatch():
    spec = canonical_spec((2, 3, 4), 2)
    with pytest.raises(ValueError):
        fold(np.zeros((4, 6)), spec)


def test_unfold_of_fold_is_identity(rng):
    spec = circular_spec((3, 2, 4), 2, 3)
    m = rng.standard_normal(spec.matrix_shape)
    assert np.array_equal(unfold(fold(m, spec), spec), m)


@st.composite
def shapes(draw, max_order=5, max_dim=4):
    order = draw(st.integers(1, max_order))
    return tuple(draw(st.integers(1, max_dim)) for _ in range(order))


@settings(max_examples=60, deadline=None)
@given(shapes(), st.data())
def test_bijectivity_property(dims, data):
    j = len(dims)
    t = ramp(dims)
    kind = data.draw(st.sampled_from(["mode", "canonical", "circular"]))
    if kind == "canonical" and j == 1:
        return
    if kind == "mode":
        spec = mode_spec(dims, data.draw(st.integers(1, j)))
    elif kind == "canonical":
        spec = canonical_spec(dims, data.draw(st.integers(1, j - 1)))
    else:
        spec = circular_spec(dims, data.draw(st.integers(1, j)), data.draw(st.integers(1, j)))
    m = unfold(t, spec)
    assert np.array_equal(fold(m, spec), t)
    assert np.array_equal(unfold(fold(m, spec), spec), m)


@settings(max_examples=40, deadline=None)
@given(shapes(max_order=4), st.data())
def test_unfolding_preserves_frobenius_norm(dims, data):
    t = np.sin(np.arange(np.prod(dims), dtype=np.float64)).reshape(dims, order="F")
    n = data.draw(st.integers(1, len(dims)))
    l = data.draw(st.integers(1, len(dims)))
    m = unfold_circular(t, n, l)
    assert np.isclose(np.linalg.norm(m), np.linalg.norm(t), rtol=0, atol=1e-12)


# ------------------------------------------------------------- permute / reshape


def test_permute_identity_and_involution(rng):
    t = rng.standard_normal((2, 3, 4))
    assert np.array_equal(permute(t, (1, 2, 3)), t)
    assert np.array_equal(permute(permute(t, (2, 1, 3)), (2, 1, 3)), t)


def test_permute_312_matches_index_oracle():
    t = ramp((2, 3, 4))
    p = permute(t, (3, 1, 2))
    assert p.shape == (4, 2, 3)
    for i, k, m in itertools.product(range(2), range(3), range(4)):
        assert p[m, i, k] == t[i, k, m]


def test_permute_rejects_non_permutation():
    with pytest.raises(ValueError):
        permute(ramp((2, 3)), (1, 1))


def test_reshape_identity_and_roundtrip():
    t = ramp((2, 12))
    assert np.array_equal(reshape(t, (2, 12)), t)
    assert np.array_equal(reshape(reshape(t, (2, 3, 4)), (2, 12)), t)


def test_reshape_consistent_with_canonical_fold():
    t = ramp((6, 4))
    via_reshape = reshape(t, (2, 3, 4))
    via_fold = fold(t, canonical_spec((2, 3, 4), 2))
    assert np.array_equal(via_reshape, via_fold)


def test_reshape_rejects_size_mismatch():
    with pytest.raises(ValueError):
        reshape(ramp((2, 3)), (4, 2))


def test_flat_roundtrip():
    t = ramp((3, 2, 2))
    assert np.array_equal(tensor_from_flat(tensor_to_flat(t), t.shape), t)


# ------------------------------------------------------------- ring synthesis


def test_tr_synthesize_all_ones_rank1():
    cores = [np.ones((1, 3, 1)) for _ in range(3)]
    assert np.array_equal(tr_synthesize(cores), np.ones((3, 3, 3)))


def test_tr_synthesize_matches_trace_oracle(rng):
    cores = [rng.standard_normal((2, 3, 2)) for _ in range(3)]
    x = tr_synthesize(cores)
    assert x.shape == (3, 3, 3)
    for idx in itertools.product(range(3), repeat=3):
        m = cores[0][:, idx[0], :] @ cores[1][:, idx[1], :] @ cores[2][:, idx[2], :]
        assert x[idx] == pytest.approx(np.trace(m), abs=1e-12)
    # spot check the spec'd element (1,2,3) in 1-based indexing
    m = cores[0][:, 0, :] @ cores[1][:, 1, :] @ cores[2][:, 2, :]
    assert x[0, 1, 2] == pytest.approx(np.trace(m), abs=1e-12)


def test_tr_rank_bound_4444(rng):
    cores = [rng.standard_normal((2, 4, 2)) for _ in range(4)]
    x = tr_synthesize(cores)
    for l in range(1, 5):
        s = np.linalg.svd(unfold_circular(x, 2, l), compute_uv=False)
        assert s[4] <= 1e-10 * s[0]


def test_tr_rank_bound_all_circular_unfoldings(rng):
    ranks = (2, 3, 2, 2)
    dims = (4, 4, 4, 4)
    cores = [
        rng.standard_normal((ranks[(h - 1) % 4], dims[h - 1], ranks[h % 4]))
        for h in range(1, 5)
    ]
    x = tr_synthesize(cores)
    # ranks[k] holds r_k with r_0 = r_4 first; cutting the ring around row
    # modes l..l+n-1 crosses bonds r_{l-1} and r_{l+n-1}
    for n in range(1, 5):
        for l in range(1, 5):
            bound = ranks[(l - 1) % 4] * ranks[(l + n - 1) % 4]
            s = np.linalg.svd(unfold_circular(x, n, l), compute_uv=False)
            if bound < len(s):
                assert s[bound] <= 1e-8 * s[0]


def test_tr_synthesize_rejects_bond_mismatch(rng):
    cores = [rng.standard_normal((2, 3, 2)), rng.standard_normal((3, 3, 2))]
    with pytest.raises(ValueError):
        tr_synthesize(cores)
