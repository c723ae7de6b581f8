"""Hash/kernel checks, including numba-vs-numpy backend agreement."""

import importlib

import numpy as np
import pytest
from hypothesis import given, strategies as st

from demoselect import _hash, kernels

# Independent splitmix64 finalizer, written from the published constants.
M64 = (1 << 64) - 1


def reference_mix(z):
    z &= M64
    z ^= z >> 30
    z = (z * 0xBF58476D1CE4B5B9) & M64
    z ^= z >> 27
    z = (z * 0x94D049BB133111EB) & M64
    z ^= z >> 31
    return z


def reference_hash(seed, *words):
    h = reference_mix((seed + 0x9E3779B97F4A7C15) & M64)
    for w in words:
        h = reference_mix(((h ^ (w & M64)) + 0x9E3779B97F4A7C15) & M64)
    return h


@given(st.integers(min_value=0, max_value=M64))
def test_mix64_matches_published_splitmix_finalizer(z):
    assert _hash.mix64(z) == reference_mix(z)


@given(
    st.integers(min_value=0, max_value=M64),
    st.lists(st.integers(min_value=0, max_value=2**32), max_size=5),
)
def test_hash_words_matches_reference(seed, words):
    assert _hash.hash_words(seed, *words) == reference_hash(seed, *words)


@given(st.integers(min_value=0, max_value=M64))
def test_u01_in_unit_interval(h):
    v = _hash.u01(h)
    assert 0.0 <= v < 1.0


def test_shuffle_is_permutation_and_seeded():
    order = _hash.shuffled_indices(10, 7, _hash.TAG_SPLIT)
    assert sorted(order) == list(range(10))
    assert order == _hash.shuffled_indices(10, 7, _hash.TAG_SPLIT)
    assert order != _hash.shuffled_indices(10, 8, _hash.TAG_SPLIT)


def test_hash_matrix_matches_scalar_reference():
    mat = kernels.hash_matrix_u01(99, _hash.TAG_BASE, 5, 7)
    for i in range(5):
        for j in range(7):
            expected = reference_hash(99, _hash.TAG_BASE, i, j)
            assert mat[i, j] == (expected >> 11) * 2.0**-53


def _load_both_backends():
    np_mod = importlib.import_module("demoselect.kernels.numpy_backend")
    nb_mod = pytest.importorskip("demoselect.kernels.numba_backend")
    return np_mod, nb_mod


def test_batch_scores_backends_bit_identical():
    np_mod, nb_mod = _load_both_backends()
    rng = np.random.default_rng(5)
    A = rng.uniform(0.2, 0.6, size=(8, 20))
    B = rng.uniform(-1, 1, size=(8, 8))
    B = np.triu(B, 1) + np.triu(B, 1).T
    members = np.array([1, 3, 4, 7], dtype=np.int64)
    q_ids = np.arange(8, 20, dtype=np.int64)
    for lam, sigma, mean in [(0.0, 0.0, False), (0.5, 0.1, True), (2.0, 0.0, False)]:
        a = np_mod.batch_scores(A, B, members, q_ids, lam, sigma, mean, np.uint64(3))
        b = nb_mod.batch_scores(A, B, members, q_ids, lam, sigma, mean, np.uint64(3))
        assert a.tobytes() == b.tobytes()


def test_iou_counts_backends_agree():
    np_mod, nb_mod = _load_both_backends()
    rng = np.random.default_rng(6)
    a = rng.random(1000) > 0.5
    b = rng.random(1000) > 0.5
    assert np_mod.iou_counts(a, b) == nb_mod.iou_counts(a, b)


def test_sq_err_and_cosine_backends_close():
    np_mod, nb_mod = _load_both_backends()
    rng = np.random.default_rng(7)
    x = rng.random(500)
    y = rng.random(500)
    assert np_mod.sq_err_sum(x, y) == pytest.approx(nb_mod.sq_err_sum(x, y), rel=1e-12)
    mat = rng.random((6, 16))
    q = rng.random(16)
    np.testing.assert_allclose(
        np_mod.cosine_scores(mat, q), nb_mod.cosine_scores(mat, q), rtol=1e-12
    )


def test_backend_selected_is_reported():
    assert kernels.BACKEND in ("numba", "numpy")
