"""Numba-jitted kernel implementations (default backend when available)."""

import numpy as np
from numba import njit

from .._hash import GOLDEN, MIX_C1, MIX_C2, TAG_NOISE

_U_GOLDEN = np.uint64(GOLDEN)
_U_C1 = np.uint64(MIX_C1)
_U_C2 = np.uint64(MIX_C2)
_U30 = np.uint64(30)
_U27 = np.uint64(27)
_U31 = np.uint64(31)
_U11 = np.uint64(11)
_U_TAG_NOISE = np.uint64(TAG_NOISE)
_TWO_NEG53 = 2.0**-53


@njit(cache=True)
def _mix64(z):
    z = (z ^ (z >> _U30)) * _U_C1
    z = (z ^ (z >> _U27)) * _U_C2
    return z ^ (z >> _U31)


@njit(cache=True)
def _fold(h, w):
    return _mix64((h ^ w) + _U_GOLDEN)


@njit(cache=True)
def _noise(seed, q, members):
    h = _mix64(seed + _U_GOLDEN)
    h = _fold(h, _U_TAG_NOISE)
    h = _fold(h, np.uint64(q))
    for a in range(members.shape[0]):
        h = _fold(h, np.uint64(members[a]))
    return -1.0 + 2.0 * ((h >> _U11) * _TWO_NEG53)


@njit(cache=True)
def _batch_scores(A, B, members, q_ids, lam, sigma, agg_mean, seed):
    m = members.shape[0]
    nq = q_ids.shape[0]
    out = np.empty(nq, dtype=np.float64)
    pair_term = 0.0
    if lam != 0.0 and m >= 2:
        pair_sum = 0.0
        for a in range(m):
            for b in range(a + 1, m):
                pair_sum += B[members[a], members[b]]
        pair_term = lam * (pair_sum / (m * (m - 1) / 2))
    for t in range(nq):
        qcol = q_ids[t]
        s = 0.0
        for a in range(m):
            s += A[members[a], qcol]
        if agg_mean:
            s /= m
        if lam != 0.0 and m >= 2:
            s += pair_term
        if sigma != 0.0:
            s += sigma * _noise(seed, q_ids[t], members)
        out[t] = s
    return out


def batch_scores(A, B, members, q_ids, lam, sigma, agg_mean, seed):
    """Synthetic-landscape utilities of one demo set on many queries.

    A is indexed [member, query id]; query ids double as column indices.
    """
    return _batch_scores(
        A,
        B,
        np.asarray(members, dtype=np.int64),
        np.asarray(q_ids, dtype=np.int64),
        float(lam),
        float(sigma),
        bool(agg_mean),
        np.uint64(seed),
    )


@njit(cache=True)
def _iou_counts(pred, truth):
    inter = 0
    union = 0
    for i in range(pred.shape[0]):
        p = pred[i]
        t = truth[i]
        if p and t:
            inter += 1
        if p or t:
            union += 1
    return inter, union


def iou_counts(pred, truth):
    """(intersection, union) pixel counts of two flat boolean arrays."""
    inter, union = _iou_counts(pred, truth)
    return int(inter), int(union)


@njit(cache=True)
def _sq_err_sum(a, b):
    total = 0.0
    for i in range(a.shape[0]):
        d = a[i] - b[i]
        total += d * d
    return total


def sq_err_sum(a, b):
    """Sum of squared differences of two flat float arrays."""
    return float(_sq_err_sum(a, b))


@njit(cache=True)
def cosine_scores(mat, query):
    """Cosine similarity of each row of mat against the query vector."""
    n, d = mat.shape
    qn = 0.0
    for j in range(d):
        qn += query[j] * query[j]
    qn = np.sqrt(qn)
    out = np.empty(n, dtype=np.float64)
    for i in range(n):
        dot = 0.0
        rn = 0.0
        for j in range(d):
            dot += mat[i, j] * query[j]
            rn += mat[i, j] * mat[i, j]
        out[i] = dot / (np.sqrt(rn) * qn)
    return out
