"""Pure-numpy kernel implementations (fallback backend).

The synthetic-score kernel mirrors the numba backend's accumulation order
exactly: members are folded into each query's accumulator one at a time, so
results are bit-identical across backends.
"""

import numpy as np

from .._hash import TAG_NOISE, hash_words, u01


def batch_scores(A, B, members, q_ids, lam, sigma, agg_mean, seed):
    """Synthetic-landscape utilities of one demo set on many queries.

    A is indexed [member, query id]; query ids double as column indices.
    """
    m = len(members)
    qcols = np.asarray(q_ids, dtype=np.int64)
    acc = np.zeros(len(qcols), dtype=np.float64)
    for mem in members:
        acc += A[mem, qcols]
    if agg_mean:
        acc /= m
    if lam != 0.0 and m >= 2:
        pair_sum = 0.0
        for a in range(m):
            for b in range(a + 1, m):
                pair_sum += float(B[members[a], members[b]])
        acc += lam * (pair_sum / (m * (m - 1) / 2))
    if sigma != 0.0:
        mem_words = [int(x) for x in members]
        noise = np.array(
            [
                -1.0 + 2.0 * u01(hash_words(seed, TAG_NOISE, int(q), *mem_words))
                for q in q_ids
            ],
            dtype=np.float64,
        )
        acc += sigma * noise
    return acc


def iou_counts(pred, truth):
    """(intersection, union) pixel counts of two flat boolean arrays."""
    inter = int(np.count_nonzero(pred & truth))
    union = int(np.count_nonzero(pred | truth))
    return inter, union


def sq_err_sum(a, b):
    """Sum of squared differences of two flat float arrays."""
    d = a - b
    return float(np.dot(d, d))


def cosine_scores(mat, query):
    """Cosine similarity of each row of mat against the query vector."""
    norms = np.sqrt(np.einsum("ij,ij->i", mat, mat))
    qnorm = float(np.sqrt(np.dot(query, query)))
    return (mat @ query) / (norms * qnorm)
