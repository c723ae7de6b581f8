"""Hot numeric kernels with a numba backend and a pure-numpy fallback.

Backend selection, decided once at import time:

    DEMOSELECT_NUMBA=1   force the numba backend (ImportError if unavailable)
    DEMOSELECT_NUMBA=0   force the pure-numpy fallback
    unset / auto         numba if importable, else numpy

Both backends implement identical arithmetic for the synthetic-landscape
kernels (integer hashing plus a fixed accumulation order), so landscape
utilities are bit-identical across backends.  Metric reductions
(sq_err_sum, cosine_scores) may differ between backends in the last ulp;
each backend is individually deterministic.

``benchmarks/bench_kernels.py`` times the two backends side by side.
"""

import os

import numpy as np

from .._hash import GOLDEN, MIX_C1, MIX_C2, hash_words

_U_GOLDEN = np.uint64(GOLDEN)
_U_C1 = np.uint64(MIX_C1)
_U_C2 = np.uint64(MIX_C2)
_U30 = np.uint64(30)
_U27 = np.uint64(27)
_U31 = np.uint64(31)
_U11 = np.uint64(11)


def _select_backend():
    flag = os.environ.get("DEMOSELECT_NUMBA", "auto").strip().lower()
    if flag in {"0", "false", "off", "no"}:
        from . import numpy_backend as impl

        return impl, "numpy"
    if flag in {"1", "true", "on", "yes"}:
        try:
            from . import numba_backend as impl
        except ImportError as exc:
            raise ImportError(
                "DEMOSELECT_NUMBA=1 forces the numba backend but numba is not "
                "importable; install numba or unset the flag"
            ) from exc
        return impl, "numba"
    try:
        from . import numba_backend as impl

        return impl, "numba"
    except ImportError:
        from . import numpy_backend as impl

        return impl, "numpy"


_impl, BACKEND = _select_backend()

batch_scores = _impl.batch_scores
iou_counts = _impl.iou_counts
sq_err_sum = _impl.sq_err_sum
cosine_scores = _impl.cosine_scores


def _mix64_arr(z):
    z = (z ^ (z >> _U30)) * _U_C1
    z = (z ^ (z >> _U27)) * _U_C2
    return z ^ (z >> _U31)


def hash_matrix_u01(seed: int, tag: int, n_rows: int, n_cols: int) -> np.ndarray:
    """Matrix of u01(hash_words(seed, tag, i, j)), vectorized.

    Backend-independent: generation runs in numpy on both backends so the
    produced landscapes are identical bit for bit.
    """
    h1 = np.uint64(hash_words(seed, tag))
    rows = np.arange(n_rows, dtype=np.uint64).reshape(-1, 1)
    cols = np.arange(n_cols, dtype=np.uint64).reshape(1, -1)
    hr = _mix64_arr((h1 ^ rows) + _U_GOLDEN)
    hrc = _mix64_arr((hr ^ cols) + _U_GOLDEN)
    return (hrc >> _U11).astype(np.float64) * 2.0**-53
