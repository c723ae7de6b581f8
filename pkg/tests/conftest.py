import sys
from pathlib import Path

import numpy as np
import pytest

from demoselect import DemoSet, kernels

TESTS_DIR = Path(__file__).parent
REPO_ROOT = TESTS_DIR.parent

FAKE_ADAPTER = TESTS_DIR / "fake_adapter.py"


def fake_adapter_cmd(*extra: str) -> list[str]:
    return [sys.executable, str(FAKE_ADAPTER), *extra]


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Trigger any JIT compilation before timed tests run."""
    A = np.full((2, 3), 0.5)
    B = np.zeros((2, 2))
    kernels.batch_scores(
        A, B, np.array([0, 1], dtype=np.int64), np.array([2], dtype=np.int64),
        0.5, 0.5, True, np.uint64(1),
    )
    kernels.iou_counts(np.array([True, False]), np.array([True, True]))
    kernels.sq_err_sum(np.array([0.5, 0.0]), np.array([0.0, 0.0]))
    kernels.cosine_scores(np.array([[1.0, 0.0]]), np.array([1.0, 1.0]))


@pytest.fixture
def singleton():
    return lambda x: DemoSet((x,))
