"""Task metrics (binary IoU, scaled MSE) and conversion to canonical Utility."""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from . import kernels
from .core import Utility
from .errors import EmptyBatch, NonFinite, ShapeMismatch


class BinaryMask:
    """Row-major boolean pixel grid."""

    def __init__(self, width: int, height: int, bits) -> None:
        if width < 1 or height < 1:
            raise ShapeMismatch(f"mask dimensions must be positive, got {width}x{height}")
        arr = np.asarray(bits, dtype=bool)
        if arr.ndim == 1:
            if arr.size != width * height:
                raise ShapeMismatch(
                    f"expected {width * height} bits for {width}x{height}, got {arr.size}"
                )
            arr = arr.reshape(height, width)
        elif arr.shape != (height, width):
            raise ShapeMismatch(
                f"expected shape ({height}, {width}), got {arr.shape}"
            )
        arr = np.ascontiguousarray(arr)
        arr.setflags(write=False)
        self.width = width
        self.height = height
        self.bits = arr

    @classmethod
    def from_array(cls, arr) -> "BinaryMask":
        arr = np.asarray(arr, dtype=bool)
        if arr.ndim != 2:
            raise ShapeMismatch(f"mask array must be 2-D, got {arr.ndim}-D")
        return cls(arr.shape[1], arr.shape[0], arr)


class PixelImage:
    """Row-major pixel grid with 1 or 3 channels, values in [0, 1]."""

    def __init__(self, width: int, height: int, channels: int, values) -> None:
        if width < 1 or height < 1:
            raise ShapeMismatch(f"image dimensions must be positive, got {width}x{height}")
        if channels not in (1, 3):
            raise ShapeMismatch(f"channels must be 1 or 3, got {channels}")
        arr = np.asarray(values, dtype=np.float64)
        expected = width * height * channels
        if arr.ndim == 1:
            if arr.size != expected:
                raise ShapeMismatch(f"expected {expected} values, got {arr.size}")
            arr = arr.reshape(height, width, channels)
        elif arr.shape != (height, width, channels):
            raise ShapeMismatch(
                f"expected shape ({height}, {width}, {channels}), got {arr.shape}"
            )
        if arr.size and (arr.min() < 0.0 or arr.max() > 1.0):
            raise ValueError("pixel values must lie in [0, 1]")
        arr = np.ascontiguousarray(arr)
        arr.setflags(write=False)
        self.width = width
        self.height = height
        self.channels = channels
        self.values = arr


def binary_iou(pred: BinaryMask, truth: BinaryMask) -> float:
    """Intersection over union; both-empty masks score 1.0 by convention."""
    if (pred.width, pred.height) != (truth.width, truth.height):
        raise ShapeMismatch(
            f"mask shapes differ: {pred.width}x{pred.height} vs {truth.width}x{truth.height}"
        )
    inter, union = kernels.iou_counts(pred.bits.reshape(-1), truth.bits.reshape(-1))
    if union == 0:
        return 1.0
    return inter / union


def mean_iou(pairs: Sequence[tuple[BinaryMask, BinaryMask]]) -> float:
    """Arithmetic mean of per-pair binary IoU."""
    if not pairs:
        raise EmptyBatch("mean_iou needs at least one mask pair")
    total = 0.0
    for pred, truth in pairs:
        total += binary_iou(pred, truth)
    return total / len(pairs)


def mse_scaled(pred: PixelImage, truth: PixelImage) -> float:
    """Mean squared error in normalized pixel units, scaled up by 100."""
    if (pred.width, pred.height, pred.channels) != (
        truth.width,
        truth.height,
        truth.channels,
    ):
        raise ShapeMismatch(
            f"image shapes differ: {pred.width}x{pred.height}x{pred.channels} vs "
            f"{truth.width}x{truth.height}x{truth.channels}"
        )
    total = kernels.sq_err_sum(pred.values.reshape(-1), truth.values.reshape(-1))
    return 100.0 * (total / pred.values.size)


def to_utility(metric_value: float, metric: str) -> Utility:
    """Convert a raw metric to higher-is-better form (losses are negated)."""
    if not math.isfinite(metric_value):
        raise NonFinite(f"metric value must be finite, got {metric_value!r}")
    if metric == "iou":
        return Utility(float(metric_value), "iou")
    if metric == "neg_mse":
        return Utility(-float(metric_value), "neg_mse")
    raise ValueError(f"unknown metric tag {metric!r}; expected 'iou' or 'neg_mse'")
