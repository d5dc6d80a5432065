import logging
from dataclasses import dataclass

import numpy as np

logger = logging.getLogger(__name__)

STD_FLOOR = 1e-8


@dataclass(frozen=True, eq=False)
class NormStats:
    mean: np.ndarray  # [channels]
    std: np.ndarray  # [channels]
    channel_axis: int = 1  # axis of the channel in the per-sample feature array, counting the sample axis

    @property
    def channels(self) -> int:
        return len(self.mean)

    def _shape(self, features: np.ndarray):
        shape = [1] * features.ndim
        shape[self.channel_axis] = self.channels
        return shape

    def _check(self, features: np.ndarray) -> None:
        if features.ndim <= self.channel_axis or features.shape[self.channel_axis] != self.channels:
            raise ValueError(f"features {features.shape} do not have {self.channels} channels on axis {self.channel_axis}")


def fit_norm(train_features: np.ndarray, channel_axis: int = 1) -> NormStats:
    """Per-channel mean and std over everything else. Fit on the training split only."""
    x = np.asarray(train_features, dtype=np.float64)
    axes = tuple(i for i in range(x.ndim) if i != channel_axis)
    mean = x.mean(axis=axes)
    std = x.std(axis=axes)
    low = std < STD_FLOOR
    if np.any(low):
        logger.warning(f"zero-variance channel(s) {np.flatnonzero(low).tolist()}; std floored at {STD_FLOOR}")
        std = np.where(low, STD_FLOOR, std)
    return NormStats(mean, std, channel_axis)


def apply_norm(features: np.ndarray, norm: NormStats) -> np.ndarray:
    x = np.asarray(features, dtype=np.float64)
    norm._check(x)
    shape = norm._shape(x)
    return (x - norm.mean.reshape(shape)) / norm.std.reshape(shape)


def denormalize(features: np.ndarray, norm: NormStats) -> np.ndarray:
    x = np.asarray(features, dtype=np.float64)
    norm._check(x)
    shape = norm._shape(x)
    return x * norm.std.reshape(shape) + norm.mean.reshape(shape)
