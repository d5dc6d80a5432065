import csv
import logging
from dataclasses import dataclass
from typing import Iterable, List, NamedTuple, Union

import numpy as np

from wavepack.base.define import ChannelPolicy, PacketOrdering
from wavepack.base.order import freq_order_permutation, natural_order_labels, reorder_packets
from wavepack.base.packet import PacketTensor
from wavepack.utils.common import to_str_float

logger = logging.getLogger(__name__)

LN_EPS = 1e-12


def ln_abs(x: np.ndarray, eps: float = LN_EPS) -> np.ndarray:
    return np.log(np.abs(x) + eps)


def ln_abs_scale(
    packets: PacketTensor,
    channel_policy: Union[str, ChannelPolicy] = ChannelPolicy.per_channel,
    eps: float = LN_EPS,
) -> PacketTensor:
    """ln(|x| + eps); averaged policy averages the channels first and keeps one channel."""
    data = packets.data
    if ChannelPolicy.from_str(channel_policy) == ChannelPolicy.averaged:
        data = data.mean(axis=1, keepdims=True)
    return PacketTensor(packets.level, ln_abs(data, eps), packets.ordering)


@dataclass(frozen=True, eq=False)
class PacketStats:
    """Running per-coefficient mean and squared-deviation sum.

    mean/std are [4^Q][ph][pw] for the averaged policy and [4^Q][c][ph][pw] per channel.
    """

    level: int
    mean: np.ndarray
    m2: np.ndarray
    sample_count: int
    channel_policy: ChannelPolicy = ChannelPolicy.averaged
    ordering: PacketOrdering = PacketOrdering.natural

    @property
    def std(self) -> np.ndarray:
        """sample (n-1) standard deviation"""
        if self.sample_count < 2:
            raise ValueError(f"std needs at least 2 samples ({self.sample_count})")
        return np.sqrt(np.maximum(self.m2, 0.0) / (self.sample_count - 1))

    @property
    def shape(self):
        return self.mean.shape

    def merge(self, other: "PacketStats") -> "PacketStats":
        """Pairwise combination of two disjoint partial results."""
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} != {other.shape}")
        if self.channel_policy != other.channel_policy:
            raise ValueError("channel policy mismatch")
        other = other.to_ordering(self.ordering)
        n = self.sample_count + other.sample_count
        if n == 0:
            return self
        delta = other.mean - self.mean
        mean = self.mean + delta * (other.sample_count / n)
        m2 = self.m2 + other.m2 + delta**2 * (self.sample_count * other.sample_count / n)
        return PacketStats(self.level, mean, m2, n, self.channel_policy, self.ordering)

    def to_ordering(self, ordering: Union[str, PacketOrdering]) -> "PacketStats":
        ordering = PacketOrdering.from_str(ordering)
        if ordering == self.ordering:
            return self
        return PacketStats(
            self.level,
            reorder_packets(self.mean, self.level, self.ordering, ordering),
            reorder_packets(self.m2, self.level, self.ordering, ordering),
            self.sample_count,
            self.channel_policy,
            ordering,
        )


def _sample(x: Union[PacketTensor, np.ndarray], policy: ChannelPolicy) -> np.ndarray:
    data = x.data if isinstance(x, PacketTensor) else np.asarray(x, dtype=np.float64)
    if data.ndim != 4:
        raise ValueError(f"expected [packets][channels][height][width] ({data.shape})")
    if policy == ChannelPolicy.averaged:
        return data.mean(axis=1)
    return data


def accumulate_stats(
    stream: Iterable[Union[PacketTensor, np.ndarray]],
    channel_policy: Union[str, ChannelPolicy] = ChannelPolicy.averaged,
) -> PacketStats:
    """Single pass (Welford). All items must share shape and ordering."""
    policy = ChannelPolicy.from_str(channel_policy)
    level = None
    ordering = None
    mean = m2 = None
    n = 0
    for x in stream:
        if isinstance(x, PacketTensor):
            if ordering is None:
                ordering = x.ordering
            elif x.ordering != ordering:
                raise ValueError(f"ordering mismatch ({x.ordering.name} != {ordering.name})")
        s = _sample(x, policy)
        if mean is None:
            level = int(round(np.log(s.shape[0]) / np.log(4)))
            mean = np.zeros_like(s)
            m2 = np.zeros_like(s)
        elif s.shape != mean.shape:
            raise ValueError(f"shape mismatch {s.shape} != {mean.shape}")
        n += 1
        delta = s - mean
        mean += delta / n
        m2 += delta * (s - mean)

    if n == 0:
        raise ValueError("empty stream")
    logger.debug(f"accumulated {n} samples, shape={mean.shape}")
    return PacketStats(level, mean, m2, n, policy, ordering or PacketOrdering.natural)


class StatsDifference(NamedTuple):
    mean_abs_diff: np.ndarray
    std_abs_diff: np.ndarray


def stats_difference(a: PacketStats, b: PacketStats) -> StatsDifference:
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch {a.shape} != {b.shape}")
    b = b.to_ordering(a.ordering)
    return StatsDifference(np.abs(a.mean - b.mean), np.abs(a.std - b.std))


class CurveRow(NamedTuple):
    packet_index: int
    label: str
    mean: float
    std: float


def _spatial_mean(x: np.ndarray) -> np.ndarray:
    return x.reshape(x.shape[0], -1).mean(axis=1)


def packet_curve(stats: PacketStats, ordering: Union[str, PacketOrdering] = PacketOrdering.natural) -> List[CurveRow]:
    """Spatially averaged mean/std per packet."""
    stats = stats.to_ordering(ordering)
    labels = natural_order_labels(stats.level)
    if stats.ordering == PacketOrdering.frequency:
        labels = [labels[i] for i in freq_order_permutation(stats.level)]
    means = _spatial_mean(stats.mean)
    stds = _spatial_mean(stats.std) if stats.sample_count >= 2 else np.zeros_like(means)
    return [CurveRow(i, labels[i], float(means[i]), float(stds[i])) for i in range(len(labels))]


def curve_difference(a: PacketStats, b: PacketStats, ordering: Union[str, PacketOrdering] = PacketOrdering.natural) -> np.ndarray:
    """|curve mean a - curve mean b| per packet"""
    ca = np.array([r.mean for r in packet_curve(a, ordering)])
    cb = np.array([r.mean for r in packet_curve(b, ordering)])
    return np.abs(ca - cb)


def save_curve_csv(rows: List[CurveRow], path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["packet_index", "label", "mean", "std"])
        for r in rows:
            w.writerow([r.packet_index, r.label, to_str_float(r.mean), to_str_float(r.std)])


def save_heatmap_csv(arr: np.ndarray, path: str) -> None:
    """Long form packet,row,col,value; a channel axis is averaged out."""
    arr = np.asarray(arr, dtype=np.float64)
    if arr.ndim == 4:
        arr = arr.mean(axis=1)
    if arr.ndim != 3:
        raise ValueError(f"expected [packets][height][width] ({arr.shape})")
    with open(path, "w", encoding="utf-8", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["packet", "row", "col", "value"])
        for p in range(arr.shape[0]):
            for r in range(arr.shape[1]):
                for c in range(arr.shape[2]):
                    w.writerow([p, r, c, to_str_float(arr[p, r, c])])
