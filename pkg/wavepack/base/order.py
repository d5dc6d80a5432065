import itertools
from functools import lru_cache
from typing import List, Union

import numpy as np

from wavepack.base.define import PacketOrdering

LETTERS = "ahvd"

# (width band, height band) per label letter
_AXIS_BANDS = {
    "a": ("l", "l"),
    "h": ("l", "h"),
    "v": ("h", "l"),
    "d": ("h", "h"),
}


def _check_level(level: int) -> None:
    if int(level) != level or level < 1:
        raise ValueError(f"level must be a positive integer ({level})")


@lru_cache(maxsize=16)
def _natural_labels(level: int) -> tuple:
    return tuple("".join(p) for p in itertools.product(LETTERS, repeat=level))


def natural_order_labels(level: int) -> List[str]:
    """aa..a, aa..h, aa..v, aa..d, ..., dd..d"""
    _check_level(level)
    return list(_natural_labels(level))


def graycode_order(level: int, low: str = "l", high: str = "h") -> List[str]:
    """1D filter paths sorted by sequency."""
    _check_level(level)
    order = [low, high]
    for _ in range(level - 1):
        order = [low + p for p in order] + [high + p for p in order[::-1]]
    return order


@lru_cache(maxsize=16)
def _frequency_grid(level: int) -> tuple:
    rank = {p: i for i, p in enumerate(graycode_order(level))}
    size = 2**level
    grid = [[""] * size for _ in range(size)]
    for label in _natural_labels(level):
        x_path = "".join(_AXIS_BANDS[c][0] for c in label)
        y_path = "".join(_AXIS_BANDS[c][1] for c in label)
        grid[rank[x_path]][rank[y_path]] = label
    return tuple(tuple(row) for row in grid)


def frequency_grid(level: int) -> List[List[str]]:
    """[width band][height band] layout of the labels; frequency grows toward the bottom right."""
    _check_level(level)
    return [list(row) for row in _frequency_grid(level)]


@lru_cache(maxsize=16)
def _freq_perm(level: int) -> np.ndarray:
    index = {label: i for i, label in enumerate(_natural_labels(level))}
    perm = np.array([index[label] for row in _frequency_grid(level) for label in row], dtype=np.int64)
    perm.flags.writeable = False
    return perm


def freq_order_permutation(level: int) -> np.ndarray:
    """perm[k] = natural index of the packet at frequency position k (grid row-major)."""
    _check_level(level)
    return _freq_perm(level)


def freq_order_labels(level: int) -> List[str]:
    _check_level(level)
    labels = _natural_labels(level)
    return [labels[i] for i in _freq_perm(level)]


def packet_label(index: int, level: int, ordering: Union[str, PacketOrdering] = PacketOrdering.natural) -> str:
    _check_level(level)
    ordering = PacketOrdering.from_str(ordering)
    if int(index) != index or not (0 <= index < 4**level):
        raise ValueError(f"packet index {index} out of range [0, {4 ** level})")
    if ordering == PacketOrdering.frequency:
        index = _freq_perm(level)[index]
    return _natural_labels(level)[index]


def packet_index(label: str, ordering: Union[str, PacketOrdering] = PacketOrdering.natural) -> int:
    if len(label) == 0 or any(c not in LETTERS for c in label):
        raise ValueError(f"invalid packet label '{label}'")
    idx = 0
    for c in label:
        idx = idx * 4 + LETTERS.index(c)
    if PacketOrdering.from_str(ordering) == PacketOrdering.frequency:
        idx = int(np.flatnonzero(_freq_perm(len(label)) == idx)[0])
    return idx


def reorder_packets(data: np.ndarray, level: int, src: PacketOrdering, dst: PacketOrdering) -> np.ndarray:
    """Reorder the leading packet axis."""
    src = PacketOrdering.from_str(src)
    dst = PacketOrdering.from_str(dst)
    if src == dst:
        return data
    perm = freq_order_permutation(level)
    if dst == PacketOrdering.frequency:
        return data[perm]
    return data[np.argsort(perm)]


def packet_radial_frequency(level: int, ordering: Union[str, PacketOrdering] = PacketOrdering.natural) -> np.ndarray:
    """Radial centre frequency (cycles/pixel) of every packet's band, from its frequency-grid cell."""
    _check_level(level)
    size = 2**level
    gx, gy = np.meshgrid(np.arange(size), np.arange(size), indexing="ij")
    rad = np.hypot((gx.ravel() + 0.5) / (2 * size), (gy.ravel() + 0.5) / (2 * size))  # frequency order
    if PacketOrdering.from_str(ordering) == PacketOrdering.frequency:
        return rad
    out = np.empty_like(rad)
    out[_freq_perm(level)] = rad
    return out
