import enum
from typing import List, Tuple, Union

import numpy as np

# (row, col, value)
Entry = Tuple[int, int, float]

# [channels][height][width]
ImageArray = np.ndarray


class _NamedEnum(enum.Enum):
    @classmethod
    def get_names(cls) -> List[str]:
        return [i.name for i in cls]

    @classmethod
    def from_str(cls, val: Union[str, "_NamedEnum"]):
        if isinstance(val, cls):
            return val
        names = cls.get_names()
        if val not in names:
            raise ValueError("Unknown {} '{}'. list is [{}].".format(cls.__name__, val, ",".join(names)))
        return cls[val]


class BoundaryMode(_NamedEnum):
    truncated = 0  # wrapped entries dropped, not invertible for N > 2
    gram_schmidt = enum.auto()  # wrapped rows re-orthogonalized


class PacketOrdering(_NamedEnum):
    natural = 0
    frequency = enum.auto()


class ChannelPolicy(_NamedEnum):
    averaged = 0
    per_channel = enum.auto()


class FeatureType(_NamedEnum):
    packet = 0
    pixel = enum.auto()
