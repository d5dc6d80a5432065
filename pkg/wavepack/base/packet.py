import csv
import logging
import struct
import time
from dataclasses import dataclass
from typing import List, Union

import numpy as np

from wavepack.base.define import PacketOrdering
from wavepack.base.exception import FormatError
from wavepack.base.order import freq_order_permutation, natural_order_labels, packet_index, reorder_packets
from wavepack.utils.common import to_str_float

logger = logging.getLogger(__name__)

"""
WPK1 layout (little-endian)
 magic      4s  b"WPK1"
 level      u32
 channels   u32
 height     u32  (packet height)
 width      u32  (packet width)
 ordering   u8   0=natural 1=frequency
 data       f64  [4^level][channels][height][width], row-major
"""
_WPK_MAGIC = b"WPK1"
_WPK_HEADER = struct.Struct("<4sIIIIB")


@dataclass(frozen=True, eq=False)
class PacketTensor:
    level: int
    data: np.ndarray  # [4^Q][c][ph][pw]
    ordering: PacketOrdering = PacketOrdering.natural

    def __post_init__(self):
        data = np.array(self.data, dtype=np.float64)
        if data.ndim != 4:
            raise ValueError(f"packet data must be [packets][channels][height][width] ({data.shape})")
        if self.level < 1 or data.shape[0] != 4**self.level:
            raise ValueError(f"level {self.level} needs {4 ** self.level} packets ({data.shape[0]})")
        data.flags.writeable = False
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "ordering", PacketOrdering.from_str(self.ordering))

    @property
    def packet_count(self) -> int:
        return self.data.shape[0]

    @property
    def channels(self) -> int:
        return self.data.shape[1]

    @property
    def packet_height(self) -> int:
        return self.data.shape[2]

    @property
    def packet_width(self) -> int:
        return self.data.shape[3]

    @property
    def image_shape(self):
        s = 2**self.level
        return (self.channels, self.packet_height * s, self.packet_width * s)

    def labels(self) -> List[str]:
        labels = natural_order_labels(self.level)
        if self.ordering == PacketOrdering.frequency:
            return [labels[i] for i in freq_order_permutation(self.level)]
        return labels

    def node(self, label: str) -> np.ndarray:
        if len(label) != self.level:
            raise ValueError(f"label '{label}' does not have length {self.level}")
        return self.data[packet_index(label, self.ordering)]

    def to_ordering(self, ordering: Union[str, PacketOrdering]) -> "PacketTensor":
        ordering = PacketOrdering.from_str(ordering)
        if ordering == self.ordering:
            return self
        return PacketTensor(self.level, reorder_packets(self.data, self.level, self.ordering, ordering), ordering)

    def to_grid(self) -> np.ndarray:
        """[c][2^Q*ph][2^Q*pw] mosaic in frequency layout."""
        s = 2**self.level
        d = self.to_ordering(PacketOrdering.frequency).data
        ph, pw = self.packet_height, self.packet_width
        d = d.reshape(s, s, self.channels, ph, pw)
        return d.transpose(2, 0, 3, 1, 4).reshape(self.channels, s * ph, s * pw)

    def energy(self) -> np.ndarray:
        """sum of squares per channel"""
        return np.sum(self.data**2, axis=(0, 2, 3))

    # ------------------------------
    # io
    # ------------------------------
    def save(self, path: str) -> None:
        t0 = time.time()
        header = _WPK_HEADER.pack(
            _WPK_MAGIC,
            self.level,
            self.channels,
            self.packet_height,
            self.packet_width,
            0 if self.ordering == PacketOrdering.natural else 1,
        )
        with open(path, "wb") as f:
            f.write(header)
            f.write(np.ascontiguousarray(self.data, dtype="<f8").tobytes())
        logger.debug(f"packets saved({time.time() - t0:.1f}s): {path}")

    @staticmethod
    def load(path: str) -> "PacketTensor":
        with open(path, "rb") as f:
            buf = f.read()
        if len(buf) < _WPK_HEADER.size:
            raise FormatError(f"truncated WPK1 header: {path}")
        magic, level, c, ph, pw, order = _WPK_HEADER.unpack_from(buf)
        if magic != _WPK_MAGIC:
            raise FormatError(f"not a WPK1 file (magic={magic!r}): {path}")
        if order not in (0, 1):
            raise FormatError(f"unknown ordering byte {order}: {path}")
        count = (4**level) * c * ph * pw
        body = buf[_WPK_HEADER.size :]
        if len(body) != count * 8:
            raise FormatError(f"WPK1 body has {len(body)} bytes, expected {count * 8}: {path}")
        data = np.frombuffer(body, dtype="<f8").reshape(4**level, c, ph, pw)
        ordering = PacketOrdering.natural if order == 0 else PacketOrdering.frequency
        return PacketTensor(level, data.astype(np.float64), ordering)

    def save_csv(self, path: str) -> None:
        labels = self.labels()
        with open(path, "w", encoding="utf-8", newline="") as f:
            w = csv.writer(f, lineterminator="\n")
            w.writerow(["packet", "label", "channel", "row", "col", "value"])
            for p in range(self.packet_count):
                for ch in range(self.channels):
                    block = self.data[p, ch]
                    for r in range(self.packet_height):
                        for c in range(self.packet_width):
                            w.writerow([p, labels[p], ch, r, c, to_str_float(block[r, c])])
