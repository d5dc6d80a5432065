import csv
import logging
from typing import Union

import numpy as np

from wavepack.base.define import PacketOrdering
from wavepack.base.order import freq_order_permutation, natural_order_labels, reorder_packets
from wavepack.classify.model import LinearModel
from wavepack.utils.common import to_str_float

logger = logging.getLogger(__name__)


def reshape_weights(model: LinearModel, level: int, packet_height: int, packet_width: int, channels: int) -> np.ndarray:
    """[classes][feature_dim] -> [classes][4^Q][c][ph][pw] (features are flattened natural-order packets)"""
    dim = (4**level) * channels * packet_height * packet_width
    if model.feature_dim != dim:
        raise ValueError(
            f"feature_dim {model.feature_dim} does not match packet geometry "
            f"4^{level} x {channels} x {packet_height} x {packet_width} = {dim}"
        )
    return model.weights.reshape(model.classes, 4**level, channels, packet_height, packet_width)


def flatten_weights(weights: np.ndarray) -> np.ndarray:
    return weights.reshape(weights.shape[0], -1)


def export_weight_map(
    model: LinearModel,
    level: int,
    packet_height: int,
    packet_width: int,
    channels: int,
    ordering: Union[str, PacketOrdering] = PacketOrdering.frequency,
) -> np.ndarray:
    """Per-class channel-averaged weights, [classes][4^Q][ph][pw] in the requested packet order."""
    w = reshape_weights(model, level, packet_height, packet_width, channels).mean(axis=2)
    ordering = PacketOrdering.from_str(ordering)
    return np.stack([reorder_packets(m, level, PacketOrdering.natural, ordering) for m in w])


def save_weight_map_csv(maps: np.ndarray, level: int, ordering: Union[str, PacketOrdering], path: str) -> None:
    labels = natural_order_labels(level)
    if PacketOrdering.from_str(ordering) == PacketOrdering.frequency:
        labels = [labels[i] for i in freq_order_permutation(level)]
    with open(path, "w", encoding="utf-8", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["class", "packet", "label", "row", "col", "value"])
        for k in range(maps.shape[0]):
            for p in range(maps.shape[1]):
                for r in range(maps.shape[2]):
                    for c in range(maps.shape[3]):
                        w.writerow([k, p, labels[p], r, c, to_str_float(maps[k, p, r, c])])
    logger.debug(f"save weight map {maps.shape}: {path}")
