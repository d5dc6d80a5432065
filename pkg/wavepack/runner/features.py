import logging
import time
from dataclasses import dataclass
from typing import Any, Dict, Optional, Sequence, Union

import numpy as np

from wavepack.base.define import BoundaryMode, ChannelPolicy, FeatureType, PacketOrdering
from wavepack.base.exception import DatasetError
from wavepack.base.packet import PacketTensor
from wavepack.datasets.image_io import load_image
from wavepack.runner.pool import parallel_map
from wavepack.stats.packet_stats import ln_abs_scale
from wavepack.transform.packets import wpt_2d

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FeatureSpec:
    """How an image becomes a feature array. Stored in the model file meta."""

    feature_type: FeatureType = FeatureType.packet
    wavelet: str = "haar"
    level: int = 3
    mode: BoundaryMode = BoundaryMode.gram_schmidt

    def __post_init__(self):
        object.__setattr__(self, "feature_type", FeatureType.from_str(self.feature_type))
        object.__setattr__(self, "mode", BoundaryMode.from_str(self.mode))

    @property
    def channel_axis(self) -> int:
        # counted with the sample axis: [n][P][c][ph][pw] or [n][c][h][w]
        return 2 if self.feature_type == FeatureType.packet else 1

    def sample_shape(self, channels: int, height: int, width: int) -> tuple:
        if self.feature_type == FeatureType.pixel:
            return (channels, height, width)
        s = 2**self.level
        return (4**self.level, channels, height // s, width // s)

    def to_meta(self) -> Dict[str, Any]:
        return {
            "features": self.feature_type.name,
            "wavelet": self.wavelet,
            "level": self.level,
            "mode": self.mode.name,
        }

    @staticmethod
    def from_meta(meta: Dict[str, Any]) -> "FeatureSpec":
        try:
            return FeatureSpec(meta["features"], meta["wavelet"], int(meta["level"]), meta["mode"])
        except KeyError as e:
            raise ValueError(f"model meta has no feature description ({e})") from e


def image_packets(
    image: np.ndarray,
    spec: FeatureSpec,
    channel_policy: Union[str, ChannelPolicy] = ChannelPolicy.per_channel,
) -> PacketTensor:
    """transform -> ln-scale, natural order"""
    packets = wpt_2d(image, spec.wavelet, spec.level, spec.mode, PacketOrdering.natural)
    return ln_abs_scale(packets, channel_policy)


def image_features(image: np.ndarray, spec: FeatureSpec) -> np.ndarray:
    if spec.feature_type == FeatureType.pixel:
        return np.asarray(image, dtype=np.float64)
    return image_packets(image, spec).data


def load_image_checked(path: str, image_size: Optional[tuple]) -> np.ndarray:
    img = load_image(path)
    if image_size is not None and img.shape[1:] != tuple(image_size):
        raise DatasetError(f"image size {img.shape[1:]} != {tuple(image_size)}: {path}")
    return img


def extract_features(
    paths: Sequence[str],
    spec: FeatureSpec,
    image_size: Optional[tuple] = None,
    threads: Optional[int] = None,
) -> np.ndarray:
    """decode -> transform -> ln-scale for every path on the worker pool; [n][...]"""
    t0 = time.time()
    feats = parallel_map(lambda p: image_features(load_image_checked(p, image_size), spec), paths, threads)
    if len(feats) == 0:
        raise ValueError("no images to extract features from")
    shapes = {f.shape for f in feats}
    if len(shapes) != 1:
        raise ValueError(f"inconsistent feature shapes {sorted(shapes)}")
    out = np.stack(feats)
    logger.info(f"extracted {spec.feature_type.name} features {out.shape} ({time.time() - t0:.1f}s)")
    return out


def flatten_features(features: np.ndarray) -> np.ndarray:
    return features.reshape(features.shape[0], -1)
