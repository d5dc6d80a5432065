import copy
import dataclasses
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from wavepack.base.define import BoundaryMode, ChannelPolicy, FeatureType, PacketOrdering

logger = logging.getLogger(__name__)

"""
config file (key = value, '#' comments):
 wavelet = db4
 level = 3
 seeds = 0..4
"""


def parse_seeds(text: str) -> List[int]:
    """'0..4' -> [0,1,2,3,4], '0,2,3' -> [0,2,3], '1' -> [1]"""
    text = str(text).strip()
    try:
        if ".." in text:
            lo, hi = text.split("..")
            seeds = list(range(int(lo), int(hi) + 1))
        else:
            seeds = [int(s) for s in text.split(",") if s.strip() != ""]
    except ValueError:
        raise ValueError(f"invalid seed list '{text}' (use 0..4, 0,2,3 or 1)")
    if len(seeds) == 0 or min(seeds) < 0:
        raise ValueError(f"invalid seed list '{text}'")
    return seeds


def _to_bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean '{text}'")


@dataclass
class RunConfig:
    data: str = ""
    out: str = "out"
    model: str = ""

    # transform
    wavelet: str = "haar"
    level: int = 3
    levels: int = 3
    size: int = 32
    mode: BoundaryMode = BoundaryMode.gram_schmidt
    ordering: PacketOrdering = PacketOrdering.natural

    # features / stats
    features: FeatureType = FeatureType.packet
    channel_policy: ChannelPolicy = ChannelPolicy.averaged
    extensions: Tuple[str, ...] = (".png", ".ppm", ".pgm", ".pbm", ".pnm")

    # training
    epochs: int = 10
    batch_size: int = 512
    lr: float = 0.001
    seeds: List[int] = field(default_factory=lambda: [0])
    split_seed: int = 0
    symmetric_init: bool = False

    threads: Optional[int] = None
    log_level: str = "WARNING"

    def __post_init__(self):
        self.mode = BoundaryMode.from_str(self.mode)
        self.ordering = PacketOrdering.from_str(self.ordering)
        self.features = FeatureType.from_str(self.features)
        self.channel_policy = ChannelPolicy.from_str(self.channel_policy)
        if isinstance(self.seeds, (str, int)):
            self.seeds = parse_seeds(str(self.seeds))
        if isinstance(self.extensions, str):
            self.extensions = tuple(e.strip() for e in self.extensions.split(",") if e.strip() != "")
        else:
            self.extensions = tuple(self.extensions)

    def assert_params(self) -> None:
        if self.level < 1 or self.levels < 1:
            raise ValueError(f"level/levels must be >= 1 ({self.level}, {self.levels})")
        if self.size < 2 or self.size % 2 != 0:
            raise ValueError(f"size must be even and >= 2 ({self.size})")
        if self.epochs < 1:
            raise ValueError(f"epochs must be >= 1 ({self.epochs})")
        if self.batch_size < 1:
            raise ValueError(f"batch_size must be >= 1 ({self.batch_size})")
        if not (self.lr > 0):
            raise ValueError(f"lr must be > 0 ({self.lr})")
        if self.threads is not None and self.threads < 1:
            raise ValueError(f"threads must be >= 1 ({self.threads})")
        for ext in self.extensions:
            if ext.lower().lstrip(".") in ("jpg", "jpeg"):
                raise ValueError("JPEG input is not supported")

    def to_dict(self) -> dict:
        d = {}
        for f in dataclasses.fields(self):
            v = getattr(self, f.name)
            if hasattr(v, "name"):
                v = v.name
            elif isinstance(v, tuple):
                v = list(v)
            d[f.name] = v
        return d

    def copy(self) -> "RunConfig":
        return copy.deepcopy(self)

    def update(self, values: Dict[str, Any]) -> "RunConfig":
        """Set fields from strings or typed values; unknown keys are an error."""
        names = {f.name: f for f in dataclasses.fields(self)}
        for key, val in values.items():
            key = key.replace("-", "_")
            if key not in names:
                raise ValueError(f"unknown config key '{key}'")
            if isinstance(val, str):
                val = self._coerce(key, val)
            setattr(self, key, val)
        self.__post_init__()
        return self

    def _coerce(self, key: str, text: str) -> Any:
        cur = getattr(self, key)
        text = text.strip()
        if key == "threads":
            return None if text.lower() in ("", "none") else int(text)
        if key == "seeds":
            return parse_seeds(text)
        if isinstance(cur, bool):
            return _to_bool(text)
        if isinstance(cur, int):
            return int(text)
        if isinstance(cur, float):
            return float(text)
        return text  # enums and tuples are normalized in __post_init__

    def echo_lines(self) -> List[str]:
        lines = []
        for key, val in sorted(self.to_dict().items()):
            if isinstance(val, list):
                val = ",".join(str(v) for v in val)
            lines.append(f"{key} = {val}")
        return lines


def load_config_file(path: str) -> Dict[str, str]:
    values = {}
    with open(path, "r", encoding="utf-8") as f:
        for n, line in enumerate(f, 1):
            line = line.split("#", 1)[0].strip()
            if line == "":
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{n}: expected 'key = value'")
            key, val = line.split("=", 1)
            values[key.strip()] = val.strip()
    logger.debug(f"config file {path}: {sorted(values)}")
    return values
