import logging
import os

import numpy as np

from wavepack.base.exception import DatasetError

logger = logging.getLogger(__name__)

SUPPORTED_EXTENSIONS = (".png", ".ppm", ".pgm", ".pbm", ".pnm")
_SUPPORTED_FORMATS = ("PNG", "PPM")  # pillow reports every NetPBM flavour as PPM


def load_image(path: str) -> np.ndarray:
    """Decode to float64 [c][h][w] in [0, 1]. Gray images have one channel, colour three."""
    from PIL import Image

    ext = os.path.splitext(path)[1].lower()
    if ext not in SUPPORTED_EXTENSIONS:
        raise DatasetError(f"unsupported image type '{ext}': {path}")
    try:
        with Image.open(path) as img:
            if img.format not in _SUPPORTED_FORMATS:
                raise DatasetError(f"unsupported image format {img.format}: {path}")
            mode = img.mode
            if mode in ("I;16", "I;16B", "I;16L", "I"):
                arr = np.asarray(img, dtype=np.float64) / 65535.0
            elif mode in ("1", "L", "LA") or (mode in ("P", "PA") and _is_gray(img)):
                arr = np.asarray(img.convert("L"), dtype=np.float64) / 255.0
            else:
                arr = np.asarray(img.convert("RGB"), dtype=np.float64) / 255.0
    except OSError as e:
        raise DatasetError(f"cannot decode {path}: {e}") from e

    if arr.ndim == 2:
        arr = arr[np.newaxis]
    else:
        arr = arr.transpose(2, 0, 1)
    return np.ascontiguousarray(arr)


def _is_gray(img) -> bool:
    # palette image: gray only if r == g == b everywhere
    rgb = np.asarray(img.convert("RGB"))
    return bool(np.all(rgb[..., 0] == rgb[..., 1]) and np.all(rgb[..., 1] == rgb[..., 2]))


def read_image_size(path: str):
    """(height, width) without decoding the pixels"""
    from PIL import Image

    try:
        with Image.open(path) as img:
            w, h = img.size
    except OSError as e:
        raise DatasetError(f"cannot read {path}: {e}") from e
    return (h, w)


def save_image(path: str, image: np.ndarray, bits: int = 8) -> None:
    """image: [c][h][w] or [h][w] in [0, 1]. bits=16 only for one channel."""
    from PIL import Image

    x = np.asarray(image, dtype=np.float64)
    if x.ndim == 3:
        if x.shape[0] == 1:
            x = x[0]
        else:
            x = x.transpose(1, 2, 0)
    x = np.clip(x, 0.0, 1.0)
    if bits == 16:
        if x.ndim != 2:
            raise ValueError("16-bit output supports gray images only")
        img = Image.fromarray(np.round(x * 65535.0).astype(np.uint16))
    elif bits == 8:
        img = Image.fromarray(np.round(x * 255.0).astype(np.uint8))
    else:
        raise ValueError(f"bits must be 8 or 16 ({bits})")
    img.save(path)
