import logging
import os
from typing import List, Tuple

import numpy as np

from wavepack.datasets.image_io import save_image

logger = logging.getLogger(__name__)

CLASS_NAMES = ["smooth", "noisy"]


def _radial_frequency(size: int) -> np.ndarray:
    f = np.fft.fftfreq(size)
    return np.hypot(f[:, np.newaxis], f[np.newaxis, :])


def _filtered_noise(rng: np.random.Generator, size: int, gain: np.ndarray) -> np.ndarray:
    white = rng.standard_normal((size, size))
    x = np.real(np.fft.ifft2(np.fft.fft2(white) * gain))
    x = x - x.mean()
    return x / (x.std() + 1e-12)


def smooth_field(rng: np.random.Generator, size: int, cutoff: float = 0.02, amplitude: float = 0.12) -> np.ndarray:
    """Gaussian random field, Gaussian spectrum with sigma `cutoff` cycles/pixel, centred at 0.5."""
    gain = np.exp(-0.5 * (_radial_frequency(size) / cutoff) ** 2)
    return 0.5 + amplitude * _filtered_noise(rng, size, gain)


def highfreq_noise(rng: np.random.Generator, size: int, low: float = 0.3, amplitude: float = 0.05) -> np.ndarray:
    """Noise with all energy at radial frequency >= `low`, RMS `amplitude`."""
    gain = (_radial_frequency(size) >= low).astype(np.float64)
    return amplitude * _filtered_noise(rng, size, gain)


def band_energy(image: np.ndarray, low: float, high: float = np.inf) -> float:
    """Mean energy per pixel of the spectral components with low <= radial frequency < high (Parseval scaled)."""
    x = np.asarray(image, dtype=np.float64)
    if x.ndim == 3:
        return float(np.mean([band_energy(ch, low, high) for ch in x]))
    h, w = x.shape
    assert h == w, "square images only"
    r = _radial_frequency(h)
    spec = np.abs(np.fft.fft2(x)) ** 2 / (h * w)
    mask = (r >= low) & (r < high)
    return float(spec[mask].sum() / (h * w))


def make_synthetic_dataset(
    count_per_class: int,
    size: int = 64,
    seed: int = 0,
    channels: int = 1,
    noise_low: float = 0.3,
    noise_amplitude: float = 0.05,
) -> Tuple[np.ndarray, np.ndarray]:
    """images [n][c][size][size], labels [n] (0 = smooth, 1 = smooth + high-frequency noise), class-major."""
    assert count_per_class >= 1 and channels >= 1
    rng = np.random.default_rng(seed)
    images = []
    labels = []
    for label in range(2):
        for _ in range(count_per_class):
            img = np.stack([smooth_field(rng, size) for _ in range(channels)])
            if label == 1:
                img = img + np.stack([highfreq_noise(rng, size, noise_low, noise_amplitude) for _ in range(channels)])
            images.append(img)
            labels.append(label)
    return np.stack(images), np.array(labels, dtype=np.int64)


def write_synthetic_dataset(
    root: str,
    count_per_class: int,
    size: int = 64,
    seed: int = 0,
    noise_low: float = 0.3,
    noise_amplitude: float = 0.05,
) -> List[str]:
    """Gray 16-bit PNGs under root/smooth and root/noisy. Returns the written paths."""
    images, labels = make_synthetic_dataset(count_per_class, size, seed, 1, noise_low, noise_amplitude)
    clipped = np.sum((images < 0) | (images > 1))
    if clipped > 0:
        logger.info(f"{clipped} pixels clipped to [0, 1]")

    paths = []
    counters = [0, 0]
    for img, label in zip(images, labels):
        class_dir = os.path.join(root, CLASS_NAMES[label])
        os.makedirs(class_dir, exist_ok=True)
        path = os.path.join(class_dir, f"{counters[label]:05d}.png")
        counters[label] += 1
        save_image(path, img, bits=16)
        paths.append(path)
    logger.info(f"wrote {len(paths)} images to {root}")
    return paths
