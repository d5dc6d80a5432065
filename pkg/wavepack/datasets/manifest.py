import csv
import logging
import os
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

import numpy as np

from wavepack.base.exception import DatasetError
from wavepack.datasets.image_io import SUPPORTED_EXTENSIONS, read_image_size

logger = logging.getLogger(__name__)

SPLITS = ("train", "val", "test")

"""
root/
 ├ class_a/
 │ ├ 0000.png
 │ └ ...
 └ class_b/
   └ ...
"""


@dataclass
class DatasetManifest:
    root: str
    classes: List[str]
    files: Dict[str, List[str]]  # class -> sorted paths (after truncation)
    splits: Dict[str, List[Tuple[str, int]]]  # split -> [(path, label)]
    seed: int
    image_size: Tuple[int, int]  # (height, width)
    ratios: Tuple[int, int, int] = (10, 2, 3)
    dropped: Dict[str, int] = field(default_factory=dict)

    def paths(self, split: str) -> List[str]:
        return [p for p, _ in self.splits[split]]

    def labels(self, split: str) -> np.ndarray:
        return np.array([label for _, label in self.splits[split]], dtype=np.int64)

    def counts(self, split: str) -> List[int]:
        labels = self.labels(split)
        return [int(np.sum(labels == i)) for i in range(len(self.classes))]

    def save_csv(self, path: str) -> None:
        with open(path, "w", encoding="utf-8", newline="") as f:
            w = csv.writer(f, lineterminator="\n")
            w.writerow(["split", "label", "class", "path"])
            for split in SPLITS:
                for p, label in self.splits[split]:
                    w.writerow([split, label, self.classes[label], os.path.relpath(p, self.root)])


def _split_counts(n: int, ratios: Sequence[int]) -> Tuple[int, int, int]:
    total = sum(ratios)
    n_train = n * ratios[0] // total
    n_val = n * ratios[1] // total
    return n_train, n_val, n - n_train - n_val


def scan_dataset(
    root: str,
    extensions: Sequence[str] = SUPPORTED_EXTENSIONS,
    seed: int = 0,
    ratios: Sequence[int] = (10, 2, 3),
) -> DatasetManifest:
    """One subdirectory per class. Files are sorted, shuffled per class with `seed` and split train:val:test."""
    if not os.path.isdir(root):
        raise DatasetError(f"dataset root not found: {root}")
    if len(ratios) != 3 or min(ratios) < 0 or sum(ratios) == 0:
        raise ValueError(f"invalid split ratios {tuple(ratios)}")
    extensions = tuple(e.lower() if e.startswith(".") else "." + e.lower() for e in extensions)

    classes = sorted(d for d in os.listdir(root) if os.path.isdir(os.path.join(root, d)))
    if len(classes) < 2:
        raise DatasetError(f"need at least 2 class directories in {root} ({len(classes)})")

    files = {}
    for name in classes:
        class_dir = os.path.join(root, name)
        paths = sorted(
            os.path.join(class_dir, fn)
            for fn in os.listdir(class_dir)
            if os.path.isfile(os.path.join(class_dir, fn)) and os.path.splitext(fn)[1].lower() in extensions
        )
        if len(paths) == 0:
            raise DatasetError(f"class directory has no images: {class_dir}")
        files[name] = paths

    n = min(len(v) for v in files.values())
    dropped = {}
    for name in classes:
        if len(files[name]) > n:
            dropped[name] = len(files[name]) - n
            files[name] = files[name][:n]
    if len(dropped) > 0:
        logger.warning(f"unbalanced classes, truncated to {n} per class (dropped {dropped})")

    n_train, n_val, n_test = _split_counts(n, ratios)
    if min(n_train, n_val, n_test) == 0:
        logger.warning(f"{n} images per class gives an empty split ({n_train}/{n_val}/{n_test})")

    rng = np.random.default_rng(seed)
    splits: Dict[str, List[Tuple[str, int]]] = {s: [] for s in SPLITS}
    for label, name in enumerate(classes):
        order = rng.permutation(n)
        shuffled = [files[name][i] for i in order]
        splits["train"] += [(p, label) for p in shuffled[:n_train]]
        splits["val"] += [(p, label) for p in shuffled[n_train : n_train + n_val]]
        splits["test"] += [(p, label) for p in shuffled[n_train + n_val :]]

    image_size = read_image_size(files[classes[0]][0])
    logger.info(f"scan {root}: classes={classes}, per class {n_train}/{n_val}/{n_test}, size={image_size}")
    return DatasetManifest(root, classes, files, splits, seed, image_size, tuple(ratios), dropped)
