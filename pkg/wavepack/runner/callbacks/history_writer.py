import csv
import json
import logging
import os
import traceback
from dataclasses import dataclass
from typing import Optional

import wavepack
from wavepack.runner.callback import Callback
from wavepack.utils.common import JsonNumpyEncoder, to_str_float

logger = logging.getLogger(__name__)

"""
out/
 ├ seed_X/
 │ ├ history.csv
 │ ├ model.wlm
 │ ├ confusion.csv
 │ └ weights.csv
 │
 ├ summary.csv
 ├ manifest.csv
 ├ config.json
 ├ system.json   (psutil installed)
 ├ version.txt
 └ train.log
"""

HISTORY_HEADER = ["epoch", "split", "accuracy", "loss"]


def write_run_info(base_dir: str, config: dict, enable_ps: bool = False) -> None:
    os.makedirs(base_dir, exist_ok=True)
    with open(os.path.join(base_dir, "version.txt"), "w", encoding="utf-8") as f:
        f.write(wavepack.__version__)
    with open(os.path.join(base_dir, "config.json"), "w", encoding="utf-8") as f:
        json.dump(config, f, indent=2, sort_keys=True, cls=JsonNumpyEncoder)

    if not enable_ps:
        return
    info = {"cpu count": os.cpu_count()}
    try:
        import psutil

        info["memory size"] = psutil.virtual_memory().total
        info["process rss"] = psutil.Process().memory_info().rss
        logger.info(f"process rss: {info['process rss'] / 1024**2:.1f}MB")
    except Exception:
        logger.info(traceback.format_exc())
    with open(os.path.join(base_dir, "system.json"), "w", encoding="utf-8") as f:
        json.dump(info, f, indent=2)


@dataclass
class HistoryWriter(Callback):
    """history.csv (epoch,split,accuracy,loss), rewritten after every epoch."""

    save_dir: str = "out"
    filename: str = "history.csv"

    def __post_init__(self):
        self.path: Optional[str] = None

    def on_train_begin(self, info) -> None:
        os.makedirs(self.save_dir, exist_ok=True)
        self.path = os.path.join(self.save_dir, self.filename)
        self._write([])
        logger.debug(f"history path: {self.path}")

    def on_epoch_end(self, info) -> None:
        self._write(info["history"])

    def _write(self, history) -> None:
        assert self.path is not None
        with open(self.path, "w", encoding="utf-8", newline="") as f:
            w = csv.writer(f, lineterminator="\n")
            w.writerow(HISTORY_HEADER)
            for h in history:
                w.writerow([h.epoch, h.split, to_str_float(h.accuracy), to_str_float(h.loss)])
