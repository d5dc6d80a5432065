import datetime as dt
import logging
import time
from dataclasses import dataclass

from wavepack.runner.callback import Callback
from wavepack.utils.common import to_str_time

logger = logging.getLogger(__name__)


@dataclass
class PrintProgress(Callback):
    """One line per epoch; after `start_time` seconds lines are printed at most every `interval` seconds."""

    start_time: float = 0  # s
    interval: float = 0  # s

    def __post_init__(self):
        assert self.start_time >= 0 and self.interval >= 0
        self.t0 = time.time()
        self.last_print = 0.0

    def on_train_begin(self, info) -> None:
        self.t0 = time.time()
        self.last_print = 0.0
        print(
            "### seed: {}, epochs: {}, batch size: {}, train: {}, val: {}".format(
                info["seed"],
                info["epochs"],
                info["batch_size"],
                info["train_size"],
                info["val_size"],
            )
        )

    def on_epoch_end(self, info) -> None:
        elapsed = time.time() - self.t0
        if info["epoch"] < info["epochs"] and elapsed > self.start_time and elapsed - self.last_print < self.interval:
            return
        self.last_print = elapsed
        s = dt.datetime.now().strftime("%H:%M:%S")
        s += f" {to_str_time(elapsed)}"
        s += f" {info['epoch']:3d}ep"
        s += f", train {info['train_accuracy'] * 100:6.2f}% loss {info['train_loss']:.4f}"
        s += f", val {info['val_accuracy'] * 100:6.2f}% loss {info['val_loss']:.4f}"
        print(s)

    def on_train_end(self, info) -> None:
        r = info["result"]
        print(f"### best val {r.best_val_accuracy * 100:.2f}% at epoch {r.best_epoch} ({to_str_time(time.time() - self.t0)})")
