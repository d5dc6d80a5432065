import logging
import time
from dataclasses import dataclass
from typing import List, NamedTuple, Optional

import numpy as np

from wavepack.base.exception import NonFiniteLossError
from wavepack.classify.model import AdamState, LinearModel, adam_step, loss_grad, predict
from wavepack.runner.callback import Callback

logger = logging.getLogger(__name__)


class HistoryRow(NamedTuple):
    epoch: int
    split: str
    accuracy: float
    loss: float


@dataclass
class TrainResult:
    model: LinearModel  # best validation checkpoint
    history: List[HistoryRow]
    best_epoch: int
    best_val_accuracy: float

    def accuracy(self, split: str, epoch: int) -> float:
        for h in self.history:
            if h.split == split and h.epoch == epoch:
                return h.accuracy
        raise KeyError(f"no history for {split} at epoch {epoch}")


@dataclass
class EvalResult:
    accuracy: float
    loss: float
    confusion: np.ndarray  # rows = true label, cols = prediction


def confusion_matrix(labels: np.ndarray, predictions: np.ndarray, classes: int) -> np.ndarray:
    cm = np.zeros((classes, classes), dtype=np.int64)
    np.add.at(cm, (np.asarray(labels, dtype=np.int64), np.asarray(predictions, dtype=np.int64)), 1)
    return cm


def evaluate(model: LinearModel, features: np.ndarray, labels: np.ndarray) -> EvalResult:
    labels = np.asarray(labels, dtype=np.int64)
    if len(labels) == 0:
        raise ValueError("empty split")
    pred = predict(model, features)
    loss, _ = loss_grad(model, features, labels)
    return EvalResult(float(np.mean(pred == labels)), loss, confusion_matrix(labels, pred, model.classes))


def _check_split(name: str, x: np.ndarray, y: np.ndarray) -> None:
    if len(x) == 0:
        raise ValueError(f"empty split: {name}")
    if len(x) != len(y):
        raise ValueError(f"{name}: {len(x)} features but {len(y)} labels")


def train(
    train_x: np.ndarray,
    train_y: np.ndarray,
    val_x: np.ndarray,
    val_y: np.ndarray,
    epochs: int = 10,
    batch_size: int = 512,
    seed: int = 0,
    lr: float = 0.001,
    classes: Optional[int] = None,
    symmetric_init: bool = False,
    callbacks: Optional[List[Callback]] = None,
) -> TrainResult:
    """Mini-batch Adam on softmax cross-entropy. Features are flat [n][dim] and already normalized.

    Everything random (init, shuffles) comes from one generator seeded with `seed`.
    """
    train_x = np.asarray(train_x, dtype=np.float64)
    val_x = np.asarray(val_x, dtype=np.float64)
    train_y = np.asarray(train_y, dtype=np.int64)
    val_y = np.asarray(val_y, dtype=np.int64)
    _check_split("train", train_x, train_y)
    _check_split("val", val_x, val_y)
    assert epochs >= 1 and batch_size >= 1
    if classes is None:
        classes = int(max(train_y.max(), val_y.max())) + 1
    callbacks = [] if callbacks is None else callbacks

    rng = np.random.default_rng(seed)
    model = LinearModel.initialize(classes, train_x.shape[1], rng, symmetric=symmetric_init)
    state = AdamState.create(model, lr=lr)

    info = {
        "epochs": epochs,
        "batch_size": batch_size,
        "seed": seed,
        "train_size": len(train_x),
        "val_size": len(val_x),
    }
    [c.on_train_begin(info) for c in callbacks]

    history: List[HistoryRow] = []
    best_model = model
    best_epoch = 0
    best_acc = -1.0
    n = len(train_x)
    t0 = time.time()
    for epoch in range(1, epochs + 1):
        info["epoch"] = epoch
        [c.on_epoch_begin(info) for c in callbacks]

        order = rng.permutation(n)
        for step, start in enumerate(range(0, n, batch_size)):
            idx = order[start : start + batch_size]
            loss, grads = loss_grad(model, train_x[idx], train_y[idx])
            if not np.isfinite(loss):
                logger.error(f"epoch {epoch} step {step}: loss={loss}, |w|max={np.abs(model.weights).max():.3e}")
                raise NonFiniteLossError(epoch, step, loss)
            model, state = adam_step(model, state, grads)

        tr = evaluate(model, train_x, train_y)
        va = evaluate(model, val_x, val_y)
        history.append(HistoryRow(epoch, "train", tr.accuracy, tr.loss))
        history.append(HistoryRow(epoch, "val", va.accuracy, va.loss))
        if va.accuracy > best_acc:
            best_acc = va.accuracy
            best_epoch = epoch
            best_model = model

        info.update(
            {
                "train_accuracy": tr.accuracy,
                "train_loss": tr.loss,
                "val_accuracy": va.accuracy,
                "val_loss": va.loss,
                "history": history,
                "elapsed": time.time() - t0,
            }
        )
        [c.on_epoch_end(info) for c in callbacks]
        if True in [c.intermediate_stop(info) for c in callbacks]:
            logger.info(f"stopped at epoch {epoch}")
            break

    logger.info(f"train end: best val accuracy {best_acc:.4f} at epoch {best_epoch} ({time.time() - t0:.1f}s)")
    result = TrainResult(best_model, history, best_epoch, best_acc)
    info["result"] = result
    [c.on_train_end(info) for c in callbacks]
    return result
