import json
import logging
import struct
import time
from dataclasses import dataclass, field, replace
from typing import Any, Dict, NamedTuple, Optional

import numpy as np

from wavepack.base.exception import FormatError
from wavepack.classify.functions import argmax_lowest, log_softmax, one_hot, softmax
from wavepack.classify.norm import NormStats

logger = logging.getLogger(__name__)

"""
WLM1 layout (little-endian)
 magic         4s   b"WLM1"
 classes       u32
 feature_dim   u32
 norm_channels u32  (0 = no normalization stored)
 norm_axis     i32
 meta_len      u32
 meta          utf-8 json, meta_len bytes (feature geometry, class names)
 weights       f64  [classes][feature_dim]
 bias          f64  [classes]
 norm mean     f64  [norm_channels]
 norm std      f64  [norm_channels]
"""
_WLM_MAGIC = b"WLM1"
_WLM_HEADER = struct.Struct("<4sIIIiI")


@dataclass(frozen=True, eq=False)
class LinearModel:
    weights: np.ndarray  # [classes][feature_dim]
    bias: np.ndarray  # [classes]
    norm: Optional[NormStats] = None
    meta: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        w = np.array(self.weights, dtype=np.float64)
        b = np.array(self.bias, dtype=np.float64)
        if w.ndim != 2 or b.shape != (w.shape[0],):
            raise ValueError(f"weights {w.shape} and bias {b.shape} do not match")
        assert np.all(np.isfinite(w)) and np.all(np.isfinite(b)), "model parameters must be finite"
        w.flags.writeable = False
        b.flags.writeable = False
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "bias", b)

    @property
    def classes(self) -> int:
        return self.weights.shape[0]

    @property
    def feature_dim(self) -> int:
        return self.weights.shape[1]

    @staticmethod
    def zeros(classes: int, feature_dim: int) -> "LinearModel":
        return LinearModel(np.zeros((classes, feature_dim)), np.zeros(classes))

    @staticmethod
    def initialize(classes: int, feature_dim: int, rng: np.random.Generator, symmetric: bool = False) -> "LinearModel":
        """uniform in +-1/sqrt(feature_dim), zero bias.

        symmetric: rows are centred across classes (2 classes -> w1 = -w0).
        """
        assert classes >= 2, "at least 2 classes"
        limit = 1.0 / np.sqrt(feature_dim)
        w = rng.uniform(-limit, limit, size=(classes, feature_dim))
        if symmetric:
            w = w - w.mean(axis=0, keepdims=True)
        return LinearModel(w, np.zeros(classes))

    def logits(self, features: np.ndarray) -> np.ndarray:
        x = np.asarray(features, dtype=np.float64)
        if x.ndim != 2 or x.shape[1] != self.feature_dim:
            raise ValueError(f"features {x.shape} do not match feature_dim {self.feature_dim}")
        return x @ self.weights.T + self.bias

    def with_params(self, weights: np.ndarray, bias: np.ndarray) -> "LinearModel":
        return replace(self, weights=weights, bias=bias)

    # ------------------------------
    # io
    # ------------------------------
    def save(self, path: str) -> None:
        t0 = time.time()
        meta = json.dumps(self.meta, sort_keys=True).encode("utf-8")
        nc = 0 if self.norm is None else self.norm.channels
        axis = 0 if self.norm is None else self.norm.channel_axis
        with open(path, "wb") as f:
            f.write(_WLM_HEADER.pack(_WLM_MAGIC, self.classes, self.feature_dim, nc, axis, len(meta)))
            f.write(meta)
            f.write(np.ascontiguousarray(self.weights, dtype="<f8").tobytes())
            f.write(np.ascontiguousarray(self.bias, dtype="<f8").tobytes())
            if self.norm is not None:
                f.write(np.ascontiguousarray(self.norm.mean, dtype="<f8").tobytes())
                f.write(np.ascontiguousarray(self.norm.std, dtype="<f8").tobytes())
        logger.info(f"model saved({time.time() - t0:.1f}s): {path}")

    @staticmethod
    def load(path: str) -> "LinearModel":
        t0 = time.time()
        with open(path, "rb") as f:
            buf = f.read()
        if len(buf) < _WLM_HEADER.size:
            raise FormatError(f"truncated WLM1 header: {path}")
        magic, classes, dim, nc, axis, meta_len = _WLM_HEADER.unpack_from(buf)
        if magic != _WLM_MAGIC:
            raise FormatError(f"not a WLM1 file (magic={magic!r}): {path}")
        pos = _WLM_HEADER.size
        expected = pos + meta_len + 8 * (classes * dim + classes + 2 * nc)
        if len(buf) != expected:
            raise FormatError(f"WLM1 file has {len(buf)} bytes, expected {expected}: {path}")

        meta = json.loads(buf[pos : pos + meta_len].decode("utf-8"))
        pos += meta_len

        def _read(n):
            nonlocal pos
            arr = np.frombuffer(buf, dtype="<f8", count=n, offset=pos).astype(np.float64)
            pos += 8 * n
            return arr

        weights = _read(classes * dim).reshape(classes, dim)
        bias = _read(classes)
        norm = None
        if nc > 0:
            norm = NormStats(_read(nc), _read(nc), axis)
        logger.info(f"model loaded({time.time() - t0:.1f}s): {path}")
        return LinearModel(weights, bias, norm, meta)


class Gradients(NamedTuple):
    weights: np.ndarray
    bias: np.ndarray


@dataclass(frozen=True, eq=False)
class AdamState:
    m_w: np.ndarray
    v_w: np.ndarray
    m_b: np.ndarray
    v_b: np.ndarray
    step: int = 0
    lr: float = 0.001
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8

    @staticmethod
    def create(model: LinearModel, lr: float = 0.001, beta1: float = 0.9, beta2: float = 0.999, eps: float = 1e-8) -> "AdamState":
        return AdamState(
            np.zeros_like(model.weights),
            np.zeros_like(model.weights),
            np.zeros_like(model.bias),
            np.zeros_like(model.bias),
            0,
            lr,
            beta1,
            beta2,
            eps,
        )


def forward(model: LinearModel, features: np.ndarray) -> np.ndarray:
    """class probabilities [n][classes]"""
    return softmax(model.logits(features))


def predict(model: LinearModel, features: np.ndarray) -> np.ndarray:
    return argmax_lowest(model.logits(features))


def loss_grad(model: LinearModel, features: np.ndarray, labels: np.ndarray):
    """mean softmax cross-entropy and its gradients"""
    x = np.asarray(features, dtype=np.float64)
    y = np.asarray(labels, dtype=np.int64)
    if len(x) != len(y) or len(x) == 0:
        raise ValueError(f"features ({len(x)}) and labels ({len(y)}) must be non-empty and equal length")
    logits = model.logits(x)
    lp = log_softmax(logits)
    loss = float(-np.mean(lp[np.arange(len(y)), y]))
    delta = (np.exp(lp) - one_hot(y, model.classes)) / len(y)  # [n][classes]
    return loss, Gradients(delta.T @ x, delta.sum(axis=0))


def adam_step(model: LinearModel, state: AdamState, grads: Gradients):
    """One bias-corrected Adam update. Returns (model, state)."""
    if grads.weights.shape != model.weights.shape or grads.bias.shape != model.bias.shape:
        raise ValueError(f"gradient shapes {grads.weights.shape}/{grads.bias.shape} do not match the model")
    b1, b2 = state.beta1, state.beta2
    t = state.step + 1

    m_w = b1 * state.m_w + (1 - b1) * grads.weights
    v_w = b2 * state.v_w + (1 - b2) * grads.weights**2
    m_b = b1 * state.m_b + (1 - b1) * grads.bias
    v_b = b2 * state.v_b + (1 - b2) * grads.bias**2

    c1 = 1 - b1**t
    c2 = 1 - b2**t
    w = model.weights - state.lr * (m_w / c1) / (np.sqrt(v_w / c2) + state.eps)
    b = model.bias - state.lr * (m_b / c1) / (np.sqrt(v_b / c2) + state.eps)

    new_state = AdamState(m_w, v_w, m_b, v_b, t, state.lr, b1, b2, state.eps)
    return model.with_params(w, b), new_state
