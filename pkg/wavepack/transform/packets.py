import logging
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from wavepack.base.define import BoundaryMode, PacketOrdering
from wavepack.base.filter import WaveletFilter
from wavepack.base.packet import PacketTensor
from wavepack.base.registration import make_filter
from wavepack.runner.pool import parallel_map
from wavepack.transform.matrix import (
    _check_levels_2d,
    analysis_matrix_2d,
    single_scale_matrix_1d,
    wavelet_packet_matrix_2d,
)

logger = logging.getLogger(__name__)

FilterLike = Union[str, WaveletFilter]
ModeLike = Union[str, BoundaryMode]

# [a_J, (h_J, v_J, d_J), ..., (h_1, v_1, d_1)], each [c][h][w]
CoeffList = List[Union[np.ndarray, Tuple[np.ndarray, np.ndarray, np.ndarray]]]


def _as_image(image: np.ndarray) -> np.ndarray:
    x = np.asarray(image, dtype=np.float64)
    if x.ndim == 2:
        x = x[np.newaxis]
    if x.ndim != 3:
        raise ValueError(f"image must be [channels][height][width] ({x.shape})")
    return x


def _apply_axis(mat, x: np.ndarray, axis: int) -> np.ndarray:
    """mat @ x along axis (mat is scipy sparse)."""
    x = np.moveaxis(x, axis, 0)
    shape = x.shape
    y = mat @ x.reshape(shape[0], -1)
    return np.moveaxis(y.reshape((mat.shape[0],) + shape[1:]), 0, axis)


def _analysis_step(nodes: np.ndarray, f: WaveletFilter, mode: BoundaryMode) -> np.ndarray:
    """[..., h, w] -> [..., 4, h/2, w/2] with children in a, h, v, d order."""
    h, w = nodes.shape[-2:]
    t_h = single_scale_matrix_1d(f, h, mode).to_scipy()
    t_w = single_scale_matrix_1d(f, w, mode).to_scipy()
    y = _apply_axis(t_h, nodes, nodes.ndim - 2)
    y = _apply_axis(t_w, y, nodes.ndim - 1)
    h2, w2 = h // 2, w // 2
    return np.stack(
        [
            y[..., :h2, :w2],
            y[..., h2:, :w2],  # high along height
            y[..., :h2, w2:],  # high along width
            y[..., h2:, w2:],
        ],
        axis=-3,
    )


def _synthesis_step(children: np.ndarray, f: WaveletFilter, mode: BoundaryMode) -> np.ndarray:
    """[..., 4, h/2, w/2] -> [..., h, w]"""
    h2, w2 = children.shape[-2:]
    h, w = 2 * h2, 2 * w2
    y = np.empty(children.shape[:-3] + (h, w))
    y[..., :h2, :w2] = children[..., 0, :, :]
    y[..., h2:, :w2] = children[..., 1, :, :]
    y[..., :h2, w2:] = children[..., 2, :, :]
    y[..., h2:, w2:] = children[..., 3, :, :]
    s_h = single_scale_matrix_1d(f, h, mode).to_scipy().T.tocsr()
    s_w = single_scale_matrix_1d(f, w, mode).to_scipy().T.tocsr()
    x = _apply_axis(s_h, y, y.ndim - 2)
    return _apply_axis(s_w, x, y.ndim - 1)


def _check_invertible(f: WaveletFilter, mode: BoundaryMode) -> None:
    if mode == BoundaryMode.truncated and f.length > 2:
        raise ValueError(f"truncated mode is lossy for {f.name} (N={f.length}); use gram_schmidt")


def wpt_2d(
    image: np.ndarray,
    filter: FilterLike,
    level: int,
    mode: ModeLike = BoundaryMode.gram_schmidt,
    ordering: Union[str, PacketOrdering] = PacketOrdering.natural,
) -> PacketTensor:
    """Full 2D packet decomposition. Channels are transformed independently."""
    x = _as_image(image)
    _check_levels_2d(x.shape[1], x.shape[2], level)
    f = make_filter(filter)
    mode = BoundaryMode.from_str(mode)

    nodes = x[np.newaxis]  # [packets][c][h][w]
    for _ in range(level):
        children = _analysis_step(nodes, f, mode)  # [p][c][4][h][w]
        children = np.moveaxis(children, 2, 1)  # [p][4][c][h][w]
        nodes = children.reshape((-1,) + children.shape[2:])
    return PacketTensor(level, nodes).to_ordering(ordering)


def iwpt_2d(
    packets: PacketTensor,
    filter: FilterLike,
    mode: ModeLike = BoundaryMode.gram_schmidt,
) -> np.ndarray:
    """Inverse of wpt_2d, returns [c][h][w]."""
    f = make_filter(filter)
    mode = BoundaryMode.from_str(mode)
    _check_invertible(f, mode)

    nodes = packets.to_ordering(PacketOrdering.natural).data
    for _ in range(packets.level):
        p, c, h, w = nodes.shape
        children = nodes.reshape(p // 4, 4, c, h, w)
        children = np.moveaxis(children, 1, 2)  # [p/4][c][4][h][w]
        nodes = _synthesis_step(children, f, mode)
    return nodes[0]


def wpt_2d_via_operator(
    image: np.ndarray,
    filter: FilterLike,
    level: int,
    mode: ModeLike = BoundaryMode.gram_schmidt,
    ordering: Union[str, PacketOrdering] = PacketOrdering.natural,
) -> PacketTensor:
    """Same result as wpt_2d through the assembled packet operator."""
    x = _as_image(image)
    c, h, w = x.shape
    op = wavelet_packet_matrix_2d(filter, h, w, level, mode)
    y = op.apply(x.reshape(c, h * w).T).T  # [c][h*w]
    s = 2**level
    data = y.reshape(c, 4**level, h // s, w // s).transpose(1, 0, 2, 3)
    return PacketTensor(level, data).to_ordering(ordering)


def fwt_2d(
    image: np.ndarray,
    filter: FilterLike,
    levels: int,
    mode: ModeLike = BoundaryMode.gram_schmidt,
) -> CoeffList:
    """Multi-level transform recursing on the a-band only."""
    x = _as_image(image)
    _check_levels_2d(x.shape[1], x.shape[2], levels)
    f = make_filter(filter)
    mode = BoundaryMode.from_str(mode)

    details = []
    a = x
    for _ in range(levels):
        children = _analysis_step(a, f, mode)  # [c][4][h][w]
        a = children[:, 0]
        details.append((children[:, 1], children[:, 2], children[:, 3]))
    return [a] + details[::-1]


def ifwt_2d(
    coeffs: CoeffList,
    filter: FilterLike,
    mode: ModeLike = BoundaryMode.gram_schmidt,
) -> np.ndarray:
    f = make_filter(filter)
    mode = BoundaryMode.from_str(mode)
    _check_invertible(f, mode)

    a = np.asarray(coeffs[0], dtype=np.float64)
    for h_band, v_band, d_band in coeffs[1:]:
        if np.shape(h_band) != a.shape:
            raise ValueError(f"band shape mismatch {np.shape(h_band)} != {a.shape}")
        children = np.stack([a, h_band, v_band, d_band], axis=1)
        a = _synthesis_step(children, f, mode)
    return a


def fwt_2d_via_operator(
    image: np.ndarray,
    filter: FilterLike,
    levels: int,
    mode: ModeLike = BoundaryMode.gram_schmidt,
) -> np.ndarray:
    """[c][h*w] coefficients in operator layout"""
    x = _as_image(image)
    c, h, w = x.shape
    op = analysis_matrix_2d(filter, h, w, levels, mode)
    return op.apply(x.reshape(c, h * w).T).T


def wpt_2d_batch(
    images: Sequence[np.ndarray],
    filter: FilterLike,
    level: int,
    mode: ModeLike = BoundaryMode.gram_schmidt,
    ordering: Union[str, PacketOrdering] = PacketOrdering.natural,
    threads: Optional[int] = None,
) -> List[PacketTensor]:
    f = make_filter(filter)
    return parallel_map(lambda img: wpt_2d(img, f, level, mode, ordering), images, threads)
