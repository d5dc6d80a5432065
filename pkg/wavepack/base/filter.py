import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from wavepack.base.exception import InvariantError

logger = logging.getLogger(__name__)

SQRT2 = np.sqrt(2.0)


@dataclass(frozen=True, eq=False)
class WaveletFilter:
    """Orthogonal two-channel filter bank.

    dec_lo/dec_hi are the analysis pair (f_L, f_H), rec_lo/rec_hi the synthesis pair.
    """

    name: str
    dec_lo: np.ndarray
    dec_hi: np.ndarray
    rec_lo: np.ndarray
    rec_hi: np.ndarray

    def __post_init__(self):
        for key in ["dec_lo", "dec_hi", "rec_lo", "rec_hi"]:
            arr = np.array(getattr(self, key), dtype=np.float64)
            arr.flags.writeable = False
            object.__setattr__(self, key, arr)
        self.assert_params()

    def assert_params(self):
        n = len(self.dec_lo)
        assert n >= 2 and n % 2 == 0, f"filter length must be even and >= 2 ({n})"
        for key in ["dec_hi", "rec_lo", "rec_hi"]:
            assert len(getattr(self, key)) == n, f"{key} length differs from dec_lo ({n})"

    @property
    def length(self) -> int:
        return len(self.dec_lo)

    @property
    def degree(self) -> int:
        return len(self.dec_lo) // 2

    def __repr__(self) -> str:
        return f"WaveletFilter({self.name}, N={self.length})"


@dataclass(frozen=True)
class PRCheck:
    max_residual: float
    center_power: int
    center_value: float
    passed: bool


def _modulate(vec: np.ndarray) -> np.ndarray:
    # H(z) -> H(-z)
    return vec * ((-1.0) ** np.arange(len(vec)))


def qmf_complete(dec_lo: Sequence[float], name: str = "custom", tol: float = 1e-10) -> WaveletFilter:
    """Derive the full bank from an orthonormal scaling sequence.

    dec_hi[n] = (-1)^n dec_lo[N-1-n], rec_lo = dec_lo reversed, rec_hi = dec_hi reversed.
    The result satisfies F_L(z) = H_H(-z) and F_H(z) = -H_L(-z).
    """
    h = np.asarray(dec_lo, dtype=np.float64)
    if h.ndim != 1 or len(h) < 2 or len(h) % 2 != 0:
        raise ValueError(f"dec_lo must be a vector of even length ({h.shape})")
    if abs(h.sum() - SQRT2) > tol:
        raise ValueError(f"sum(dec_lo) must be sqrt(2) (sum={h.sum():.12g})")

    g = _modulate(h[::-1])
    bank = WaveletFilter(name, h, g, h[::-1], g[::-1])

    pr = verify_pr(bank, tol)
    alias = verify_alias(bank, tol)
    if not pr.passed or alias > tol:
        raise InvariantError(
            f"'{name}' is not a perfect reconstruction bank (pr residual={pr.max_residual:.3e}, alias residual={alias:.3e})"
        )
    return bank


def verify_pr(filter: WaveletFilter, tol: float = 1e-10) -> PRCheck:
    """Coefficients of H_L(z)F_L(z) + H_H(z)F_H(z) must be 2 at the center power and 0 elsewhere.

    The residual is a floating-point figure: even haar gives about 4e-16, not exactly 0.
    """
    p = np.convolve(filter.dec_lo, filter.rec_lo) + np.convolve(filter.dec_hi, filter.rec_hi)

    # center = largest magnitude, ties toward the middle
    mag = np.round(np.abs(p), 12)
    candidates = np.flatnonzero(mag == mag.max())
    middle = (len(p) - 1) / 2
    c = int(candidates[np.argmin(np.abs(candidates - middle))])

    others = np.delete(p, c)
    residual = abs(p[c] - 2.0)
    if len(others) > 0:
        residual = max(residual, float(np.max(np.abs(others))))
    return PRCheck(float(residual), c, float(p[c]), bool(residual <= tol))


def verify_alias(filter: WaveletFilter, tol: float = 1e-10) -> float:
    """Max magnitude of the coefficients of H_L(-z)F_L(z) + H_H(-z)F_H(z)."""
    p = np.convolve(_modulate(filter.dec_lo), filter.rec_lo) + np.convolve(_modulate(filter.dec_hi), filter.rec_hi)
    residual = float(np.max(np.abs(p)))
    if residual > tol:
        logger.debug(f"alias residual of {filter.name}: {residual:.3e} > {tol:.1e}")
    return residual


def orthonormality_residual(filter: WaveletFilter) -> float:
    """Deviation of the stride-2 autocorrelation of dec_lo from the unit impulse."""
    h = filter.dec_lo
    n = len(h)
    corr = np.correlate(h, h, mode="full")[n - 1 :: 2]
    target = np.zeros_like(corr)
    target[0] = 1.0
    return float(np.max(np.abs(corr - target)))


def qmf_residual(filter: WaveletFilter) -> float:
    """rec_lo[n] = (-1)^n dec_hi[n] and rec_hi[n] = -(-1)^n dec_lo[n]"""
    r1 = np.max(np.abs(filter.rec_lo - _modulate(filter.dec_hi)))
    r2 = np.max(np.abs(filter.rec_hi + _modulate(filter.dec_lo)))
    return float(max(r1, r2))


def _scaling_conditions(h: np.ndarray, vanishing_moments: int):
    """Residuals and Jacobian of: double-shift orthonormality, sum sqrt(2), vanishing moments of the high-pass."""
    n = len(h)
    rows, jac = [], []
    for m in range(n // 2):
        s = 2 * m
        target = 1.0 if m == 0 else 0.0
        rows.append(float(np.dot(h[: n - s], h[s:])) - target)
        j = np.zeros(n)
        j[: n - s] += h[s:]
        j[s:] += h[: n - s]
        jac.append(j)
    rows.append(float(h.sum()) - SQRT2)
    jac.append(np.ones(n))
    sign = (-1.0) ** np.arange(n)
    t = np.arange(n) / (n - 1)
    for p in range(vanishing_moments):
        w = sign * t**p
        rows.append(float(np.dot(w, h)))
        jac.append(w)
    return np.array(rows), np.array(jac)


def refine_scaling_sequence(
    dec_lo: Sequence[float],
    vanishing_moments: int,
    iterations: int = 4,
    max_change: float = 1e-8,
) -> np.ndarray:
    """Polish a tabulated scaling sequence to full double precision by Gauss-Newton.

    The table must already be close to an exact solution; moving further than `max_change` is an error.
    """
    h0 = np.asarray(dec_lo, dtype=np.float64)
    if vanishing_moments < 1 or vanishing_moments > len(h0) // 2:
        raise ValueError(f"vanishing_moments must be in [1, {len(h0) // 2}] ({vanishing_moments})")
    h = h0.copy()
    for _ in range(iterations):
        r, j = _scaling_conditions(h, vanishing_moments)
        if np.max(np.abs(r)) < 1e-15:
            break
        step, *_ = np.linalg.lstsq(j, r, rcond=None)
        h = h - step
    change = float(np.max(np.abs(h - h0)))
    if change > max_change:
        raise InvariantError(f"scaling sequence moved {change:.3e} while refining (> {max_change:.1e})")
    logger.debug(f"refined scaling sequence (N={len(h)}): change {change:.3e}")
    return h
