"""Negative-order Cesaro means, Lp norms, and dyadic moduli of continuity.

The (C,-alpha) mean sigma_n of the quadratic partial sums S_{j,j} is applied
in the spectral domain: a coefficient at (k1, k2) survives in S_{j,j} for
every j > max(k1, k2), so its net multiplier telescopes to
A_{n-1-max}^{-alpha} / A_{n-1}^{-alpha}.  One synthesis replaces the n-term
average; the literal S_{j,j} sum is kept in the test layer as an oracle.

Moduli of continuity are exact: a shift inside I_n permutes level-N cells,
and sampled functions are constant on cells, so the supremum over I_n is the
maximum over the M_N/M_n cells of I_n, enumerated as the multiples of M_n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ResolutionExceededError
from .group import GroupContext, translate_ids
from .kernels import cesaro_numbers
from .transform import SampledFunction2D, SpectralGrid2D, fvt_inverse_2d

__all__ = [
    "CesaroWeights",
    "ModulusReport",
    "MODULUS_KINDS",
    "lp_norm",
    "cesaro_weights",
    "cesaro_mean",
    "shift_representatives",
    "modulus",
]

MODULUS_KINDS = ("omega1", "omega2", "omega12", "total")


def _lp_raw(values: np.ndarray, p: float) -> float:
    if math.isinf(p):
        return float(np.max(np.abs(values)))
    mags = np.abs(values)
    return float(np.mean(mags**p) ** (1.0 / p))


def lp_norm(f: SampledFunction2D, p: float) -> float:
    """Lp norm with the exact cell measure 1/M_N^2; p = inf is the cell maximum."""
    p = float(p)
    if not math.isinf(p) and p < 1.0:
        raise ValueError(f"p must be >= 1 or inf, got {p}")
    return _lp_raw(f.values, p)


@dataclass(frozen=True)
class CesaroWeights:
    """Spectral multipliers of the order-n negative Cesaro mean.

    ``w[mx]`` is applied to every coefficient (k1, k2) with max(k1, k2) = mx
    below n; coefficients at mx >= n are dropped.
    """

    n: int
    alpha: float
    w: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.w, dtype=np.float64)
        arr.flags.writeable = False
        object.__setattr__(self, "w", arr)


def _check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    return alpha


def cesaro_weights(n: int, alpha: float) -> CesaroWeights:
    """Closed-form multipliers A_{n-1-mx}^{-a} / A_{n-1}^{-a} for mx < n."""
    n = int(n)
    if n < 1:
        raise ValueError(f"mean order must be >= 1, got {n}")
    alpha = _check_alpha(alpha)
    table = cesaro_numbers(-alpha, n - 1).values
    return CesaroWeights(n, alpha, table[::-1] / table[n - 1])


def cesaro_mean(grid: SpectralGrid2D, n: int, alpha: float) -> SampledFunction2D:
    """The (C,-alpha) mean of the quadratic partial sums, via one synthesis."""
    size = grid.ctx.size
    n = int(n)
    if n < 1:
        raise ValueError(f"mean order must be >= 1, got {n}")
    if n > size:
        raise ResolutionExceededError(f"mean order {n} exceeds M_N = {size}")
    weights = cesaro_weights(n, alpha).w
    idx = np.maximum.outer(np.arange(size), np.arange(size))
    multiplier = np.where(idx < n, weights[np.minimum(idx, n - 1)], 0.0)
    return fvt_inverse_2d(SpectralGrid2D(grid.ctx, grid.values * multiplier))


def shift_representatives(ctx: GroupContext, level: int) -> np.ndarray:
    """Cell ids of I_level: one representative per level-N cell of the interval."""
    if not 0 <= level <= ctx.level:
        raise ResolutionExceededError(f"level {level} outside 0..{ctx.level}")
    step = ctx.M[level]
    return np.arange(0, ctx.size, step)


@dataclass(frozen=True)
class ModulusReport:
    """One modulus-of-continuity evaluation."""

    kind: str
    level: int
    level2: int | None
    p: float
    value: float


def _axis_modulus(f: SampledFunction2D, level: int, p: float, axis: int) -> float:
    best = 0.0
    for u in shift_representatives(f.ctx, level):
        perm = translate_ids(f.ctx, int(u))
        shifted = f.values[perm, :] if axis == 0 else f.values[:, perm]
        best = max(best, _lp_raw(shifted - f.values, p))
    return best


def _shift_perms(ctx: GroupContext, level: int) -> list[np.ndarray]:
    return [translate_ids(ctx, int(u)) for u in shift_representatives(ctx, level)]


def _mixed_modulus(f: SampledFunction2D, level: int, level2: int, p: float) -> float:
    ctx = f.ctx
    vals = f.values
    best = 0.0
    col_perms = _shift_perms(ctx, level2)
    for pu in _shift_perms(ctx, level):
        row_shift = vals[pu, :]
        for pv in col_perms:
            diff = vals[np.ix_(pu, pv)] - row_shift - vals[:, pv] + vals
            best = max(best, _lp_raw(diff, p))
    return best


def _total_modulus(f: SampledFunction2D, level: int, p: float) -> float:
    ctx = f.ctx
    vals = f.values
    best = 0.0
    perms = _shift_perms(ctx, level)
    for pu in perms:
        for pv in perms:
            diff = vals[np.ix_(pu, pv)] - vals
            best = max(best, _lp_raw(diff, p))
    return best


def modulus(
    f: SampledFunction2D,
    kind: str,
    level: int,
    p: float,
    level2: int | None = None,
) -> ModulusReport:
    """Dyadic modulus of continuity at the given level(s).

    ``omega1``/``omega2`` shift the first/second variable over I_level;
    ``omega12`` is the mixed double difference over I_level x I_level2
    (level2 defaults to level); ``total`` shifts both variables over I_level.
    The supremum is a maximum over shift representatives, exact for sampled
    functions.
    """
    if kind not in MODULUS_KINDS:
        raise ValueError(f"kind must be one of {MODULUS_KINDS}, got {kind!r}")
    if not 0 <= level <= f.ctx.level:
        raise ResolutionExceededError(f"level {level} outside 0..{f.ctx.level}")
    if kind != "omega12":
        if level2 is not None:
            raise ValueError("level2 applies only to the mixed modulus")
        second = None
    else:
        second = level if level2 is None else int(level2)
        if not 0 <= second <= f.ctx.level:
            raise ResolutionExceededError(f"level {second} outside 0..{f.ctx.level}")
    p = float(p)
    if not math.isinf(p) and p < 1.0:
        raise ValueError(f"p must be >= 1 or inf, got {p}")

    if kind == "omega1":
        value = _axis_modulus(f, level, p, axis=0)
    elif kind == "omega2":
        value = _axis_modulus(f, level, p, axis=1)
    elif kind == "omega12":
        value = _mixed_modulus(f, level, second, p)
    else:
        value = _total_modulus(f, level, p)
    return ModulusReport(kind, level, second, p, value)
