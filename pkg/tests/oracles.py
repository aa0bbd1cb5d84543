"""Independent reference implementations used only as test oracles.

Each oracle deliberately avoids the library code path it checks: transforms
are plain character-matrix sums, moduli enumerate shifts by literal element
arithmetic, the gamma function is a standalone Lanczos evaluation, and the
telescoped Cesaro sums are re-done term by term in 80-bit precision.
"""

from __future__ import annotations

import math

import numpy as np

from vilenkin.group import GroupContext, add, cell_enumerate, cell_id, in_interval
from vilenkin.kernels import character_table, cesaro_numbers
from vilenkin.transform import SpectralGrid2D, partial_sum_rect


def naive_forward_1d(ctx: GroupContext, values: np.ndarray) -> np.ndarray:
    """O(M^2) coefficient sum straight from the character matrix."""
    chars = character_table(ctx)
    return chars.conj() @ values / ctx.size


def naive_forward_2d(ctx: GroupContext, values: np.ndarray) -> np.ndarray:
    chars = character_table(ctx)
    return chars.conj() @ values @ chars.conj().T / ctx.size**2


def naive_inverse_1d(ctx: GroupContext, coeffs: np.ndarray) -> np.ndarray:
    chars = character_table(ctx)
    return chars.T @ coeffs


def block_average(ctx: GroupContext, values: np.ndarray, k: int) -> np.ndarray:
    """Conditional expectation of a 2D grid on level-k cell pairs.

    Cells of I_k(x) are the ids congruent to x modulo M_k, so averaging the
    reshaped (high, low, high, low) axes over the high digits and tiling back
    realizes the projection that the partial sum S_{M_k,M_k} must equal.
    """
    Mk = ctx.M[k]
    q = ctx.size // Mk
    blocks = values.reshape(q, Mk, q, Mk).mean(axis=(0, 2))
    return np.tile(blocks, (q, q))


def brute_lp(values: np.ndarray, p: float) -> float:
    mags = np.abs(values)
    if math.isinf(p):
        return float(mags.max())
    return float((mags**p).mean() ** (1.0 / p))


def brute_shift_perms(ctx: GroupContext, level: int) -> list[np.ndarray]:
    """Shift permutations for every cell of I_level, via element arithmetic."""
    cells = cell_enumerate(ctx)
    perms = []
    for u in cells:
        if in_interval(ctx, u, level):
            perms.append(np.array([cell_id(ctx, add(ctx, x, u)) for x in cells]))
    return perms


def brute_modulus(
    ctx: GroupContext,
    values: np.ndarray,
    kind: str,
    level: int,
    p: float,
    level2: int | None = None,
) -> float:
    """Exhaustive modulus over all shifts in the base interval(s)."""
    perms1 = brute_shift_perms(ctx, level)
    best = 0.0
    if kind == "omega1":
        for pu in perms1:
            best = max(best, brute_lp(values[pu, :] - values, p))
    elif kind == "omega2":
        for pv in perms1:
            best = max(best, brute_lp(values[:, pv] - values, p))
    elif kind == "omega12":
        perms2 = brute_shift_perms(ctx, level if level2 is None else level2)
        for pu in perms1:
            for pv in perms2:
                diff = (
                    values[np.ix_(pu, pv)]
                    - values[pu, :]
                    - values[:, pv]
                    + values
                )
                best = max(best, brute_lp(diff, p))
    elif kind == "total":
        for pu in perms1:
            for pv in perms1:
                best = max(best, brute_lp(values[np.ix_(pu, pv)] - values, p))
    else:
        raise ValueError(f"unknown kind {kind!r}")
    return best


# Lanczos approximation (g = 7, 9 terms), written against the published
# coefficients; the only stdlib calls are sqrt/exp/pow/sin.
_LANCZOS_G = 7.0
_LANCZOS_COEFFS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def lanczos_gamma(x: float) -> float:
    if x < 0.5:
        return math.pi / (math.sin(math.pi * x) * lanczos_gamma(1.0 - x))
    x -= 1.0
    acc = _LANCZOS_COEFFS[0]
    for i in range(1, len(_LANCZOS_COEFFS)):
        acc += _LANCZOS_COEFFS[i] / (x + i)
    t = x + _LANCZOS_G + 0.5
    return math.sqrt(2.0 * math.pi) * t ** (x + 0.5) * math.exp(-t) * acc


def longdouble_cesaro(beta: float, length: int) -> np.ndarray:
    """A_n^beta table in 80-bit precision for cancellation-heavy sums."""
    n = np.arange(1, length + 1, dtype=np.longdouble)
    values = np.ones(length + 1, dtype=np.longdouble)
    if length:
        np.cumprod((np.longdouble(beta) + n) / n, out=values[1:])
    return values


def direct_cesaro_weights(n: int, alpha: float) -> np.ndarray:
    """Weights from the literal sum over mean orders, not the closed form.

    w[mx] = (sum_{j=mx+1}^{n} A_{n-j}^{-alpha-1}) / A_{n-1}^{-alpha}, with the
    numerator summed in 80-bit precision (the partial sums cancel from 1 down
    to ~n^-alpha, which double precision cannot survive at 1e-12 accuracy).
    The denominator is the library's own, so the comparison isolates the
    numerator identity.
    """
    tail = longdouble_cesaro(-alpha - 1.0, n - 1)
    prefix = np.cumsum(tail)
    denominator = cesaro_numbers(-alpha, n - 1)[n - 1]
    return np.asarray(prefix[::-1], dtype=np.float64) / denominator


def direct_cesaro_mean(grid: SpectralGrid2D, n: int, alpha: float) -> np.ndarray:
    """Literal weighted sum of the quadratic partial sums S_{j,j}."""
    weights = cesaro_numbers(-alpha - 1.0, n - 1)
    denominator = cesaro_numbers(-alpha, n - 1)[n - 1]
    acc = np.zeros_like(grid.values)
    for j in range(1, n + 1):
        acc = acc + weights[n - j] * partial_sum_rect(grid, j, j).values
    return acc / denominator
