"""Characters, Dirichlet kernels, and generalized binomial numbers.

The character psi_n is the product over coordinates of powers of the
generalized Rademacher functions r_k(x) = exp(2*pi*i*x_k/m_k); Dirichlet
kernels are the partial sums D_n = sum_{k<n} psi_k, with D_0 taken as the
empty sum so the reflection identity below holds at its boundary.  The
generalized binomial numbers A_n^beta = (beta+1)...(beta+n)/n! drive the
negative-order Cesaro means; they are computed by the multiplicative
recurrence A_n = A_{n-1} * (beta+n)/n in double precision.

Identity checkers return max-absolute residuals rather than booleans; the
tolerance policy lives in the callers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ResolutionExceededError
from .group import GroupContext, GroupElement, _check_element, digit_table, index_expand

__all__ = [
    "CesaroNumberTable",
    "unit_roots",
    "rademacher",
    "psi",
    "psi_values",
    "character_table",
    "dirichlet",
    "dirichlet_table",
    "cesaro_numbers",
    "compensated_cumsum",
    "lemma2_check",
    "paley_check",
    "eq1_residual",
    "eq2_residual",
    "eq3_residual",
    "eq4_residual",
]

MAX_TABLE_LENGTH = 10**6

_SQRT3_HALF = math.sqrt(3.0) / 2.0


def _root_fraction(num: int, den: int) -> complex:
    """exp(2*pi*i*num/den) with exact components where they exist.

    Angles whose reduced denominator divides 4 or 6 have cosine/sine pairs
    representable exactly (0, +-1, +-1/2); using those keeps the column sums
    of small butterfly tables identically zero, so transforms of constant
    input produce exact zero coefficients.
    """
    num %= den
    g = math.gcd(num, den) or 1
    num, den = num // g, den // g
    if den == 1:
        return complex(1.0, 0.0)
    if den == 2:
        return complex(-1.0, 0.0)
    if den == 4:
        return complex(0.0, 1.0) if num == 1 else complex(0.0, -1.0)
    if den == 3:
        return complex(-0.5, _SQRT3_HALF if num == 1 else -_SQRT3_HALF)
    if den == 6:
        return complex(0.5, _SQRT3_HALF if num == 1 else -_SQRT3_HALF)
    angle = 2.0 * math.pi * num / den
    return complex(math.cos(angle), math.sin(angle))


@lru_cache(maxsize=None)
def unit_roots(m: int) -> np.ndarray:
    """The m-th roots of unity exp(2*pi*i*j/m), conjugate-symmetric by construction."""
    roots = np.empty(m, dtype=np.complex128)
    for j in range(m // 2 + 1):
        roots[j] = _root_fraction(j, m)
    for j in range(m // 2 + 1, m):
        roots[j] = roots[m - j].conjugate()
    roots.flags.writeable = False
    return roots


def rademacher(ctx: GroupContext, k: int, x: GroupElement) -> complex:
    """Generalized Rademacher value r_k(x) = exp(2*pi*i*x_k/m_k)."""
    if not 0 <= k < ctx.level:
        raise ResolutionExceededError(f"coordinate {k} outside 0..{ctx.level - 1}")
    _check_element(ctx, x)
    return complex(unit_roots(ctx.m[k])[x.digits[k]])


def psi(ctx: GroupContext, n: int, x: GroupElement) -> complex:
    """Character value psi_n(x), the product of r_k(x)**n_k over coordinates."""
    nd = index_expand(ctx, n).digits
    _check_element(ctx, x)
    out = complex(1.0, 0.0)
    for mk, d, xk in zip(ctx.m, nd, x.digits):
        if d:
            out *= complex(unit_roots(mk)[(d * xk) % mk])
    return out


def psi_values(ctx: GroupContext, n: int) -> np.ndarray:
    """psi_n evaluated on every level-N cell, indexed by cell id."""
    nd = index_expand(ctx, n).digits
    table = digit_table(ctx)
    out = np.ones(ctx.size, dtype=np.complex128)
    for t, (mk, d) in enumerate(zip(ctx.m, nd)):
        if d:
            out *= unit_roots(mk)[(d * table[t]) % mk]
    return out


@lru_cache(maxsize=8)
def character_table(ctx: GroupContext) -> np.ndarray:
    """(M_N, M_N) matrix with entry [n, j] = psi_n(cell j).

    Built as the Kronecker product of the per-coordinate root tables, which
    matches the mixed-radix linearization of both indices.
    """
    table = np.ones((1, 1), dtype=np.complex128)
    for mk in ctx.m:
        roots = unit_roots(mk)
        stage = roots[np.outer(np.arange(mk), np.arange(mk)) % mk]
        table = np.kron(stage, table)
    table.flags.writeable = False
    return table


@lru_cache(maxsize=8)
def dirichlet_table(ctx: GroupContext) -> np.ndarray:
    """(M_N + 1, M_N) matrix whose row n is the Dirichlet kernel D_n on all cells.

    Row 0 is the empty sum; row n is the cumulative sum of the first n
    characters, so requesting the full table costs O(M_N) per cell.
    """
    chars = character_table(ctx)
    out = np.zeros((ctx.size + 1, ctx.size), dtype=np.complex128)
    np.cumsum(chars, axis=0, out=out[1:])
    out.flags.writeable = False
    return out


def dirichlet(ctx: GroupContext, n: int, x: GroupElement) -> complex:
    """Pointwise Dirichlet kernel D_n(x) = sum_{k<n} psi_k(x).

    Convenience for single evaluations; bulk work should go through
    :func:`dirichlet_table`.
    """
    n = int(n)
    if n < 0 or n > ctx.size:
        raise ResolutionExceededError(f"kernel index {n} outside 0..{ctx.size}")
    _check_element(ctx, x)
    return complex(sum(psi(ctx, k, x) for k in range(n)))


@dataclass(frozen=True)
class CesaroNumberTable:
    """Values A_0^beta .. A_L^beta of the generalized binomial numbers."""

    beta: float
    values: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.values, dtype=np.float64)
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, n: int) -> float:
        return float(self.values[n])


def cesaro_numbers(beta: float, length: int) -> CesaroNumberTable:
    """Table of A_n^beta for n = 0..length via the multiplicative recurrence."""
    length = int(length)
    if length < 0:
        raise ValueError(f"table length must be nonnegative, got {length}")
    if length > MAX_TABLE_LENGTH:
        raise ValueError(
            f"table length {length} exceeds the double-precision budget "
            f"({MAX_TABLE_LENGTH})"
        )
    beta = float(beta)
    if not math.isfinite(beta):
        raise ValueError(f"exponent must be finite, got {beta}")
    n = np.arange(1, length + 1, dtype=np.float64)
    values = np.ones(length + 1, dtype=np.float64)
    if length:
        np.cumprod((beta + n) / n, out=values[1:])
    return CesaroNumberTable(beta, values)


def compensated_cumsum(values: np.ndarray) -> np.ndarray:
    """Prefix sums with Neumaier compensation.

    The uncompensated prefix sums of A_n^{beta-1} lose enough bits through
    cancellation to spoil a 1e-12 recurrence check near n = 10^4; the
    compensated version keeps every prefix accurate to a few ulps.
    """
    out = np.empty(len(values), dtype=np.float64)
    total = 0.0
    comp = 0.0
    for i, v in enumerate(np.asarray(values, dtype=np.float64)):
        t = total + v
        if abs(total) >= abs(v):
            comp += (total - t) + v
        else:
            comp += (v - t) + total
        total = t
        out[i] = total + comp
    return out


def lemma2_check(ctx: GroupContext, s: int, n_s: int, j: int) -> float:
    """Max residual of the kernel reflection identity on every cell.

    For 0 < n_s < m_s and 0 <= j <= n_s*M_s, checks
    D_{n_s*M_s - j} = D_{n_s*M_s} - psi_{n_s*M_s - 1} * conj(D_j).
    """
    if not 0 <= s < ctx.level:
        raise ResolutionExceededError(f"level {s} outside 0..{ctx.level - 1}")
    if not 0 < n_s < ctx.m[s]:
        raise ValueError(f"digit {n_s} not in 1..{ctx.m[s] - 1}")
    block = n_s * ctx.M[s]
    if not 0 <= j <= block:
        raise ValueError(f"offset {j} not in 0..{block}")
    kern = dirichlet_table(ctx)
    rhs = kern[block] - psi_values(ctx, block - 1) * kern[j].conj()
    return float(np.max(np.abs(kern[block - j] - rhs)))


def paley_check(
    ctx: GroupContext, level: int, digit: int, j: int, block_form: bool = False
) -> float:
    """Max residual of the Paley shift decomposition on every cell.

    Direct form: D_{j + digit*M_level} = D_{digit*M_level} + psi_{digit*M_level} * D_j.
    Block form (``block_form=True``): the same left side against
    (sum_{q<digit} psi_{M_level}^q) * D_{M_level} + psi_{M_level}^digit * D_j.
    Requires 0 <= j < M_level and 0 <= digit < m_level.
    """
    if not 0 <= level < ctx.level:
        raise ResolutionExceededError(f"level {level} outside 0..{ctx.level - 1}")
    if not 0 <= digit < ctx.m[level]:
        raise ValueError(f"digit {digit} not in 0..{ctx.m[level] - 1}")
    if not 0 <= j < ctx.M[level]:
        raise ValueError(f"offset {j} not in 0..{ctx.M[level] - 1}")
    kern = dirichlet_table(ctx)
    base = digit * ctx.M[level]
    lhs = kern[j + base]
    if block_form:
        geom = np.zeros(ctx.size, dtype=np.complex128)
        for q in range(digit):
            geom += psi_values(ctx, q * ctx.M[level])
        rhs = geom * kern[ctx.M[level]] + psi_values(ctx, base) * kern[j]
    else:
        rhs = kern[base] + psi_values(ctx, base) * kern[j]
    return float(np.max(np.abs(lhs - rhs)))


def eq1_residual(ctx: GroupContext, k: int) -> float:
    """Max residual of D_{M_k} = M_k * indicator(I_k) on every cell."""
    if not 0 <= k <= ctx.level:
        raise ResolutionExceededError(f"level {k} outside 0..{ctx.level}")
    kern = dirichlet_table(ctx)
    ids = np.arange(ctx.size)
    indicator = (ids % ctx.M[k] == 0).astype(np.float64)
    return float(np.max(np.abs(kern[ctx.M[k]] - ctx.M[k] * indicator)))


def eq2_residual(beta: float, length: int) -> float:
    """Max relative residual of A_n^beta = sum_{k<=n} A_k^{beta-1}.

    Relative to the largest magnitude entering each instance of the identity
    (the running max of the summands and the left side).  The telescoped sum
    crosses through O(1) on its way down to values as small as ~1e-13, so a
    residual relative to the tiny endpoint would measure nothing but the
    condition number of the cancellation; relative to the data scale it
    measures the accuracy of the tables, which is the contract.
    """
    direct = cesaro_numbers(beta, length).values
    summands = cesaro_numbers(beta - 1.0, length).values
    summed = compensated_cumsum(summands)
    scale = np.maximum.accumulate(np.abs(summands))
    denom = np.maximum(np.abs(direct), scale)
    return float(np.max(np.abs(direct - summed) / denom))


def eq3_residual(beta: float, length: int) -> float:
    """Max relative residual of A_n^beta - A_{n-1}^beta = A_n^{beta-1}."""
    upper = cesaro_numbers(beta, length).values
    lower = cesaro_numbers(beta - 1.0, length).values
    diff = upper[1:] - upper[:-1]
    denom = np.maximum(np.maximum(np.abs(upper[1:]), np.abs(lower[1:])),
                       np.finfo(np.float64).tiny)
    return float(np.max(np.abs(diff - lower[1:]) / denom))


def eq4_residual(alpha: float, n: int = 10_000) -> float:
    """Gap |A_n^alpha * n^(-alpha) - 1/Gamma(alpha+1)| at a single n."""
    value = cesaro_numbers(alpha, n)[n]
    return abs(value * n ** (-alpha) - 1.0 / math.gamma(alpha + 1.0))
