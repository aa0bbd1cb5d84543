"""Both sides of the library's target inequalities as exact finite sums.

Every report computes a left side (an exact cell-sum integral or norm), a
right side with the unknown constant stripped out, and their ratio; sweeping
the ratios over parameter grids estimates the constants empirically.  Claim
ids follow the CSV wire format: theorem1/theorem2 for the two approximation
rates of the quadratic-sum Cesaro means, lemma1 (with a lemma0 row for its
one-variable branch) for the normalized Dirichlet quadratic form, lemma4 and
lemma5 for the boundedness and log-growth of the weighted kernel integrals,
and eq23 for the pointwise kernel decay against |u|^(alpha-1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Sequence

import numpy as np

from .approx import cesaro_mean, lp_norm, modulus
from .errors import ResolutionExceededError
from .group import GroupContext, digit_table, index_expand
from .kernels import cesaro_numbers, dirichlet_table, psi_values
from .transform import (
    SampledFunction2D,
    SpectralGrid2D,
    fvt_forward_2d,
    fvt_inverse_2d,
)

__all__ = [
    "RatioReport",
    "TailDecomposition",
    "FunctionFamily",
    "parse_family",
    "tail_decompose",
    "log_factor",
    "lemma1_report",
    "lemma4_values",
    "lemma4_report",
    "lemma5_report",
    "eq23_profile",
    "eq23_report",
    "theorem1_report",
    "theorem2_report",
]

OmegaFn = Callable[[str, int], float]


@dataclass(frozen=True, kw_only=True)
class RatioReport:
    """One verification record: claim, parameter tuple, and lhs/rhs/ratio."""

    claim: str
    family: str = ""
    seed: int | None = None
    alpha: float | None = None
    p: float | None = None
    k: int | None = None
    n: int | None = None
    lhs: float
    rhs: float
    ratio: float

    def with_family(self, family: str, seed: int | None) -> "RatioReport":
        return replace(self, family=family, seed=seed)


def _ratio(lhs: float, rhs: float) -> float:
    if rhs > 0.0:
        return lhs / rhs
    return 0.0 if lhs == 0.0 else math.inf


@dataclass(frozen=True)
class TailDecomposition:
    """Index n split along its nonzero digits, highest level first.

    ``tails[i]`` is the partial index spanned by levels[i..]; tails[0] is n
    itself and each step removes one leading block digits[i] * M_{levels[i]}.
    """

    n: int
    levels: tuple[int, ...]
    digits: tuple[int, ...]
    tails: tuple[int, ...]

    @property
    def s(self) -> int:
        return len(self.levels)


def tail_decompose(ctx: GroupContext, n: int) -> TailDecomposition:
    """Decompose 1 <= n < M_N along its nonzero mixed-radix digits."""
    n = int(n)
    if n == 0:
        raise ValueError("n = 0 has no tail decomposition")
    expansion = index_expand(ctx, n)
    levels = [k for k in range(ctx.level - 1, -1, -1) if expansion.digits[k]]
    digits = [expansion.digits[k] for k in levels]
    tails = []
    rem = n
    for lvl, d in zip(levels, digits):
        tails.append(rem)
        rem -= d * ctx.M[lvl]
    return TailDecomposition(n, tuple(levels), tuple(digits), tuple(tails))


def log_factor(n: int) -> float:
    """Natural log of n, clamped to 1 below n = 3 to avoid a vacuous bound."""
    return math.log(n) if n >= 3 else 1.0


# ---------------------------------------------------------------------------
# function families


@dataclass(frozen=True)
class FunctionFamily:
    """A named generator of 2D sampled test functions.

    Kinds: ``character(a, b)`` is psi_a (x) psi_b(y); ``cylinder(level)`` the
    indicator of I_level(0) x I_level(0); ``random_poly(degree, seed)`` has
    seeded complex Gaussian coefficients below (degree, degree);
    ``random_cell(seed)`` has i.i.d. complex Gaussian cell values.
    """

    kind: str
    params: tuple[int, ...]

    def __post_init__(self) -> None:
        arity = {"character": 2, "cylinder": 1, "random_poly": 2, "random_cell": 1}
        if self.kind not in arity:
            raise ValueError(f"unknown family kind {self.kind!r}")
        if len(self.params) != arity[self.kind]:
            raise ValueError(
                f"{self.kind} takes {arity[self.kind]} parameter(s), got {self.params}"
            )

    @property
    def label(self) -> str:
        return f"{self.kind}({','.join(str(v) for v in self.params)})"

    @property
    def seed(self) -> int | None:
        if self.kind in ("random_poly", "random_cell"):
            return self.params[-1]
        return None

    def build(self, ctx: GroupContext) -> SampledFunction2D:
        size = ctx.size
        if self.kind == "character":
            a, b = self.params
            values = np.outer(psi_values(ctx, a), psi_values(ctx, b))
        elif self.kind == "cylinder":
            (level,) = self.params
            if not 0 <= level <= ctx.level:
                raise ResolutionExceededError(
                    f"cylinder level {level} outside 0..{ctx.level}"
                )
            ids = np.arange(size)
            edge = (ids % ctx.M[level] == 0).astype(np.complex128)
            values = np.outer(edge, edge)
        elif self.kind == "random_poly":
            degree, seed = self.params
            if not 1 <= degree <= size:
                raise ResolutionExceededError(
                    f"degree {degree} outside 1..{size}"
                )
            rng = np.random.default_rng(seed)
            block = rng.standard_normal((degree, degree)) + 1j * rng.standard_normal(
                (degree, degree)
            )
            coeffs = np.zeros((size, size), dtype=np.complex128)
            coeffs[:degree, :degree] = block
            return fvt_inverse_2d(SpectralGrid2D(ctx, coeffs))
        else:
            (seed,) = self.params
            rng = np.random.default_rng(seed)
            values = rng.standard_normal((size, size)) + 1j * rng.standard_normal(
                (size, size)
            )
        return SampledFunction2D(ctx, values)


def parse_family(text: str) -> FunctionFamily:
    """Parse a family label such as ``"random_poly(6,101)"``."""
    text = text.strip()
    if not text.endswith(")") or "(" not in text:
        raise ValueError(f"bad family spec {text!r}")
    kind, _, inner = text[:-1].partition("(")
    try:
        params = tuple(int(tok) for tok in inner.split(",") if tok.strip() != "")
    except ValueError as exc:
        raise ValueError(f"bad family parameters in {text!r}") from exc
    return FunctionFamily(kind.strip(), params)


# ---------------------------------------------------------------------------
# weighted Dirichlet kernel integrals


def _kernel_integrals(ctx: GroupContext, coeffs: np.ndarray) -> tuple[float, float]:
    """Exact integrals of |sum_i c_i D_i(u) D_i(v)| and |sum_i c_i D_i(u)|.

    ``coeffs[i-1]`` multiplies D_i, i = 1..n.
    """
    n = len(coeffs)
    if n > ctx.size:
        raise ResolutionExceededError(f"kernel length {n} exceeds M_N = {ctx.size}")
    rows = dirichlet_table(ctx)[1 : n + 1]
    weighted = coeffs[:, None] * rows
    quad = weighted.T @ rows
    line = coeffs @ rows
    return float(np.mean(np.abs(quad))), float(np.mean(np.abs(line)))


def lemma1_report(
    ctx: GroupContext, coeffs: Sequence[float]
) -> tuple[RatioReport, RatioReport]:
    """Normalized quadratic-form integral against the l2 coefficient bound.

    Returns the two-variable record (claim lemma1) and its one-variable
    specialization (claim lemma0), both over the same coefficients.
    """
    c = np.asarray(coeffs, dtype=np.float64)
    n = len(c)
    if n < 1:
        raise ValueError("coefficient vector must be nonempty")
    quad, line = _kernel_integrals(ctx, c)
    rhs = float(np.sqrt(np.sum(c * c)) / math.sqrt(n))
    lhs2 = quad / n
    lhs1 = line / n
    report2 = RatioReport(claim="lemma1", n=n, lhs=lhs2, rhs=rhs, ratio=_ratio(lhs2, rhs))
    report1 = RatioReport(claim="lemma0", n=n, lhs=lhs1, rhs=rhs, ratio=_ratio(lhs1, rhs))
    return report2, report1


def lemma4_values(
    ctx: GroupContext, alpha: float, k: int, p_values: Sequence[int]
) -> np.ndarray:
    """The kernel integral II at each p: sum to M_k with weights A_{p-i}^{-a-1}."""
    if not 0 <= k <= ctx.level:
        raise ResolutionExceededError(f"level {k} outside 0..{ctx.level}")
    block = ctx.M[k]
    p_list = [int(p) for p in p_values]
    if not p_list:
        raise ValueError("empty p range")
    for p in p_list:
        if p < block:
            raise ValueError(f"p = {p} below M_k = {block}")
    table = cesaro_numbers(-float(alpha) - 1.0, max(p_list) - 1).values
    i = np.arange(1, block + 1)
    out = np.empty(len(p_list), dtype=np.float64)
    for idx, p in enumerate(p_list):
        quad, _ = _kernel_integrals(ctx, table[p - i])
        out[idx] = quad
    return out


def lemma4_report(
    ctx: GroupContext, alpha: float, k: int, p_values: Sequence[int]
) -> RatioReport:
    """Max of II over the p range; the right side is the constant 1."""
    worst = float(np.max(lemma4_values(ctx, alpha, k, p_values)))
    return RatioReport(
        claim="lemma4", alpha=float(alpha), k=int(k), lhs=worst, rhs=1.0,
        ratio=_ratio(worst, 1.0),
    )


def lemma5_report(
    ctx: GroupContext, alpha: float, n: int
) -> tuple[RatioReport, TailDecomposition]:
    """The kernel integral III at order n against the clamped log n.

    Also returns the tail decomposition of n: the proof strategy bounds III
    by a constant per tail, so the tail count s is the structural diagnostic.
    """
    n = int(n)
    if n < 1:
        raise ValueError(f"order must be >= 1, got {n}")
    if n >= ctx.size:
        raise ResolutionExceededError(f"order {n} not below M_N = {ctx.size}")
    table = cesaro_numbers(-float(alpha) - 1.0, n - 1).values
    quad, _ = _kernel_integrals(ctx, table[n - np.arange(1, n + 1)])
    rhs = log_factor(n)
    report = RatioReport(
        claim="lemma5", alpha=float(alpha), n=n, lhs=quad, rhs=rhs,
        ratio=_ratio(quad, rhs),
    )
    return report, tail_decompose(ctx, n)


def _cell_norms(ctx: GroupContext) -> np.ndarray:
    weights = np.array(
        [ctx.size // Mk1 for Mk1 in ctx.M[1:]], dtype=np.int64
    )
    return (weights @ digit_table(ctx)) / ctx.size


def eq23_profile(ctx: GroupContext, alpha: float, n: int) -> np.ndarray:
    """Per-cell values |sum_i A_{n-i}^{-a-1} D_i(u)| * |u|^(1-alpha).

    Entry 0 (the zero cell) is set to 0: the decay bound concerns u != 0.
    """
    n = int(n)
    if n < 1:
        raise ValueError(f"order must be >= 1, got {n}")
    if n >= ctx.size:
        raise ResolutionExceededError(f"order {n} not below M_N = {ctx.size}")
    alpha = float(alpha)
    table = cesaro_numbers(-alpha - 1.0, n - 1).values
    coeffs = table[n - np.arange(1, n + 1)]
    line = coeffs @ dirichlet_table(ctx)[1 : n + 1]
    profile = np.abs(line) * _cell_norms(ctx) ** (1.0 - alpha)
    profile[0] = 0.0
    return profile


def eq23_report(ctx: GroupContext, alpha: float, n: int) -> RatioReport:
    """Empirical constant of the pointwise kernel decay O(|u|^(alpha-1))."""
    worst = float(np.max(eq23_profile(ctx, alpha, n)))
    return RatioReport(
        claim="eq23", alpha=float(alpha), n=int(n), lhs=worst, rhs=1.0,
        ratio=_ratio(worst, 1.0),
    )


# ---------------------------------------------------------------------------
# approximation-rate reports


def _default_omega(f: SampledFunction2D, p: float) -> OmegaFn:
    def omega(kind: str, level: int) -> float:
        return modulus(f, kind, level, p).value

    return omega


def _modulus_rhs(
    ctx: GroupContext, k: int, alpha: float, scale: float, omega: OmegaFn
) -> float:
    rate = ctx.M[k] ** alpha * scale
    rhs = rate * (omega("omega1", k - 1) + omega("omega2", k - 1))
    for r in range(k - 1):
        rhs += ctx.M[r] / ctx.M[k] * (omega("omega1", r) + omega("omega2", r))
    return rhs


def theorem1_report(
    f: SampledFunction2D,
    alpha: float,
    k: int,
    p: float,
    omega_fn: OmegaFn | None = None,
) -> RatioReport:
    """Approximation rate of sigma at order M_k against its modulus bound."""
    ctx = f.ctx
    k = int(k)
    if not 1 <= k <= ctx.level:
        raise ResolutionExceededError(f"level {k} outside 1..{ctx.level}")
    alpha = float(alpha)
    sigma = cesaro_mean(fvt_forward_2d(f), ctx.M[k], alpha)
    lhs = lp_norm(sigma - f, p)
    omega = omega_fn if omega_fn is not None else _default_omega(f, p)
    rhs = _modulus_rhs(ctx, k, alpha, 1.0, omega)
    return RatioReport(
        claim="theorem1", alpha=alpha, p=float(p), k=k, lhs=lhs, rhs=rhs,
        ratio=_ratio(lhs, rhs),
    )


def theorem2_report(
    f: SampledFunction2D,
    alpha: float,
    n: int,
    p: float,
    omega_fn: OmegaFn | None = None,
) -> RatioReport:
    """Approximation rate of sigma at a general order n in [M_k, M_{k+1})."""
    ctx = f.ctx
    n = int(n)
    if n < 2:
        raise ValueError(f"order must be >= 2, got {n}")
    if n >= ctx.size:
        raise ResolutionExceededError(f"order {n} not below M_N = {ctx.size}")
    k = index_expand(ctx, n).order
    if k is None or k < 1:
        raise ValueError(
            f"order {n} sits below M_1 = {ctx.M[1]}; no modulus level is defined"
        )
    alpha = float(alpha)
    sigma = cesaro_mean(fvt_forward_2d(f), n, alpha)
    lhs = lp_norm(sigma - f, p)
    omega = omega_fn if omega_fn is not None else _default_omega(f, p)
    rhs = _modulus_rhs(ctx, k, alpha, log_factor(n), omega)
    return RatioReport(
        claim="theorem2", alpha=alpha, p=float(p), k=k, n=n, lhs=lhs, rhs=rhs,
        ratio=_ratio(lhs, rhs),
    )
