"""Exact digit arithmetic for truncated bounded Vilenkin groups.

A group is described by a finite generating sequence m = (m_0, ..., m_{N-1})
with every m_k >= 2.  Elements are digit vectors added coordinatewise modulo
m_k, and the scale table M_0 = 1, M_{k+1} = m_k * M_k turns digit vectors
into cell ids: cell i is the element whose mixed-radix digits are the digits
of i.  Working at a fixed truncation level N makes every integral in the
library an exact finite sum over the M_N level-N cells.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import InvalidElementError, ResolutionExceededError

__all__ = [
    "GroupContext",
    "GroupElement",
    "IndexExpansion",
    "add",
    "negate",
    "sub",
    "index_expand",
    "index_compose",
    "norm_map",
    "in_interval",
    "cell_enumerate",
    "cell_id",
    "digit_table",
    "translate_ids",
]


@dataclass(frozen=True)
class GroupContext:
    """Generating sequence m plus the derived mixed-radix scale table M."""

    m: tuple[int, ...]
    M: tuple[int, ...] = field(init=False)

    def __post_init__(self) -> None:
        gens = tuple(int(v) for v in self.m)
        if not gens:
            raise ValueError("generator sequence must be nonempty")
        if any(v < 2 for v in gens):
            raise ValueError(f"every generator must be >= 2, got {gens}")
        scale = [1]
        for v in gens:
            scale.append(scale[-1] * v)
        object.__setattr__(self, "m", gens)
        object.__setattr__(self, "M", tuple(scale))

    @classmethod
    def from_string(cls, text: str) -> "GroupContext":
        """Parse a comma-separated generator list such as ``"2,3,2,3"``."""
        parts = [chunk.strip() for chunk in text.split(",") if chunk.strip()]
        if not parts:
            raise ValueError("empty generator sequence")
        try:
            gens = tuple(int(p) for p in parts)
        except ValueError as exc:
            raise ValueError(f"bad generator list {text!r}") from exc
        return cls(gens)

    @property
    def level(self) -> int:
        """Truncation level N (number of retained coordinates)."""
        return len(self.m)

    @property
    def size(self) -> int:
        """Number of level-N cells, M_N."""
        return self.M[-1]

    def truncate(self, level: int) -> "GroupContext":
        """Context for the first ``level`` coordinates of this group."""
        if not 1 <= level <= self.level:
            raise ValueError(f"level must be in 1..{self.level}, got {level}")
        return GroupContext(self.m[:level])

    def zero(self) -> "GroupElement":
        return GroupElement((0,) * self.level)

    def unit(self, n: int) -> "GroupElement":
        """The element e_n with digit 1 at coordinate n and 0 elsewhere."""
        if not 0 <= n < self.level:
            raise ResolutionExceededError(
                f"coordinate {n} outside truncation level {self.level}"
            )
        digits = [0] * self.level
        digits[n] = 1
        return GroupElement(tuple(digits))

    def element(self, digits) -> "GroupElement":
        """Validated element from an iterable of digits."""
        x = GroupElement(tuple(int(d) for d in digits))
        _check_element(self, x)
        return x


@dataclass(frozen=True)
class GroupElement:
    """A group element as a digit vector truncated to N coordinates."""

    digits: tuple[int, ...]


@dataclass(frozen=True)
class IndexExpansion:
    """Mixed-radix digits of an index n together with its order |n|.

    ``order`` is the largest coordinate with a nonzero digit; it is None for
    n = 0, where the order is undefined.
    """

    n: int
    digits: tuple[int, ...]
    order: int | None


def _check_element(ctx: GroupContext, x: GroupElement) -> None:
    if len(x.digits) != ctx.level:
        raise InvalidElementError(
            f"element has {len(x.digits)} digits, expected {ctx.level}"
        )
    for k, (d, mk) in enumerate(zip(x.digits, ctx.m)):
        if not 0 <= d < mk:
            raise InvalidElementError(f"digit {d} at coordinate {k} not in 0..{mk - 1}")


def add(ctx: GroupContext, x: GroupElement, y: GroupElement) -> GroupElement:
    """Coordinatewise sum (x_k + y_k) mod m_k."""
    _check_element(ctx, x)
    _check_element(ctx, y)
    return GroupElement(
        tuple((a + b) % mk for a, b, mk in zip(x.digits, y.digits, ctx.m))
    )


def negate(ctx: GroupContext, x: GroupElement) -> GroupElement:
    """Group inverse: digit k becomes (m_k - x_k) mod m_k."""
    _check_element(ctx, x)
    return GroupElement(tuple((mk - a) % mk for a, mk in zip(x.digits, ctx.m)))


def sub(ctx: GroupContext, x: GroupElement, y: GroupElement) -> GroupElement:
    return add(ctx, x, negate(ctx, y))


def index_expand(ctx: GroupContext, n: int) -> IndexExpansion:
    """Mixed-radix digits of n with respect to the scale table M.

    The digits satisfy n = sum_j digits[j] * M_j exactly, and the order is
    the position of the leading nonzero digit, so M_|n| <= n < M_{|n|+1}.
    """
    n = int(n)
    if n < 0:
        raise ValueError(f"index must be nonnegative, got {n}")
    if n >= ctx.size:
        raise ResolutionExceededError(f"index {n} >= M_N = {ctx.size}")
    digits = []
    rem = n
    for mk in ctx.m:
        rem, d = divmod(rem, mk)
        digits.append(d)
    order = max((k for k, d in enumerate(digits) if d), default=None)
    return IndexExpansion(n, tuple(digits), order)


def index_compose(ctx: GroupContext, digits) -> int:
    """Inverse of :func:`index_expand`: sum of digits[j] * M_j."""
    digits = tuple(int(d) for d in digits)
    if len(digits) != ctx.level:
        raise ValueError(f"expected {ctx.level} digits, got {len(digits)}")
    return sum(d * Mk for d, Mk in zip(digits, ctx.M))


def norm_map(ctx: GroupContext, x: GroupElement) -> float:
    """The value |x| = sum_j x_j / M_{j+1}, an exact multiple of 1/M_N."""
    _check_element(ctx, x)
    total = ctx.size
    num = sum(d * (total // Mk1) for d, Mk1 in zip(x.digits, ctx.M[1:]))
    return num / total


def in_interval(
    ctx: GroupContext, x: GroupElement, n: int, center: GroupElement | None = None
) -> bool:
    """Whether x lies in the base interval I_n(center).

    I_n(center) is the set of elements agreeing with ``center`` on the first
    n digits; I_0 is the whole group and ``center`` defaults to 0.
    """
    if not 0 <= n <= ctx.level:
        raise ResolutionExceededError(f"level {n} outside 0..{ctx.level}")
    _check_element(ctx, x)
    if center is None:
        center = ctx.zero()
    else:
        _check_element(ctx, center)
    return x.digits[:n] == center.digits[:n]


def cell_id(ctx: GroupContext, x: GroupElement) -> int:
    """Canonical id of the level-N cell of x."""
    _check_element(ctx, x)
    return index_compose(ctx, x.digits)


def cell_enumerate(ctx: GroupContext) -> list[GroupElement]:
    """All M_N level-N cells in canonical id order."""
    return [GroupElement(index_expand(ctx, i).digits) for i in range(ctx.size)]


@lru_cache(maxsize=32)
def digit_table(ctx: GroupContext) -> np.ndarray:
    """(N, M_N) array whose column j holds the digits of cell id j."""
    ids = np.arange(ctx.size)
    table = np.empty((ctx.level, ctx.size), dtype=np.int64)
    for t, (mk, Mk) in enumerate(zip(ctx.m, ctx.M)):
        table[t] = (ids // Mk) % mk
    table.flags.writeable = False
    return table


def translate_ids(ctx: GroupContext, shift: GroupElement | int) -> np.ndarray:
    """Permutation of cell ids induced by adding ``shift`` to every cell."""
    if isinstance(shift, GroupElement):
        _check_element(ctx, shift)
        sdig = shift.digits
    else:
        sdig = index_expand(ctx, int(shift)).digits
    table = digit_table(ctx)
    mvec = np.array(ctx.m, dtype=np.int64)[:, None]
    shifted = (table + np.array(sdig, dtype=np.int64)[:, None]) % mvec
    weights = np.array(ctx.M[:-1], dtype=np.int64)
    return weights @ shifted
