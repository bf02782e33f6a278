"""One period of the walk: the law of S_N and the constants D, M.

Besides the one-period sum, the summary carries the *overshoot table*:
the probability that a period ends at ``S_N = x - y`` although one of the
intermediate prefix sums ``S_1, ..., S_{N-1}`` already exceeded ``x``.
The recursion for the limit law needs it whenever N > 1; it is empty for
N = 1 and for patterns whose minima make the intermediate constraints
redundant.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _numeric
from .errors import ConvolutionError, DNotPositive, ValidationError, ZeroArgument
from .pmf import DEFAULT_TAIL_TOL, DiscretePmf

# |E S_N| below this counts as zero drift
ZERO_DRIFT_TOL = 1e-12


class CaseLabel(enum.Enum):
    ZERO_FUNCTION = "ZeroFunction"
    DEGENERATE_STEP = "DegenerateStep"
    COMPUTABLE_M_LEQ_0 = "ComputableMleq0"
    COMPUTABLE_M_GT_0 = "ComputableMgt0"

    @property
    def computable(self) -> bool:
        return self in (CaseLabel.COMPUTABLE_M_LEQ_0, CaseLabel.COMPUTABLE_M_GT_0)


@dataclass(frozen=True)
class CyclePattern:
    laws: tuple[DiscretePmf, ...]

    def __init__(self, laws: Sequence[DiscretePmf]):
        laws = tuple(laws)
        if not laws:
            raise ValidationError("a cycle pattern needs at least one law")
        for law in laws:
            if not isinstance(law, DiscretePmf):
                raise ValidationError(f"expected DiscretePmf, got {type(law).__name__}")
        object.__setattr__(self, "laws", laws)

    @property
    def N(self) -> int:
        return len(self.laws)

    def law(self, step: int) -> DiscretePmf:
        """Law of X_step (1-based step index)."""
        return self.laws[(step - 1) % len(self.laws)]


@dataclass(frozen=True)
class CycleSummary:
    N: int
    D: int
    M: int
    fN: DiscretePmf
    mean_SN: float
    minima: tuple[int, ...]
    prefix_minima: tuple[int, ...]
    tail_error_total: float
    # overshoot[x - M, y - base] = P(S_N = x - y, max_{k<N} S_k > x)
    overshoot: np.ndarray
    overshoot_reach: int

    @property
    def base(self) -> int:
        """First index of the boundary values: 0 when M <= 0, else M."""
        return max(self.M, 0)

    @property
    def has_overshoot(self) -> bool:
        return self.overshoot.size > 0 and bool(np.any(self.overshoot > 0))

    def f(self, x: int) -> float:
        """P(S_N = x)."""
        return self.fN.prob(x)

    def F(self, x: int) -> float:
        """P(S_N <= x)."""
        return self.fN.cdf(x)

    def overshoot_at(self, x: int, y: int) -> float:
        i, j = x - self.M, y - self.base
        if 0 <= i < self.overshoot.shape[0] and 0 <= j < self.overshoot.shape[1]:
            return float(self.overshoot[i, j])
        return 0.0


def _trim_tail(w: np.ndarray, tol: float) -> tuple[np.ndarray, float]:
    tails = np.cumsum(w[::-1])[::-1]  # tails[i] = sum_{k >= i} w[k]
    keep = len(w)
    while keep > 1 and tails[keep - 1] <= tol:
        keep -= 1
    dropped = float(w[keep:].sum())
    return w[:keep], dropped


def _convolve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    out = np.convolve(a, b)
    neg = out < 0
    if np.any(neg):
        if np.min(out) < -1e-15:
            raise ConvolutionError(f"negative convolution mass {np.min(out):.3e}")
        out[neg] = 0.0
    return out


def _overshoot_table(laws: Sequence[DiscretePmf], M: int, base: int) -> tuple[np.ndarray, int]:
    """Rows x in [M, X*), columns y in [base, R).

    R is the largest y for which some intermediate constraint can still
    bind: S_k <= S_N - (m_{k+1} + ... + m_N), so S_N = x - y with
    y >= -(m_{k+1} + ... + m_N) for every k < N forces S_k <= x.
    """
    N = len(laws)
    if N == 1:
        return np.zeros((0, 0)), base
    mins = [law.min_support for law in laws]
    maxs = [law.max_support for law in laws]
    reach = max(-sum(mins[k:]) for k in range(1, N)) + 1  # R, exclusive
    x_stop = max(sum(maxs[:k]) for k in range(1, N))  # X*
    if reach <= base or x_stop <= M:
        return np.zeros((0, 0)), base
    lo_total = sum(mins)
    table = np.zeros((x_stop - M, reach - base))
    for x in range(M, x_stop):
        alive_lo, alive = 0, np.ones(1)
        dead_lo, dead = 0, np.zeros(1)
        for k in range(N - 1):
            law = laws[k]
            alive = _convolve(alive, law.weights)
            alive_lo += law.min_support
            dead = _convolve(dead, law.weights)
            dead_lo += law.min_support
            cut = x + 1 - alive_lo  # first index with value > x
            if 0 <= cut < len(alive):
                over = alive[cut:].copy()
                alive = alive[:cut]
                # both arrays share the same lower edge here
                pad = np.zeros(max(len(dead), cut + len(over)))
                pad[: len(dead)] += dead
                pad[cut : cut + len(over)] += over
                dead = pad
            elif cut < 0:
                pad = np.zeros(max(len(dead), len(alive)))
                pad[: len(dead)] += dead
                pad[: len(alive)] += alive
                dead, alive = pad, np.zeros(1)
        last = laws[N - 1]
        dead = _convolve(dead, last.weights)
        dead_lo += last.min_support
        assert dead_lo == lo_total
        for y in range(base, reach):
            i = x - y - dead_lo
            if 0 <= i < len(dead):
                table[x - M, y - base] = dead[i]
    return table, reach


def summarize(pattern: CyclePattern, tail_tol: float = DEFAULT_TAIL_TOL) -> CycleSummary:
    """Convolve one period into the law of S_N and collect D, M, E S_N.

    A non-positive D is not raised here; ``classify`` deals with it.
    """
    laws = pattern.laws
    minima = tuple(law.min_support for law in laws)
    prefix = tuple(int(v) for v in np.cumsum(minima))
    D = -prefix[-1]
    M = max(prefix)

    w = np.ones(1)
    for law in laws:
        w = _convolve(w, law.weights)
    w, dropped = _trim_tail(w, tail_tol)
    w = w / w.sum()
    fN = DiscretePmf(-D, w, dropped, name="S_N")
    mean_SN = float(np.dot(fN.support, w))
    tail_total = dropped + sum(law.tail_error for law in laws)

    base = max(M, 0)
    if D > 0:
        table, reach = _overshoot_table(laws, M, base)
    else:
        table, reach = np.zeros((0, 0)), base
    table.setflags(write=False)
    return CycleSummary(
        N=len(laws),
        D=D,
        M=M,
        fN=fN,
        mean_SN=mean_SN,
        minima=minima,
        prefix_minima=prefix,
        tail_error_total=float(tail_total),
        overshoot=table,
        overshoot_reach=reach,
    )


def eval_GN(summary: CycleSummary, s: complex, order: int = 0) -> complex:
    """order-th derivative of G_N(s) = sum_j f_N(j) s^j."""
    if s == 0:
        raise ZeroArgument("G_N has a pole at s = 0")
    if order < 0:
        raise ValueError("derivative order must be non-negative")
    return _numeric.laurent_derivative(summary.fN.weights.tolist(), -summary.D, s, order)


def _is_point_mass_at_zero(summary: CycleSummary) -> bool:
    if summary.fN.min_support > 0 or summary.fN.max_support < 0:
        return False
    return abs(summary.fN.prob(0) - 1.0) <= 1e-12


def classify(summary: CycleSummary) -> CaseLabel:
    mu = summary.mean_SN
    if _is_point_mass_at_zero(summary):
        return CaseLabel.DEGENERATE_STEP
    if mu > ZERO_DRIFT_TOL or abs(mu) <= ZERO_DRIFT_TOL:
        return CaseLabel.ZERO_FUNCTION
    if summary.D <= 0:
        raise DNotPositive(
            f"negative drift {mu:g} with D = {summary.D}; the summary is inconsistent"
        )
    if summary.M <= 0:
        return CaseLabel.COMPUTABLE_M_LEQ_0
    return CaseLabel.COMPUTABLE_M_GT_0
