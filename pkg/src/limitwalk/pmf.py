"""Integer-valued distributions with a finite lower support bound."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.special import pdtrc

from .errors import (
    EmptyWeights,
    InvalidParameter,
    NegativeWeight,
    ZeroMassAtMinimum,
    ZeroTotalMass,
)

DEFAULT_TAIL_TOL = 1e-12


@dataclass(frozen=True)
class DiscretePmf:
    """P(X = min_support + i) = weights[i].

    ``tail_error`` is the upper-tail mass dropped by truncation before
    the table was renormalized.  Instances are immutable; the weight
    array is flagged read-only.
    """

    min_support: int
    weights: np.ndarray
    tail_error: float = 0.0
    name: str = field(default="", compare=False)

    def __post_init__(self):
        w = np.array(self.weights, dtype=np.float64)
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "min_support", int(self.min_support))

    @property
    def max_support(self) -> int:
        return self.min_support + len(self.weights) - 1

    @property
    def support(self) -> np.ndarray:
        return np.arange(self.min_support, self.max_support + 1)

    def prob(self, x: int) -> float:
        i = x - self.min_support
        if 0 <= i < len(self.weights):
            return float(self.weights[i])
        return 0.0

    def cdf(self, x: int) -> float:
        i = x - self.min_support
        if i < 0:
            return 0.0
        return float(min(1.0, self.weights[: i + 1].sum()))

    def mean(self) -> float:
        return mean(self)

    def __len__(self) -> int:
        return len(self.weights)


def _validate_tol(tol: float) -> None:
    if not (0.0 < tol < 1.0):
        raise InvalidParameter(f"truncation tolerance must lie in (0, 1), got {tol!r}")


def from_weights(min_support: int, weights: Sequence[float], *, name: str = "") -> DiscretePmf:
    """Normalized law from a raw weight table starting at ``min_support``."""
    w = np.asarray(weights, dtype=np.float64)
    if w.ndim != 1 or w.size == 0:
        raise EmptyWeights("weights must be a non-empty 1-D sequence")
    if not np.all(np.isfinite(w)):
        raise NegativeWeight("weights must be finite")
    if np.any(w < 0):
        raise NegativeWeight(f"negative weight at index {int(np.argmin(w))}")
    total = w.sum()
    if total <= 0:
        raise ZeroTotalMass("weights sum to zero")
    if w[0] <= 0:
        raise ZeroMassAtMinimum(
            f"P(X = {min_support}) must be positive; the minimum of the support "
            "has to carry mass"
        )
    # trailing zeros carry no information and would inflate downstream tables
    last = int(np.flatnonzero(w)[-1])
    w = w[: last + 1]
    if total != 1.0:
        w = w / total
    return DiscretePmf(int(min_support), w, 0.0, name=name)


def geometric(p: float, tol: float = DEFAULT_TAIL_TOL) -> DiscretePmf:
    """P(X = k) = p (1-p)^(k-1) for k >= 1, truncated at tail mass <= tol."""
    _validate_tol(tol)
    if not (0.0 < p < 1.0):
        raise InvalidParameter(f"geometric parameter must lie in (0, 1), got {p!r}")
    q = 1.0 - p
    # smallest K with q^(K+1) <= tol
    k_max = 0 if q <= tol else max(0, math.ceil(math.log(tol) / math.log(q)) - 1)
    while q ** (k_max + 1) > tol:
        k_max += 1
    i = np.arange(k_max + 1)
    w = p * q**i
    tail = q ** (k_max + 1)
    return DiscretePmf(1, w / w.sum(), float(tail), name=f"geometric({p:g})")


def shifted_poisson(lam: float, shift: int = 0, tol: float = DEFAULT_TAIL_TOL) -> DiscretePmf:
    """Law of Poisson(lam) + shift, truncated at tail mass <= tol."""
    _validate_tol(tol)
    if not (lam > 0 and math.isfinite(lam)):
        raise InvalidParameter(f"Poisson rate must be positive, got {lam!r}")
    k_max = 0
    while pdtrc(k_max, lam) > tol:
        k_max += 1
    i = np.arange(k_max + 1)
    log_w = -lam + i * math.log(lam) - np.array([math.lgamma(k + 1) for k in i])
    w = np.exp(log_w)
    tail = float(pdtrc(k_max, lam))
    return DiscretePmf(int(shift), w / w.sum(), tail, name=f"shifted_poisson({lam:g}, {shift})")


def discrete_weibull_unit(tol: float = DEFAULT_TAIL_TOL) -> DiscretePmf:
    """P(Z = k) = e^-k - e^-(k+1), k >= 0."""
    _validate_tol(tol)
    # weights[0..K-1] kept, remaining tail e^-K <= tol
    k = math.ceil(-math.log(tol))
    while math.exp(-k) > tol:
        k += 1
    i = np.arange(k)
    w = np.exp(-i) * (1.0 - math.exp(-1.0))
    return DiscretePmf(0, w / w.sum(), math.exp(-k), name="discrete_weibull_unit")


def mean(pmf: DiscretePmf) -> float:
    return float(np.dot(pmf.support, pmf.weights))
