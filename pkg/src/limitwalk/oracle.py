"""Independent checks of the limit law against the defining finite-horizon event.

Both oracles work straight from the per-step laws, never from the
boundary system: ``dp_bound`` evaluates P(S_1 <= x, ..., S_T <= x)
exactly by dynamic programming over the current partial sum, and
``mc_estimate`` simulates the walk.  Finite-horizon probabilities only
decrease in T and approach F(x) from above.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from .cycle import CyclePattern
from .errors import NotComputable, StateBudgetExceeded, ValidationError
from .pmf import DiscretePmf

DEFAULT_BUDGET = 10**8
MC_CHUNK = 1 << 17


class OracleMethod(enum.Enum):
    MONTE_CARLO = "MonteCarlo"
    EXACT_DP = "ExactDP"


@dataclass(frozen=True)
class OracleReport:
    x: int
    horizon: int
    estimate: float
    stderr: float
    method: OracleMethod
    trials: int = 0


def _dp(law_at: Callable[[int], DiscretePmf], x: int, horizon: int, budget: int) -> float:
    if horizon < 1:
        raise ValidationError("horizon must be at least 1")
    lo, cum = 0, 0
    for t in range(1, horizon + 1):
        cum += law_at(t).min_support
        lo = min(lo, cum)
    if x < lo:
        return 0.0
    top = max(x, 0)  # the start S_0 = 0 is not constrained
    n = top - lo + 1
    if n * horizon > budget:
        raise StateBudgetExceeded(
            f"{n} states x {horizon} steps exceeds the budget of {budget} state-steps"
        )
    cut = x - lo + 1  # first index above x
    v = np.zeros(n)
    v[-lo] = 1.0
    for t in range(1, horizon + 1):
        law = law_at(t)
        full = np.convolve(v, law.weights)
        m = law.min_support
        # full[i] sits at value lo + i + m; keep values in [lo, x]
        new = np.zeros(n)
        start = -m  # index into full for value lo
        a, b = max(start, 0), min(start + cut, len(full))
        if a < b:
            new[a - start : b - start] = full[a:b]
        v = new
        if not v.any():
            return 0.0
    return float(min(1.0, v.sum()))


def dp_bound(pattern: CyclePattern, x: int, horizon: int, *, budget: int = DEFAULT_BUDGET) -> OracleReport:
    """Exact P(S_1 <= x, ..., S_horizon <= x)."""
    p = _dp(pattern.law, int(x), int(horizon), budget)
    return OracleReport(int(x), int(horizon), p, 0.0, OracleMethod.EXACT_DP)


def dp_period_endpoints(pattern: CyclePattern, x: int, periods: int, *, budget: int = DEFAULT_BUDGET,
                        fN: DiscretePmf | None = None) -> OracleReport:
    """Exact P(S_N <= x, S_2N <= x, ..., S_{periods N} <= x).

    Only the ends of whole periods are constrained.  This is the quantity
    the plain one-period recursion describes (after a shift by max(M, 0));
    it differs from ``dp_bound`` whenever an intermediate prefix sum can
    overshoot.
    """
    if fN is None:
        from .cycle import summarize

        fN = summarize(pattern).fN
    p = _dp(lambda t: fN, int(x), int(periods), budget)
    return OracleReport(int(x), int(periods), p, 0.0, OracleMethod.EXACT_DP)


def exhaustive_bound(pattern: CyclePattern, x: int, horizon: int) -> float:
    """Brute-force sum over every path of length ``horizon``; tiny supports only."""
    laws = [pattern.law(t) for t in range(1, horizon + 1)]
    supports = [[(law.min_support + i, float(w)) for i, w in enumerate(law.weights) if w > 0] for law in laws]
    kept = []
    for path in itertools.product(*supports):
        s, ok, p = 0, True, 1.0
        for step, w in path:
            s += step
            p *= w
            if s > x:
                ok = False
                break
        if ok:
            kept.append(p)
    return math.fsum(kept)


def mc_estimate(pattern: CyclePattern, x: int, horizon: int, trials: int, seed: int = 1) -> OracleReport:
    """Fraction of simulated walks whose first ``horizon`` partial sums stay <= x.

    Trials are split into fixed-size chunks with independent streams
    spawned from ``seed``, so the result depends only on (seed, trials,
    horizon), not on how the chunks are scheduled.
    """
    if horizon < 1 or trials < 1:
        raise ValidationError("horizon and trials must be positive")
    x = int(x)
    cdfs = [np.cumsum(law.weights) for law in pattern.laws]
    mins = [law.min_support for law in pattern.laws]
    N = pattern.N
    n_chunks = math.ceil(trials / MC_CHUNK)
    streams = np.random.SeedSequence(seed).spawn(n_chunks)
    survived = 0
    for c, ss in enumerate(streams):
        rng = np.random.default_rng(ss)
        size = min(MC_CHUNK, trials - c * MC_CHUNK)
        pos = np.zeros(size, dtype=np.int64)
        for t in range(horizon):
            k = t % N
            u = rng.random(pos.size)
            idx = np.searchsorted(cdfs[k], u, side="right")
            np.minimum(idx, len(cdfs[k]) - 1, out=idx)
            pos += idx + mins[k]
            keep = pos <= x
            if not keep.all():
                pos = pos[keep]
                if pos.size == 0:
                    break
        survived += pos.size
    p = survived / trials
    se = math.sqrt(p * (1 - p) / trials)
    return OracleReport(x, int(horizon), p, se, OracleMethod.MONTE_CARLO, int(trials))


@dataclass(frozen=True)
class VerifyConfig:
    trials: int = 10**6
    horizon: int = 2000
    seed: int = 1
    dp_convergence_tol: float = 5e-4
    mc_sigmas: float = 4.0
    budget: int = DEFAULT_BUDGET


@dataclass(frozen=True)
class VerifyRow:
    x: int
    analytic: float
    mc: OracleReport
    dp: OracleReport
    verdict: str

    @property
    def passed(self) -> bool:
        return self.verdict == "PASS"


def verify(ld, xs: Iterable[int], cfg: VerifyConfig | None = None) -> list[VerifyRow]:
    """Compare ``ld.cdf`` with both oracles at each x."""
    cfg = cfg or VerifyConfig()
    if not ld.case.computable:
        raise NotComputable("verification needs a negative-drift pattern")
    pattern = ld.pattern
    rows = []
    for i, x in enumerate(xs):
        analytic = ld.cdf(x)
        dp = dp_bound(pattern, x, cfg.horizon, budget=cfg.budget)
        mc = mc_estimate(pattern, x, cfg.horizon, cfg.trials, seed=cfg.seed + i)
        ok = (
            abs(analytic - dp.estimate) <= cfg.dp_convergence_tol
            and abs(analytic - mc.estimate) <= cfg.mc_sigmas * mc.stderr + cfg.dp_convergence_tol
        )
        rows.append(VerifyRow(int(x), analytic, mc, dp, "PASS" if ok else "FAIL"))
    return rows
