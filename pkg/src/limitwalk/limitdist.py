"""The limit law F(x) = lim_n P(S_1 <= x, ..., S_n <= x) as a queryable object."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import mpmath

from . import _numeric
from ._recurrence import Kernel
from .boundary import BoundaryValues, _p_coeffs, solve_boundary
from .cycle import CaseLabel, CyclePattern, CycleSummary, classify, summarize
from .errors import NearRootArgument, NotComputable, RecurrenceInstability
from .pmf import DEFAULT_TAIL_TOL
from .roots import RootConfig, RootSet, find_unit_roots

log = logging.getLogger(__name__)

CLAMP_TOL = 1e-7
INSTABILITY_TOL = 1e-6
PMF_SLACK = 1e-9


@dataclass(frozen=True)
class BuildConfig:
    tail_tol: float = DEFAULT_TAIL_TOL
    roots: RootConfig = field(default_factory=RootConfig)
    # decimal digits for an mpmath rebuild; None keeps float64
    precision: int | None = None
    # False reproduces the plain one-period (Toeplitz) recursion, which
    # ignores the prefix sums S_1..S_{N-1} inside each period
    overshoot: bool = True


class LimitDistribution:
    """Boundary values plus a memoized forward recurrence.

    ``cdf`` extends the memo on demand, so instances are not safe for
    concurrent mutation; reads of an already-filled range are.
    """

    def __init__(
        self,
        summary: CycleSummary,
        case: CaseLabel,
        roots: RootSet | None = None,
        boundary: BoundaryValues | None = None,
        cfg: BuildConfig | None = None,
        pattern: CyclePattern | None = None,
    ):
        self.pattern = pattern
        self.summary = summary
        self.case = case
        self.roots = roots
        self.boundary = boundary
        self.cfg = cfg or BuildConfig()
        self.max_error_estimate = 0.0
        self._memo: list = []
        self._shadow: list = []
        self._kernel: Kernel | None = None
        if case.computable:
            assert boundary is not None
            dps = boundary.dps
            self._dps = dps
            num = mpmath.mpf if dps else float
            with self._ctx():
                self._kernel = Kernel(summary, num, overshoot=self.cfg.overshoot)
                self._memo = [num(v) for v in boundary.exact]
                eps = mpmath.mpf(10) ** (-dps) if dps else 2.0**-52
                # a twin run from perturbed seeds measures how fast rounding
                # errors are amplified by the growing modes of the recurrence
                self._shadow = [
                    v * (1 + eps * (1 if j % 2 else -1) * (j + 1)) + eps * (j + 1)
                    for j, v in enumerate(self._memo)
                ]

    def _ctx(self):
        if getattr(self, "_dps", None):
            return mpmath.workdps(self._dps)
        return _Null()

    # ------------------------------------------------------------------ API
    @property
    def M(self) -> int:
        return self.summary.M

    @property
    def base(self) -> int:
        return self.summary.base

    @property
    def memo_size(self) -> int:
        return len(self._memo)

    def _fill(self, upto: int) -> None:
        kern = self._kernel
        with self._ctx():
            while len(self._memo) <= upto - self.base:
                v = kern.next_value(self._memo)
                w = kern.next_value(self._shadow)
                self._memo.append(v)
                self._shadow.append(w)
                x = self.base + len(self._memo) - 1
                err = 10 * float(abs(v - w))
                self.max_error_estimate = max(self.max_error_estimate, err)
                fv = float(v)
                prev = float(self._memo[-2]) if len(self._memo) > 1 else 0.0
                if err > INSTABILITY_TOL or fv < -CLAMP_TOL or fv > 1 + CLAMP_TOL or fv < prev - CLAMP_TOL:
                    self._memo.pop()
                    self._shadow.pop()
                    hint = (
                        "rebuild with a higher precision (BuildConfig.precision)"
                        if not self._dps
                        else f"raise the precision above {self._dps} digits"
                    )
                    raise RecurrenceInstability(
                        f"recurrence lost accuracy at x = {x}: value {fv:.3e}, "
                        f"error estimate {err:.1e}; {hint}"
                    )

    def cdf(self, x: int) -> float:
        x = int(x)
        if self.case is CaseLabel.ZERO_FUNCTION:
            return 0.0
        if self.case is CaseLabel.DEGENERATE_STEP:
            return 1.0 if x >= self.M else 0.0
        if x < self.M:
            return 0.0
        if x >= self.base:
            self._fill(x)
            v = float(self._memo[x - self.base])
        else:
            # M <= x < 0: every term sits inside the seeded range
            with self._ctx():
                v = float(self._kernel.apply(x, self._memo))
            if v < -CLAMP_TOL or v > 1 + CLAMP_TOL:
                raise RecurrenceInstability(f"direct sum at x = {x} gave {v:.3e}")
        return min(1.0, max(0.0, v))

    def cdf_table(self, lo: int, hi: int) -> list[tuple[int, float]]:
        return [(x, self.cdf(x)) for x in range(lo, hi + 1)]

    def pmf_xi(self, k: int) -> float:
        """P(sup_n S_n = k) = F(k) - F(k-1)."""
        d = self.cdf(k) - self.cdf(k - 1)
        if d < -PMF_SLACK:
            raise RecurrenceInstability(f"negative mass {d:.3e} at k = {k}")
        return max(0.0, d)

    def rhs_polynomial(self, s: complex) -> complex:
        """W(s), the right-hand side of Xi(s) s^D (G_N(s) - 1) = W(s)."""
        self._require_computable()
        kern = Kernel(self.summary, float, overshoot=self.cfg.overshoot)
        D, base, M = self.summary.D, self.base, self.M
        n_cols = max(0, kern.reach - base)
        self._fill(base + max(D, n_cols) - 1)
        F = [float(v) for v in self._memo]
        acc = 0j
        for j in range(D):
            acc += F[j] * _numeric.horner(_p_coeffs(kern.fw, D, j), s)
        for v in range(n_cols):
            col = [kern.e(base + u, base + v) for u in range(M + len(kern.E) - base)]
            acc += F[v] * s**D * _numeric.horner(col, s)
        return acc

    def xi_series(self, s: complex) -> complex:
        """sum_{j >= 0} F(base + j) s^j for |s| < 1 (Xi, or the shifted Xi when M > 0)."""
        self._require_computable()
        if abs(s) >= 1:
            raise NearRootArgument(f"|s| = {abs(s):g}; the series needs |s| < 1")
        weights = self.summary.fN.weights.tolist()
        D = self.summary.D
        denom = _numeric.horner(weights, s) - s**D  # s^D (G_N(s) - 1)
        if abs(denom) <= 1e-12:
            raise NearRootArgument(f"s = {s} is too close to a root of G_N(s) = 1")
        return self.rhs_polynomial(s) / denom

    def _require_computable(self) -> None:
        if not self.case.computable:
            raise NotComputable(f"case {self.case.value} has no generating-function form")


class _Null:
    def __enter__(self):
        return self

    def __exit__(self, *exc):
        return False


def build(pattern: CyclePattern, cfg: BuildConfig | None = None) -> LimitDistribution:
    """summarize -> classify -> roots -> boundary values."""
    cfg = cfg or BuildConfig()
    summary = summarize(pattern, cfg.tail_tol)
    case = classify(summary)
    if case is CaseLabel.ZERO_FUNCTION:
        log.info("E S_N = %.6g >= 0: the limit law vanishes identically", summary.mean_SN)
        return LimitDistribution(summary, case, cfg=cfg, pattern=pattern)
    if case is CaseLabel.DEGENERATE_STEP:
        return LimitDistribution(summary, case, cfg=cfg, pattern=pattern)
    rs = find_unit_roots(summary, cfg.roots)
    bv = solve_boundary(summary, rs, overshoot=cfg.overshoot, dps=cfg.precision)
    return LimitDistribution(summary, case, rs, bv, cfg, pattern)
