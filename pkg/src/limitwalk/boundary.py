"""The D initial values F(base), ..., F(base + D - 1) of the limit law.

Write u = x - base and W(s) for the right-hand side of

    Xi(s) s^D (G_N(s) - 1) = W(s),
    W(s) = sum_{j<D} F(base+j) p_j(s) + s^D sum_v F(base+v) C_v(s),

with p_j(s) = sum_{x=j}^{D-1} f_N(x-D-j) s^x and C_v(s) the generating
function of the overshoot column v.  Xi is analytic in the open disk, so
W and its first m-1 derivatives vanish at every m-fold unit-disk root of
G_N = 1.  Those D - 1 conditions, plus W(1) = -E S_N obtained from
s -> 1, fix the D unknowns.  Without overshoot (N = 1, or minima that
make the intermediate prefix constraints redundant) the C_v terms vanish
and the system reduces to the classical one, which also has the closed
form implemented in ``closed_form_boundary``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Sequence

import mpmath
import numpy as np

from . import _numeric
from ._recurrence import Kernel
from .cycle import CycleSummary, classify
from .errors import (
    ClosedFormNotApplicable,
    IndexOutOfRange,
    MultipleRootsPresent,
    NonMonotoneSolution,
    NotComputable,
    SingularSystem,
)
from .roots import RootSet, refine_high_precision

MONOTONE_SLACK = 1e-9
# above this (row-equilibrated) condition number a float64 solve loses more
# than ~1e-11, so the system is re-solved at REFINE_DPS digits
REFINE_CONDITION = 1e5
REFINE_DPS = 32


class Method(enum.Enum):
    LINEAR_SOLVE = "LinearSolve"
    CLOSED_FORM = "ClosedForm"


@dataclass(frozen=True)
class BoundaryValues:
    base: int
    values: tuple[float, ...]
    balance_residual: float
    system_condition: float
    method: Method
    # the same values at working precision (mpmath numbers when dps is set)
    exact: tuple = field(default=(), repr=False, compare=False)
    dps: int | None = field(default=None, compare=False)

    def __getitem__(self, j: int) -> float:
        return self.values[j]

    def __len__(self) -> int:
        return len(self.values)


class _Arith:
    """float64 or mpmath arithmetic behind one interface."""

    def __init__(self, dps: int | None):
        self.dps = dps

    def num(self, x):
        return mpmath.mpf(x) if self.dps else float(x)

    def cnum(self, z):
        return mpmath.mpc(z) if self.dps else complex(z)

    def solve(self, A: list[list], b: list) -> list:
        try:
            if self.dps:
                return list(mpmath.lu_solve(mpmath.matrix(A), mpmath.matrix(b)))
            return np.linalg.solve(np.array(A, dtype=float), np.array(b, dtype=float)).tolist()
        except (ZeroDivisionError, np.linalg.LinAlgError) as exc:
            raise SingularSystem(f"boundary system is singular ({exc})") from None

    def condition(self, A: list[list]) -> float:
        """2-norm condition number (the float64 solve's error amplification)."""
        if self.dps:
            c = mpmath.cond(mpmath.matrix(A))
            return float(c) if mpmath.isfinite(c) else float("inf")
        with np.errstate(all="ignore"):
            return float(np.linalg.cond(np.array(A, dtype=float)))

    @property
    def condition_limit(self) -> float:
        return float(10.0 ** (self.dps - 6)) if self.dps else math.inf


def _p_coeffs(fw: Sequence, D: int, j: int, zero=0.0) -> list:
    """Coefficients (ascending powers) of p_j(s)."""
    out = [zero] * D
    for x in range(j, min(D, j + len(fw))):
        out[x] = fw[x - j]  # f_N(x - D - j) sits at table index x - j
    return out


def row_coefficient(summary: CycleSummary, j: int, alpha: complex, deriv_order: int = 0) -> complex:
    """deriv_order-th derivative of p_j(s) = sum_{x=j}^{D-1} f_N(x-D-j) s^x at alpha."""
    D = summary.D
    if not (0 <= j < D):
        raise IndexOutOfRange(f"column {j} outside [0, {D - 1}]")
    if deriv_order < 0:
        raise IndexOutOfRange("derivative order must be non-negative")
    coeffs = _p_coeffs(summary.fN.weights.tolist(), D, j)
    return _numeric.poly_derivative(coeffs, alpha, deriv_order)


def _seed_map(kern: Kernel, D: int, count: int, ar: _Arith) -> list[list]:
    """Rows v < count express F(base + v) as a combination of the D seeds."""
    cols = []
    for i in range(D):
        seed = [ar.num(0)] * D
        seed[i] = ar.num(1)
        cols.append(kern.extend(seed, count))
    return [[cols[i][v] for i in range(D)] for v in range(count)]


def _assemble(summary: CycleSummary, roots: list[tuple], ar: _Arith, overshoot: bool):
    D, base, M = summary.D, summary.base, summary.M
    kern = Kernel(summary, ar.num, overshoot=overshoot)
    fw = kern.fw
    zero = ar.num(0)
    n_cols = max(0, kern.reach - base)
    seed_map = _seed_map(kern, D, max(D, n_cols), ar)

    # s^D C_v(s): coefficient of s^(D+u) is E(base + u, base + v)
    shifted_cols = []
    for v in range(n_cols):
        col = [kern.e(base + u, base + v) for u in range(M + len(kern.E) - base)]
        shifted_cols.append([zero] * D + col)
    p_cols = [_p_coeffs(fw, D, j, zero) for j in range(D)]

    def w_row(point, order: int) -> list:
        row = [ar.cnum(0)] * D
        for j in range(D):
            row[j] += _numeric.poly_derivative(p_cols[j], point, order)
        for v in range(n_cols):
            c = _numeric.poly_derivative(shifted_cols[v], point, order)
            if c == 0:
                continue
            for i in range(D):
                row[i] += c * seed_map[v][i]
        return row

    A, rhs = [], []
    for z, mult in roots:
        if z.imag < 0:
            # the conjugate partner's real and imaginary rows cover it
            continue
        for k in range(mult):
            row = w_row(z, k)
            A.append([ar.num(c.real) for c in row])
            rhs.append(zero)
            if z.imag > 0:
                A.append([ar.num(c.imag) for c in row])
                rhs.append(zero)
    balance = [c.real for c in w_row(ar.num(1), 0)]
    A.append([ar.num(c) for c in balance])
    rhs.append(-ar.num(summary.mean_SN))
    return A, rhs, kern


def _working_roots(summary: CycleSummary, rs: RootSet, ar: _Arith) -> list[tuple]:
    if ar.dps:
        return refine_high_precision(summary, rs, ar.dps)
    return [(complex(r.value), r.multiplicity) for r in rs.roots]


def _check_preconditions(summary: CycleSummary, rs: RootSet) -> None:
    if not classify(summary).computable:
        raise NotComputable("boundary values exist only for negative drift")
    if rs.total_multiplicity != summary.D - 1:
        raise NotComputable(
            f"root set has {rs.total_multiplicity} roots, D - 1 = {summary.D - 1} needed"
        )


def build_system(summary: CycleSummary, rs: RootSet, *, overshoot: bool = True) -> tuple[np.ndarray, np.ndarray]:
    """Real D x D system for the initial values (float64)."""
    _check_preconditions(summary, rs)
    ar = _Arith(None)
    A, rhs, _ = _assemble(summary, _working_roots(summary, rs, ar), ar, overshoot)
    return np.array(A, dtype=float), np.array(rhs, dtype=float)


def _balance(values: Sequence, summary: CycleSummary, kern: Kernel, ar: _Arith) -> float:
    """|W(1) + E S_N| for the given initial values."""
    D, base = summary.D, summary.base
    n_cols = max(0, kern.reach - base)
    F = kern.extend(list(values), max(D, n_cols))
    acc = ar.num(0)
    for j in range(D):
        acc += F[j] * sum(kern.fw[: D - j])  # F_N(-j-1)
    for v in range(n_cols):
        col_sum = sum((kern.e(x, base + v) for x in range(base, kern.M + len(kern.E))), ar.num(0))
        acc += F[v] * col_sum
    return float(abs(acc + ar.num(summary.mean_SN)))


def _validate(values: Sequence[float]) -> None:
    prev = -MONOTONE_SLACK
    for j, v in enumerate(values):
        if v < -MONOTONE_SLACK or v > 1 + MONOTONE_SLACK or v < prev - MONOTONE_SLACK:
            raise NonMonotoneSolution(
                f"initial value {j} = {v:.12g} breaks 0 <= F(0) <= ... <= 1; "
                "the root set is probably wrong"
            )
        prev = max(prev, v)


def solve_boundary(
    summary: CycleSummary, rs: RootSet, *, overshoot: bool = True, dps: int | None = None
) -> BoundaryValues:
    """Initial values by linear solve; ``dps`` switches to mpmath arithmetic."""
    _check_preconditions(summary, rs)
    ar = _Arith(dps)
    ctx = mpmath.workdps(dps) if dps else _nullctx()
    with ctx:
        A, rhs, kern = _assemble(summary, _working_roots(summary, rs, ar), ar, overshoot)
        cond = ar.condition(A)
        if cond > ar.condition_limit:
            raise SingularSystem(f"boundary system condition number {cond:.3e} at {dps} digits")
        if dps is None and not cond <= REFINE_CONDITION:
            # small roots make the high-power columns nearly dependent; solve
            # in extended precision but keep float64 for everything downstream
            digits = REFINE_DPS if not np.isfinite(cond) else max(REFINE_DPS, int(math.log10(cond)) + 22)
            hp = solve_boundary(summary, rs, overshoot=overshoot, dps=digits)
            sol = [float(v) for v in hp.exact]
        else:
            sol = ar.solve(A, rhs)
        values = tuple(float(v) for v in sol)
        _validate(values)
        resid = _balance(sol, summary, kern, ar)
    return BoundaryValues(
        base=summary.base,
        values=values,
        balance_residual=resid,
        system_condition=cond,
        method=Method.LINEAR_SOLVE,
        exact=tuple(sol),
        dps=dps,
    )


class _nullctx:
    def __enter__(self):
        return self

    def __exit__(self, *exc):
        return False


def elementary_symmetric(values: Sequence[complex], k: int) -> complex:
    """e_k(values) via e_k^(n) = e_k^(n-1) + v_n e_{k-1}^(n-1)."""
    n = len(values)
    if not (0 <= k <= n):
        raise IndexOutOfRange(f"e_{k} undefined for {n} values")
    e = [1] + [0] * k
    for v in values:
        for i in range(k, 0, -1):
            e[i] = e[i] + v * e[i - 1]
    return e[k]


def closed_form_boundary(summary: CycleSummary, rs: RootSet, *, overshoot: bool = True) -> BoundaryValues:
    """Initial values from the explicit product / symmetric-function formulas.

    F(b)   = (-E S_N / f_N(-D)) prod a_j / (a_j - 1)
    F(b+k) = -(1/f_N(-D)) sum_{i=1}^{k} F_N(-D+i) F(b+k-i)
             - (E S_N / f_N(-D)) prod 1/(a_j - 1) sum_{i=0}^{k} (-1)^i e_{D-1-i}
    """
    _check_preconditions(summary, rs)
    if not rs.all_simple:
        raise MultipleRootsPresent("the closed form needs simple roots")
    if overshoot and summary.has_overshoot:
        raise ClosedFormNotApplicable(
            "intermediate prefix sums can overshoot within a period; "
            "only the linear solve covers this pattern"
        )
    D = summary.D
    alphas = rs.expanded()
    f0 = summary.f(-D)
    mu = summary.mean_SN
    inv_prod = 1.0 + 0j
    for a in alphas:
        inv_prod /= a - 1.0
    e = [elementary_symmetric(alphas, k) for k in range(D)]
    Fn = [summary.F(-D + i) for i in range(D)]  # F_N(-D+i)

    vals: list[complex] = []
    alt = 0j
    for k in range(D):
        alt += (-1) ** k * e[D - 1 - k]
        acc = -mu / f0 * inv_prod * alt
        for i in range(1, k + 1):
            acc -= Fn[i] * vals[k - i] / f0
        vals.append(acc)
    worst = max((abs(v.imag) for v in vals), default=0.0)
    if worst > 1e-9:
        raise NonMonotoneSolution(f"closed form left imaginary part {worst:.3e}")
    values = tuple(float(v.real) for v in vals)
    _validate(values)
    ar = _Arith(None)
    kern = Kernel(summary, float, overshoot=overshoot)
    return BoundaryValues(
        base=summary.base,
        values=values,
        balance_residual=_balance(values, summary, kern, ar),
        system_condition=float("nan"),
        method=Method.CLOSED_FORM,
        exact=values,
    )
