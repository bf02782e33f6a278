"""Roots of G_N(s) = 1 in the closed unit disk, excluding s = 1.

Exactly D - 1 of them exist when E S_N < 0, counted with multiplicity.
Candidates come from the eigenvalues of the companion matrix of
Q(s) = s^D (G_N(s) - 1); each is then polished by Newton's method on the
Laurent series itself so the final accuracy does not depend on the
conditioning of the polynomial solve.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import mpmath
import numpy as np

from . import _numeric
from .cycle import CycleSummary, classify
from .errors import NewtonDivergence, NotComputable, RootCountMismatch

_SLACK_MIN, _SLACK_MAX = 1e-12, 1e-4


@dataclass(frozen=True)
class RootConfig:
    disk_slack: float = 1e-7
    cluster_tol: float = 1e-6
    newton_maxiter: int = 200
    residual_tol: float = 1e-9


@dataclass(frozen=True)
class Root:
    value: complex
    multiplicity: int = 1


@dataclass(frozen=True)
class RootSet:
    roots: tuple[Root, ...] = ()
    residuals: tuple[float, ...] = ()
    disk_slack: float = field(default=RootConfig.disk_slack, compare=False)

    @property
    def total_multiplicity(self) -> int:
        return sum(r.multiplicity for r in self.roots)

    @property
    def all_simple(self) -> bool:
        return all(r.multiplicity == 1 for r in self.roots)

    def expanded(self) -> list[complex]:
        """Root values repeated according to multiplicity."""
        out: list[complex] = []
        for r in self.roots:
            out.extend([r.value] * r.multiplicity)
        return out

    def __len__(self) -> int:
        return len(self.roots)


def _g(weights: list, D: int, s, order: int):
    """order-th derivative of G_N(s) - 1."""
    val = _numeric.laurent_derivative(weights, -D, s, order)
    return val - 1 if order == 0 else val


def _newton(weights: list, D: int, s0: complex, order: int, maxiter: int) -> tuple[complex, bool]:
    """Damped Newton on the order-th derivative of G_N - 1."""
    s = complex(s0)
    fs = _g(weights, D, s, order)
    for _ in range(maxiter):
        ds = _g(weights, D, s, order + 1)
        if ds == 0:
            return s, abs(fs) < 1e-14
        step = fs / ds
        lam = 1.0
        while True:
            trial = s - lam * step
            ft = _g(weights, D, trial, order)
            if abs(ft) < abs(fs) or lam < 1e-6:
                break
            lam *= 0.5
        s_old, s, fs = s, trial, ft
        if abs(s - s_old) <= 4e-16 * max(1.0, abs(s)) or fs == 0:
            return s, True
    return s, abs(fs) < 1e-12


def _cluster(values: list[complex], tol: float) -> list[list[complex]]:
    groups: list[list[complex]] = []
    for v in sorted(values, key=lambda z: (z.real, z.imag)):
        for g in groups:
            if any(abs(v - u) < tol for u in g):
                g.append(v)
                break
        else:
            groups.append([v])
    return groups


def _polish(weights: list, D: int, centre: complex, mult: int, cfg: RootConfig) -> complex:
    # the (m-1)-th derivative has a simple root at an m-fold root
    z, ok = _newton(weights, D, centre, mult - 1, cfg.newton_maxiter)
    if not ok or abs(z - centre) > cfg.cluster_tol:
        return centre
    return z


def find_unit_roots(summary: CycleSummary, cfg: RootConfig | None = None) -> RootSet:
    """The D - 1 roots of G_N(s) = 1 with |s| <= 1, s != 1."""
    cfg = cfg or RootConfig()
    if not classify(summary).computable:
        raise NotComputable("unit-disk roots are only defined for negative drift")
    D = summary.D
    if D == 1:
        return RootSet((), (), cfg.disk_slack)
    weights = summary.fN.weights.tolist()

    # S_N may never reach 0, leaving fewer than D + 1 weights
    coeffs = np.zeros(max(len(weights), D + 1))
    coeffs[: len(weights)] = weights
    coeffs[D] -= 1.0
    raw = np.roots(coeffs[::-1])
    raw = [complex(z) for z in raw if abs(z) <= 1.0 + 10 * _SLACK_MAX]

    refined = []
    for z in raw:
        s, ok = _newton(weights, D, z, 0, cfg.newton_maxiter)
        # a multiple root converges only linearly; keep the raw value if
        # Newton wandered off and let clustering sort it out
        refined.append(s if ok or abs(s - z) < 1e-3 else z)

    near_one = [z for z in refined if abs(z - 1.0) < cfg.cluster_tol]
    if len(near_one) != 1:
        raise RootCountMismatch(
            f"expected exactly one root at s = 1, found {len(near_one)} within "
            f"{cfg.cluster_tol:g}; the drift may be too close to zero"
        )
    rest = [z for z in refined if abs(z - 1.0) >= cfg.cluster_tol]

    clusters = []
    for g in _cluster(rest, cfg.cluster_tol):
        centre = sum(g) / len(g)
        mult = len(g)
        if abs(centre.imag) < cfg.cluster_tol:
            centre = complex(centre.real, 0.0)
        z = _polish(weights, D, centre, mult, cfg)
        if centre.imag == 0.0:
            z = complex(z.real, 0.0)
        clusters.append((z, mult))

    slack = _choose_slack(clusters, D - 1, cfg.disk_slack)
    if slack is None:
        counts = sorted(abs(z) for z, _ in clusters)
        raise RootCountMismatch(
            f"could not isolate D - 1 = {D - 1} roots in the unit disk; "
            f"moduli of nearby candidates: {[round(c, 12) for c in counts[: D + 2]]}"
        )
    inside = [(z, m) for z, m in clusters if abs(z) <= 1.0 + slack]

    # enforce exact conjugate symmetry: keep the upper half plane, mirror it
    upper = [(z, m) for z, m in inside if z.imag > 0]
    real = [(z, m) for z, m in inside if z.imag == 0]
    lower = [(z, m) for z, m in inside if z.imag < 0]
    if sorted(m for _, m in upper) != sorted(m for _, m in lower):
        raise RootCountMismatch("complex roots are not in conjugate pairs")
    final = real + upper + [(z.conjugate(), m) for z, m in upper]
    final.sort(key=lambda t: (t[0].real, t[0].imag))

    roots = tuple(Root(z, m) for z, m in final)
    residuals = tuple(abs(_g(weights, D, r.value, 0)) for r in roots)
    bad = [(r.value, e) for r, e in zip(roots, residuals) if e > cfg.residual_tol]
    if bad:
        raise NewtonDivergence(f"root refinement failed: |G_N(a) - 1| = {bad[0][1]:.3e} at {bad[0][0]}")
    rs = RootSet(roots, residuals, slack)
    if rs.total_multiplicity != D - 1:
        raise RootCountMismatch(f"found {rs.total_multiplicity} roots, expected {D - 1}")
    return rs


def _choose_slack(clusters, target: int, default: float) -> float | None:
    def count(slack):
        return sum(m for z, m in clusters if abs(z) <= 1.0 + slack)

    if count(default) == target:
        return default
    # walk outwards from the default on a log grid, tighter side first
    exps = np.log10(default)
    for d in np.arange(0.5, 8.5, 0.5):
        for e in (exps - d, exps + d):
            slack = 10.0**e
            if _SLACK_MIN <= slack <= _SLACK_MAX and count(slack) == target:
                return float(slack)
    return None


def root_residual_report(summary: CycleSummary, rs: RootSet) -> list[float]:
    """|G_N(a) - 1| per root, followed by |G_N^(k)(a)| for k < multiplicity."""
    weights = summary.fN.weights.tolist()
    out = []
    for r in rs.roots:
        out.append(abs(_g(weights, summary.D, r.value, 0)))
        for k in range(1, r.multiplicity):
            out.append(abs(_g(weights, summary.D, r.value, k)))
    return out


def refine_high_precision(summary: CycleSummary, rs: RootSet, dps: int) -> list[tuple]:
    """Re-polish every root with mpmath at ``dps`` decimal digits.

    Returns (mpc value, multiplicity) pairs; the caller must evaluate them
    under the same working precision.
    """
    out = []
    with mpmath.workdps(dps + 10):
        weights = [mpmath.mpf(w) for w in summary.fN.weights.tolist()]
        D = summary.D
        tol = mpmath.mpf(10) ** (-dps - 5)
        for r in rs.roots:
            order = r.multiplicity - 1
            z = mpmath.mpc(r.value)
            is_real = r.value.imag == 0
            if is_real:
                z = mpmath.mpf(r.value.real)
            for _ in range(400):
                step = _g(weights, D, z, order) / _g(weights, D, z, order + 1)
                z -= step
                if abs(step) <= tol * max(1, abs(z)):
                    break
            else:
                raise NewtonDivergence(f"high-precision refinement failed near {r.value}")
            out.append((z, r.multiplicity))
    return out

