"""Acceptance gate: eight criteria, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py`` (lines appear in the terminal
summary) or ``python tests/test_acceptance.py``.
"""

import math
import time

import numpy as np

from conftest import ACCEPTANCE_LINES, example1, example2, random_pattern
from limitwalk import (
    BuildConfig,
    build,
    closed_form_boundary,
    cycle,
    errors,
    find_unit_roots,
    oracle,
    pmf,
    solve_boundary,
    summarize,
)
from limitwalk.cycle import CaseLabel
from limitwalk.limitdist import LimitDistribution


def _report(n: int, ok: bool, text: str) -> None:
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {text}"
    ACCEPTANCE_LINES.append(line)
    print(line)


# 1 ----------------------------------------------------------------------
def test_criterion_1_example1_roots():
    t = time.perf_counter()
    rs = find_unit_roots(summarize(example1()))
    dt = time.perf_counter() - t
    target = complex(-0.419643, 0.606291)
    vals = rs.expanded()
    err = max(min(abs(v - target), abs(v - target.conjugate())) for v in vals) if vals else math.inf
    conj = len(vals) == 2 and abs(vals[0] - vals[1].conjugate()) < 1e-12
    ok = rs.all_simple and len(vals) == 2 and conj and err < 1e-5 and dt < 1.0
    _report(1, ok, f"roots {[f'{v:.6f}' for v in vals]}, max err {err:.1e}, {dt:.3f}s")
    assert ok


# 2 ----------------------------------------------------------------------
EX1 = {-3: 0.228155, -2: 0.352201, -1: 0.419643, 0: 0.456311, 1: 0.704402, 2: 0.839287}


def test_criterion_2_example1_values():
    t = time.perf_counter()
    pat = example1()
    s = summarize(pat)
    rs = find_unit_roots(s)
    worst = 0.0
    for bv in (solve_boundary(s, rs), closed_form_boundary(s, rs)):
        ld = LimitDistribution(s, cycle.classify(s), rs, bv, BuildConfig(), pat)
        worst = max(worst, max(abs(ld.cdf(x) - v) for x, v in EX1.items()))
    dt = time.perf_counter() - t
    ok = worst < 1e-5 and dt < 1.0
    _report(2, ok, f"LinearSolve and ClosedForm, max |F - reference| {worst:.1e}, {dt:.3f}s")
    assert ok


# 3 ----------------------------------------------------------------------
def test_criterion_3_example2_root():
    t = time.perf_counter()
    rs = find_unit_roots(summarize(example2()))
    dt = time.perf_counter() - t
    ok = len(rs.roots) == 1 and rs.all_simple and abs(rs.roots[0].value - (-0.364796)) < 1e-5 and dt < 1.0
    _report(3, ok, f"root {rs.roots[0].value.real:.9f} (mult {rs.roots[0].multiplicity}), {dt:.3f}s")
    assert ok


# 4 ----------------------------------------------------------------------
EX2_REFERENCE = {1: 0.129012, 2: 0.183634}


def test_criterion_4_example2_values():
    t = time.perf_counter()
    pat = example2()
    ld = build(pat)
    parts, ok = [], True
    for i, x in enumerate((1, 2)):
        a = ld.cdf(x)
        dp = oracle.dp_bound(pat, x, 3000).estimate
        mc = oracle.mc_estimate(pat, x, 3000, 10**6, seed=1 + i)
        dp_ok = abs(a - dp) <= 5e-4
        mc_ok = abs(a - mc.estimate) <= 4 * mc.stderr
        ok &= dp_ok and mc_ok
        parts.append(
            f"F({x})={a:.6f} dp3000={dp:.6f} (diff {a - dp:+.2e}, {'ok' if dp_ok else 'over 5e-4'}) "
            f"mc={mc.estimate:.6f}±{mc.stderr:.6f} ({(a - mc.estimate) / mc.stderr:+.1f} se)"
        )
    dt = time.perf_counter() - t
    ok &= dt < 120
    match = all(abs(ld.cdf(x) - v) <= 3e-3 for x, v in EX2_REFERENCE.items())
    parts.append(f"matches 0.129012/0.183634 within 3e-3: {'yes' if match else 'no'}")
    _report(4, ok, "; ".join(parts) + f"; {dt:.1f}s")
    assert ok


# 5 ----------------------------------------------------------------------
def test_criterion_5_balance_identity():
    rng = np.random.default_rng(505)
    worst_literal, worst_general, failing, failing_overshoot, plain_worst = 0.0, 0.0, 0, 0, 0.0
    for _ in range(50):
        pat = random_pattern(rng)
        ld = build(pat)
        s = ld.summary
        literal = abs(sum(ld.cdf(s.base + j) * s.F(-j - 1) for j in range(s.D)) + s.mean_SN)
        worst_literal = max(worst_literal, literal)
        worst_general = max(worst_general, ld.boundary.balance_residual)
        if literal >= 1e-8:
            failing += 1
            failing_overshoot += s.has_overshoot
        plain = build(pat, BuildConfig(overshoot=False))
        plain_worst = max(
            plain_worst, abs(sum(plain.cdf(s.base + j) * s.F(-j - 1) for j in range(s.D)) + s.mean_SN)
        )
    ok = worst_literal < 1e-8
    _report(
        5,
        ok,
        f"sum F(j)F_N(-j-1)+E S_N: worst {worst_literal:.1e}, {failing}/50 over 1e-8 "
        f"({failing_overshoot} of them with intra-period overshoot); "
        f"overshoot-corrected balance worst {worst_general:.1e}; "
        f"uncorrected recursion worst {plain_worst:.1e}",
    )
    assert ok


# 6 ----------------------------------------------------------------------
def test_criterion_6_oracle_equivalence():
    rng = np.random.default_rng(606)
    worst, plain_worst = 0.0, 0.0
    for _ in range(20):
        pat = random_pattern(rng, max_width=3)
        ld = build(pat)
        plain = build(pat, BuildConfig(overshoot=False))
        for x in range(ld.M, ld.M + 5):
            dp = oracle.dp_bound(pat, x, 2000).estimate
            worst = max(worst, abs(ld.cdf(x) - dp))
            plain_worst = max(plain_worst, abs(plain.cdf(x) - dp))
    worst_ex = 0.0
    for _ in range(10):
        pat = random_pattern(rng, max_width=3)
        for h in (1, 3, 6, 8):
            for x in (-2, 0, 1, 3):
                worst_ex = max(worst_ex, abs(oracle.dp_bound(pat, x, h).estimate - oracle.exhaustive_bound(pat, x, h)))
    ok = worst <= 5e-4 and worst_ex <= 1e-14
    _report(
        6,
        ok,
        f"|cdf - dp2000| worst {worst:.1e} over 100 points (uncorrected recursion: {plain_worst:.1e}); "
        f"|dp - enumeration| worst {worst_ex:.1e}",
    )
    assert ok


# 7 ----------------------------------------------------------------------
def _reach_one(pat, limit: int = 5000) -> tuple[bool, int, float]:
    """Walk x upwards, rebuilding with more digits whenever the recurrence destabilizes."""
    dps = None
    ld = build(pat)
    x = ld.base
    prev = 0.0
    while x < limit:
        try:
            v = ld.cdf(x)
        except errors.RecurrenceInstability:
            dps = 2 * (dps or 30)
            ld = build(pat, BuildConfig(precision=dps))
            continue
        if v < prev - 1e-12 or not 0.0 <= v <= 1.0:
            return False, x, v
        prev = v
        if v >= 1 - 1e-5:
            return True, x, v
        x += 1
    return False, x, prev


def _xi_residual(pat, rng) -> float:
    ld0 = build(pat)
    alphas = [abs(z) for z in ld0.roots.expanded()] if ld0.roots else []
    terms = 160
    grow = math.log10(1 / min(alphas)) if alphas else 0.0
    ld = build(pat, BuildConfig(precision=int(terms * grow) + 30))
    worst = 0.0
    for _ in range(20):
        r, th = 0.5 * math.sqrt(rng.random()), 2 * math.pi * rng.random()
        s = r * complex(math.cos(th), math.sin(th))
        direct = sum(ld.cdf(ld.base + j) * s**j for j in range(terms))
        worst = max(worst, abs(ld.xi_series(s) - direct))
    return worst


def test_criterion_7_properties():
    rng = np.random.default_rng(707)
    pats = [example1(), example2()] + [random_pattern(rng) for _ in range(10)]
    reach = [_reach_one(p) for p in pats]
    mono_ok = all(r[0] for r in reach)

    zero = build(cycle.CyclePattern([pmf.from_weights(-1, [0.3, 0, 0.7])]))
    zero_drift = build(cycle.CyclePattern([pmf.from_weights(-2, [0.5, 0, 0, 0, 0.5])]))
    deg = build(cycle.CyclePattern([pmf.from_weights(2, [1.0]), pmf.from_weights(-2, [1.0])]))
    cases_ok = (
        zero.case is CaseLabel.ZERO_FUNCTION
        and zero_drift.case is CaseLabel.ZERO_FUNCTION
        and all(zero.cdf(x) == 0.0 == zero_drift.cdf(x) for x in range(-5, 30))
        and deg.case is CaseLabel.DEGENERATE_STEP
        and [deg.cdf(x) for x in (0, 1, 2, 3)] == [0.0, 0.0, 1.0, 1.0]
    )

    count_ok, typed = True, 0
    for _ in range(50):
        s = summarize(random_pattern(rng, max_width=6))
        try:
            rs = find_unit_roots(s)
            count_ok &= rs.total_multiplicity == s.D - 1
        except errors.LimitWalkError:
            typed += 1

    xi_worst = max(_xi_residual(p, rng) for p in pats[:6])
    ok = mono_ok and cases_ok and count_ok and xi_worst < 1e-8
    far = max(r[1] for r in reach)
    _report(
        7,
        ok,
        f"monotone/[0,1]/reaches 1-1e-5 on {sum(r[0] for r in reach)}/{len(reach)} patterns (by x<={far}); "
        f"trivial cases {'ok' if cases_ok else 'wrong'}; root counts {'ok' if count_ok else 'wrong'} "
        f"({typed} typed errors); Xi residual worst {xi_worst:.1e}",
    )
    assert ok


# 8 ----------------------------------------------------------------------
def test_criterion_8_d_equal_one():
    worst_cf, worst_dp = 0.0, 0.0
    for p in (0.6, 0.75, 0.9):
        pat = cycle.CyclePattern([pmf.from_weights(-1, [p, 0, 1 - p])])
        ld = build(pat)
        v = ld.cdf(0)
        worst_cf = max(worst_cf, abs(v - (2 * p - 1) / p))
        worst_dp = max(worst_dp, abs(v - oracle.dp_bound(pat, 0, 2000).estimate))
    ok = worst_cf < 1e-10 and worst_dp < 5e-4
    _report(8, ok, f"|F(0) - (2p-1)/p| worst {worst_cf:.1e}; |F(0) - dp2000| worst {worst_dp:.1e}")
    assert ok


if __name__ == "__main__":
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                pass
