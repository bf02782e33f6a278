import time

import numpy as np
import pytest

from conftest import random_pattern
from limitwalk import cycle, errors, pmf, roots


def _double_root_pattern():
    # 16 s^3 - 8 s^2 - 7 s - 1 = (s - 1)(4 s + 1)^2
    return cycle.CyclePattern([pmf.from_weights(-3, [1 / 16, 7 / 16, 1 / 2])])


def test_example1_roots(ex1):
    t = time.perf_counter()
    rs = roots.find_unit_roots(cycle.summarize(ex1))
    assert time.perf_counter() - t < 1.0
    assert rs.total_multiplicity == 2 and rs.all_simple
    vals = sorted(rs.expanded(), key=lambda z: z.imag)
    assert abs(vals[0] - (-0.41964337760708 - 0.60629072920720j)) < 1e-12
    assert vals[1] == vals[0].conjugate()
    assert max(rs.residuals) < 1e-14


def test_example2_root(ex2):
    rs = roots.find_unit_roots(cycle.summarize(ex2))
    assert len(rs) == 1
    (r,) = rs.roots
    assert r.multiplicity == 1 and r.value.imag == 0.0
    assert r.value.real == pytest.approx(-0.364796, abs=1e-6)


def test_d_equal_one_has_no_roots():
    s = cycle.summarize(cycle.CyclePattern([pmf.from_weights(-1, [0.7, 0, 0.3])]))
    assert roots.find_unit_roots(s).roots == ()


def test_double_root_detected():
    s = cycle.summarize(_double_root_pattern())
    rs = roots.find_unit_roots(s)
    assert [(round(r.value.real, 9), r.multiplicity) for r in rs.roots] == [(-0.25, 2)]
    assert not rs.all_simple
    rep = roots.root_residual_report(s, rs)
    assert max(rep) < 1e-9


def test_short_period_law():
    # S_N never reaches 0: fewer weights than D + 1
    s = cycle.summarize(cycle.CyclePattern([pmf.from_weights(-4, [0.2, 0.3, 0.5])]))
    rs = roots.find_unit_roots(s)
    assert rs.total_multiplicity == 3


def test_not_computable_raises():
    s = cycle.summarize(cycle.CyclePattern([pmf.from_weights(-1, [0.3, 0, 0.7])]))
    with pytest.raises(errors.NotComputable):
        roots.find_unit_roots(s)


def test_random_patterns_give_d_minus_one_roots():
    rng = np.random.default_rng(3)
    for _ in range(40):
        s = cycle.summarize(random_pattern(rng, max_width=6))
        try:
            rs = roots.find_unit_roots(s)
        except (errors.RootCountMismatch, errors.NewtonDivergence):
            continue
        assert rs.total_multiplicity == s.D - 1
        for z in rs.expanded():
            assert abs(z) <= 1 + rs.disk_slack
            assert abs(cycle.eval_GN(s, z) - 1) < 1e-9
        # conjugate-closed
        vals = sorted(rs.expanded(), key=lambda z: (z.real, z.imag))
        conj = sorted((z.conjugate() for z in vals), key=lambda z: (z.real, z.imag))
        assert np.allclose(vals, conj, atol=0)


def test_high_precision_refinement(ex1):
    import mpmath

    s = cycle.summarize(ex1)
    rs = roots.find_unit_roots(s)
    with mpmath.workdps(50):
        for z, m in roots.refine_high_precision(s, rs, 50):
            g = 0.5 * z**-3 + 0.5 * z - 1
            assert abs(g) < mpmath.mpf(10) ** -45
