import numpy as np
import pytest

from conftest import random_pattern
from limitwalk import boundary, cycle, errors, pmf, roots

EX1 = [0.456310987308, 0.704402257478, 0.839286755214]


def _solve(pat, **kw):
    s = cycle.summarize(pat)
    rs = roots.find_unit_roots(s)
    return s, rs, boundary.solve_boundary(s, rs, **kw)


def test_example1_linear_and_closed_form(ex1):
    s, rs, bv = _solve(ex1)
    assert bv.method is boundary.Method.LINEAR_SOLVE
    assert np.allclose(bv.values, EX1, atol=1e-11)
    cf = boundary.closed_form_boundary(s, rs)
    assert cf.method is boundary.Method.CLOSED_FORM
    assert np.allclose(cf.values, bv.values, atol=1e-13)
    assert bv.balance_residual < 1e-14 and cf.balance_residual < 1e-14


def test_first_value_product_formula(ex1):
    s, rs, bv = _solve(ex1)
    prod = np.prod([a / (a - 1) for a in rs.expanded()])
    assert bv[0] == pytest.approx((-s.mean_SN / s.f(-s.D) * prod).real, abs=1e-13)


def test_mpmath_path_agrees(ex1, ex2):
    for pat in (ex1, ex2):
        _, _, lo = _solve(pat)
        _, _, hi = _solve(pat, dps=40)
        assert hi.dps == 40
        assert np.allclose(lo.values, hi.values, atol=1e-12)


def test_example2_values(ex2):
    _, _, bv = _solve(ex2)
    assert bv.base == 1
    assert np.allclose(bv.values, [0.0696049737, 0.1303966944], atol=1e-9)
    _, _, plain = _solve(ex2, overshoot=False)
    assert np.allclose(plain.values, [0.1265544976, 0.1801353749], atol=1e-9)


def test_closed_form_refuses_overshoot(ex2):
    s = cycle.summarize(ex2)
    rs = roots.find_unit_roots(s)
    with pytest.raises(errors.ClosedFormNotApplicable):
        boundary.closed_form_boundary(s, rs)
    plain = boundary.closed_form_boundary(s, rs, overshoot=False)
    lin = boundary.solve_boundary(s, rs, overshoot=False)
    assert np.allclose(plain.values, lin.values, atol=1e-12)


def test_closed_form_refuses_multiple_roots():
    s = cycle.summarize(cycle.CyclePattern([pmf.from_weights(-3, [1 / 16, 7 / 16, 1 / 2])]))
    rs = roots.find_unit_roots(s)
    with pytest.raises(errors.MultipleRootsPresent):
        boundary.closed_form_boundary(s, rs)
    bv = boundary.solve_boundary(s, rs)
    assert np.allclose(bv.values, [1.0, 1.0, 1.0], atol=1e-7)


def test_closed_form_matches_solve_on_random_n1():
    rng = np.random.default_rng(11)
    for _ in range(20):
        pat = random_pattern(rng, max_n=1, max_width=5)
        s = cycle.summarize(pat)
        rs = roots.find_unit_roots(s)
        if not rs.all_simple:
            continue
        a = boundary.solve_boundary(s, rs).values
        b = boundary.closed_form_boundary(s, rs).values
        assert np.allclose(a, b, atol=1e-9)


def test_system_shape_and_row_coefficient(ex1):
    s = cycle.summarize(ex1)
    rs = roots.find_unit_roots(s)
    A, b = boundary.build_system(s, rs)
    assert A.shape == (3, 3) and b.tolist() == [0.0, 0.0, 1.0]
    a = rs.expanded()[0]
    # p_0(s) = f(-3) + f(-2) s + f(-1) s^2
    assert boundary.row_coefficient(s, 0, a) == pytest.approx(0.5)
    assert boundary.row_coefficient(s, 2, a) == pytest.approx(0.5 * a**2)
    with pytest.raises(errors.IndexOutOfRange):
        boundary.row_coefficient(s, 3, a)


def test_wrong_root_set_rejected(ex1):
    s = cycle.summarize(ex1)
    with pytest.raises(errors.NotComputable):
        boundary.solve_boundary(s, roots.RootSet(()))


def test_elementary_symmetric():
    v = [2.0, 3.0, 5.0]
    assert [boundary.elementary_symmetric(v, k) for k in range(4)] == [1, 10, 31, 30]
    with pytest.raises(errors.IndexOutOfRange):
        boundary.elementary_symmetric(v, 4)
