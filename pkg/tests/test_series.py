import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_finite_series
from riesz_lab import (DirichletSeries, RieszSpec, alternating, catalog_list, expr,
                       get_entry, make_frequency, means_grid, ones, ordinary_frequency, partial_sum,
                       power_frequency, riesz_limit, riesz_mean, scaled_tail_residuals, summatory,
                       table, translate)
from riesz_lab.errors import NonPositiveX, ScheduleEmpty, ValidationError

GEOM = DirichletSeries(power_frequency(), ones())
ETA = DirichletSeries(ordinary_frequency(), alternating())
SINGLE0 = DirichletSeries(make_frequency([0.0, 1.0]), table([2.5 - 1j]))


def test_partial_sum_examples():
    assert partial_sum(GEOM, 0.3, 1.0) == 0
    assert partial_sum(GEOM, 0.0, 3.5) == 3
    assert partial_sum(GEOM, math.log(2), 2.5) == pytest.approx(0.75, abs=1e-15)


def test_strict_cutoff():
    assert partial_sum(GEOM, 0.0, 3.0) == 2


def test_riesz_mean_examples():
    assert riesz_mean(GEOM, RieszSpec(1), 0.0, 2.5) == pytest.approx(0.8, abs=1e-15)
    for k in (0.0, 0.5, 3.0):
        for x in (0.1, 7.0):
            assert riesz_mean(SINGLE0, RieszSpec(k), 0.4j, x) == pytest.approx(2.5 - 1j, abs=1e-15)


def test_second_kind_weight():
    x = 2.5
    ref = (1 - math.exp(1 - x)) + (1 - math.exp(2 - x))
    assert riesz_mean(GEOM, RieszSpec(1, "second"), 0.0, x) == pytest.approx(ref, abs=1e-14)


def test_order_zero_is_partial_sum(rng):
    for _ in range(10):
        D = random_finite_series(rng)
        s = complex(rng.normal(), rng.normal())
        x = rng.uniform(0.1, 6)
        assert riesz_mean(D, RieszSpec(0), s, x) == pytest.approx(partial_sum(D, s, x), abs=1e-13)


def test_summatory_examples():
    D = DirichletSeries(make_frequency([1.0]), table([1.0]))
    assert summatory(D, 2, 0.0, 3.0) == pytest.approx(4.0, abs=1e-14)
    assert summatory(GEOM, 1.3, 0.2, 1.0) == 0


def test_summatory_is_scaled_mean(rng):
    for _ in range(20):
        D = random_finite_series(rng)
        k, x = rng.uniform(0, 3), rng.uniform(0.5, 6)
        s = complex(rng.normal(), rng.normal())
        assert summatory(D, k, s, x) == pytest.approx(x ** k * riesz_mean(D, RieszSpec(k), s, x),
                                                      rel=1e-13, abs=1e-300)


def test_vector_s():
    s = np.array([0.5, 1 + 1j, 2.0])
    v = riesz_mean(GEOM, RieszSpec(1), s, 10.0)
    assert v.shape == (3,)
    assert v[1] == pytest.approx(riesz_mean(GEOM, RieszSpec(1), 1 + 1j, 10.0))


def test_validation():
    with pytest.raises(ValidationError):
        RieszSpec(-1)
    with pytest.raises(ValidationError):
        RieszSpec(1, "third")
    with pytest.raises(NonPositiveX):
        riesz_mean(GEOM, RieszSpec(1), 0, 0.0)
    with pytest.raises(ScheduleEmpty):
        riesz_limit(GEOM, RieszSpec(1), 1.0, [], 1e-3)


def test_translate_examples():
    D0 = translate(GEOM, 0)
    np.testing.assert_array_equal(D0.coefficients_upto(20), GEOM.coefficients_upto(20))
    D2 = translate(GEOM, math.log(2))
    np.testing.assert_allclose(D2.coefficients_upto(10), 2.0 ** -np.arange(1, 11), rtol=1e-14)
    a = translate(translate(ETA, 0.3 + 1j), -0.1 + 2j).coefficients_upto(50)
    b = translate(ETA, 0.2 + 3j).coefficients_upto(50)
    np.testing.assert_allclose(a, b, rtol=1e-13)


@settings(max_examples=40, deadline=None)
@given(st.complex_numbers(max_magnitude=3), st.complex_numbers(max_magnitude=3),
       st.floats(0.0, 3.0), st.floats(0.5, 30.0), st.sampled_from(["first", "second"]))
def test_translation_identity(w, s, k, x, kind):
    for e in catalog_list():
        D = e.series
        if D.frequency.kind == "log":
            x = min(x, math.log(1e5))
        a = riesz_mean(translate(D, w), RieszSpec(k, kind), s, x)
        b = riesz_mean(D, RieszSpec(k, kind), s + w, x)
        # relative to the sum of moduli: cancellation makes |b| the wrong scale
        lam, c = D.terms_below(x)
        scale = float(np.sum(np.abs(c * np.exp(-lam * (s + w))))) if len(lam) else 0.0
        assert abs(a - b) <= 1e-12 * max(scale, 1e-300)


def test_expr_coefficients():
    c = expr("n**-2.0")
    np.testing.assert_allclose(c(np.arange(1, 4)).real, [1, 0.25, 1 / 9])
    with pytest.raises(ValidationError):
        expr("__import__('os')")


def test_series_json_round_trip():
    for e in catalog_list():
        D = e.series
        E = DirichletSeries.from_dict(D.to_dict())
        N = min(12, len(D.frequency)) if D.frequency.is_finite else 12
        np.testing.assert_allclose(E.coefficients_upto(N), D.coefficients_upto(N))
        np.testing.assert_allclose(E.frequency.upto(N), D.frequency.upto(N))


def test_riesz_limit_eta():
    sched = np.linspace(math.log(1e3), math.log(1e4), 40)
    # first-kind means carry an O(1/x) bias; the extrapolating estimator removes it
    rep = riesz_limit(ETA, RieszSpec(1), 1.0, sched, 1e-3, "richardson")
    assert abs(rep.limit_estimate - math.log(2)) < 1e-3
    rep = riesz_limit(ETA, RieszSpec(1, "second"), 1.0, sched, 1e-3)
    assert rep.converged and abs(rep.limit_estimate - math.log(2)) < 1e-3


def test_riesz_limit_single_term():
    rep = riesz_limit(SINGLE0, RieszSpec(1), 0.3, [1.0, 2.0, 3.0], 1e-12)
    assert rep.converged and rep.tail_delta == 0
    assert rep.limit_estimate == pytest.approx(2.5 - 1j, abs=1e-15)


def test_riesz_limit_geometric():
    sched = np.linspace(20, 200, 40)
    ref = 1 / (math.e - 1)
    rep = riesz_limit(GEOM, RieszSpec(1), 1.0, sched, 1e-6, "richardson")
    assert abs(rep.limit_estimate - ref) < 1e-6
    rep = riesz_limit(GEOM, RieszSpec(1, "second"), 1.0, sched, 1e-6)
    assert rep.converged and abs(rep.limit_estimate - ref) < 1e-6


def test_first_kind_bias_is_order_one_over_x():
    # R_x - f ~ f'(s)/x for k = 1: doubling x halves the error
    f = 1 / math.expm1(1.0)
    e1 = abs(riesz_mean(GEOM, RieszSpec(1), 1.0, 100.0) - f)
    e2 = abs(riesz_mean(GEOM, RieszSpec(1), 1.0, 200.0) - f)
    assert e1 / e2 == pytest.approx(2.0, rel=0.02)


def test_report_samples_and_delta():
    sched = np.linspace(5, 50, 12)
    rep = riesz_limit(GEOM, RieszSpec(2), 0.5, sched, 1e-2)
    xs = [x for x, _ in rep.samples]
    assert np.all(np.diff(xs) > 0) and rep.tail_delta >= 0
    q = rep.samples[-3:]
    assert rep.tail_delta == pytest.approx(max(abs(v - rep.limit_estimate) for _, v in q))
    assert "limit" in rep.to_dict()


def test_scaled_tail_residuals_geometric():
    res = scaled_tail_residuals(GEOM, 1, 1.0, 1 / (math.e - 1), 30)
    for N, r in res:
        # the residual is the negated tail times 1/(N+1)
        assert abs(r) == pytest.approx(math.exp(-N) / (math.e - 1) / (N + 1), rel=1e-6)


def test_scaled_tail_residuals_single_term():
    D = DirichletSeries(power_frequency(), table([3.0]))
    assert all(r == 0 for _, r in scaled_tail_residuals(D, 1, 0.4, 3 * math.exp(-0.4), 10))


def test_scaled_tail_residuals_eta():
    res = np.abs([r for _, r in scaled_tail_residuals(ETA, 1, 1.0, math.log(2), 2000)])
    assert res[-1] < 1e-6
    env = np.maximum.accumulate(res[::-1])[::-1][99:]
    assert np.all(np.diff(env) <= 0)


def test_scaled_tail_residuals_zero_lambda():
    D = DirichletSeries(make_frequency([0.0]), table([1.0]))
    with pytest.raises(Exception):
        scaled_tail_residuals(D, 1, 0, 1, 1)
    D = DirichletSeries(make_frequency([0.0, 1.0]), table([1.0]))
    assert scaled_tail_residuals(D, 1, 0, 1, 1)[0][1] == 0


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**31), st.floats(0.0, 2.0), st.floats(0.1, 2.0))
def test_sup_bound_inequality(seed, p, dq):
    """|R^q_x| <= sup_{y<x} |R^p_y| on a grid, with a Lipschitz slack for p >= 1."""
    rng = np.random.default_rng(seed)
    D = random_finite_series(rng, n_terms=5)
    q = p + dq
    s = complex(rng.normal(), rng.normal())
    lam, a = D.terms_below(np.inf)
    x_max = lam[-1] + 2.0
    h = 1e-3
    # grid points just past every jump catch the piecewise-constant p = 0 values
    ys = np.unique(np.concatenate([np.arange(h, x_max, h), lam + 1e-12]))
    ys = ys[ys > 0]
    Rp = np.abs(means_grid(D, RieszSpec(p), [s], ys)[:, 0])
    Rq = np.abs(means_grid(D, RieszSpec(q), [s], ys)[:, 0])
    sup_p = np.maximum.accumulate(Rp)
    mag = np.abs(a * np.exp(-lam * s))
    if p == 0:
        slack = 1e-12
    elif p >= 1:
        pos = lam > 0
        slack = h * float(np.sum(mag[pos] * p / lam[pos])) + 1e-12
    else:
        # Hoelder-type bound near each jump for 0 < p < 1
        slack = float(np.sum(mag * (h / np.maximum(lam, h)) ** p)) + 1e-12
    assert np.all(Rq <= sup_p + slack)


@pytest.mark.parametrize("name,s,x", [("geometric", 1.0, 400.0), ("eta", 0.5, math.log(2e5)),
                                      ("zeta_translate", 0.3, math.log(2e5)), ("two_term", 0.2j, 10.0)])
def test_order_monotonicity(name, s, x):
    D = get_entry(name).series
    sched = np.linspace(x / 2, x, 40)
    lo = riesz_limit(D, RieszSpec(1, "second"), s, sched, 1.0)
    hi = riesz_limit(D, RieszSpec(2, "second"), s, sched, 1.0)
    tau = max(lo.tail_delta, 1e-12)
    assert abs(hi.limit_estimate - lo.limit_estimate) <= 3 * tau + 3 * hi.tail_delta + 1e-12


@pytest.mark.parametrize("name,s,x", [("geometric", 1.0, 400.0), ("eta", 0.5, math.log(2e5)),
                                      ("zeta_translate", 0.3, math.log(2e5)), ("two_term", 0.2j, 1000.0)])
def test_kinds_agree(name, s, x):
    D = get_entry(name).series
    sched = np.linspace(x / 2, x, 40)
    tol = 2e-2
    first = riesz_limit(D, RieszSpec(1), s, sched, tol)
    second = riesz_limit(D, RieszSpec(1, "second"), s, sched, tol)
    assert first.converged and second.converged
    assert abs(first.limit_estimate - second.limit_estimate) < 10 * tol
