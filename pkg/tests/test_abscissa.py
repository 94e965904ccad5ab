import math

import numpy as np
import pytest

from riesz_lab import (ConeSpec, DirichletSeries, absolute_abscissa, bohr_cahen_pointwise,
                       bohr_cahen_uniform, catalog_list, cone_uniformity, estimate_L, eta_oracle,
                       get_entry, order_at, power_frequency, table)
from riesz_lab.errors import ValidationError

LOG6 = math.log(1e6)
T_GRID = np.linspace(-10, 10, 21)


def window(D, samples=100):
    kind = D.frequency.kind
    x_max = LOG6 if kind == "log" else (500.0 if kind == "power" else 10.0)
    return np.linspace(x_max / 100, x_max, samples)


def test_pointwise_examples():
    for name, target in (("zeta", 1.0), ("eta", 0.0), ("geometric", 0.0)):
        D = get_entry(name).series
        est = bohr_cahen_pointwise(D, 0.0, window(D))
        assert abs(est.value - target) < 0.05, name


def test_tail_sup_definition():
    D = get_entry("zeta").series
    xs = window(D)
    est = bohr_cahen_pointwise(D, 0.0, xs)
    tail = [v for x, v in est.slope_trace if x >= (xs[0] + xs[-1]) / 2]
    assert est.value == max(tail)
    assert est.to_dict()["window"] == [xs[0], xs[-1]]


def test_window_validation():
    D = get_entry("zeta").series
    with pytest.raises(ValidationError):
        bohr_cahen_pointwise(D, 0.0, np.linspace(1, 50, 10))
    with pytest.raises(ValidationError):
        bohr_cahen_uniform(D, 0.0, window(D), np.array([0.0, 1.0, 3.0]))


def test_uniform_examples():
    D = DirichletSeries(power_frequency(), table([1.0]))
    for k in (0.0, 1.0, 2.0):
        assert bohr_cahen_uniform(D, k, window(D), T_GRID).value <= 0
    Z = get_entry("zeta").series
    assert abs(bohr_cahen_uniform(Z, 0.0, window(Z), T_GRID).value - 1) < 0.05


def test_absolute_examples():
    E = get_entry("eta").series
    assert abs(absolute_abscissa(E, window(E)).value - 1) < 0.05
    G = get_entry("geometric").series
    assert abs(absolute_abscissa(G, window(G)).value) < 0.05
    Z = DirichletSeries(power_frequency(), table([0.0, 0.0]))
    est = absolute_abscissa(Z, window(Z))
    assert est.value == -math.inf and est.upper_bound_only


def test_order_at_eta():
    t = np.geomspace(1e2, 1e4, 120)
    assert abs(order_at(eta_oracle, -1.0, t).exponent - 1.5) < 0.15
    assert abs(order_at(eta_oracle, 2.0, t).exponent) < 0.1


def test_order_at_constant():
    est = order_at(lambda s: np.ones_like(s), 0.5, np.geomspace(10, 1000, 20))
    assert est.exponent == 0 and est.residual < 1e-12


def test_order_at_validation():
    with pytest.raises(ValidationError):
        order_at(eta_oracle, 2.0, np.linspace(1, 100, 10))


def test_cone_eta():
    D = get_entry("eta").series
    xs = np.linspace(math.log(1e4), math.log(1e5), 40)
    assert cone_uniformity(D, ConeSpec(0.5, math.pi / 4), xs, 9) < 1e-2


def test_cone_single_term():
    D = DirichletSeries(power_frequency(), table([1.0]))
    assert cone_uniformity(D, ConeSpec(0.2, 1.0), np.linspace(1.5, 20, 30)) == 0


def test_cone_opening_report():
    """Oscillation grows as the cone opens; reported, not bounded."""
    D = get_entry("eta").series
    xs = np.linspace(math.log(1e4), math.log(1e5), 40)
    osc = [cone_uniformity(D, ConeSpec(0.05, g), xs, 9, radii=(0.5, 1.0)) for g in (0.5, 1.2, 1.5)]
    assert all(np.isfinite(osc))


def test_cone_validation():
    with pytest.raises(ValidationError):
        ConeSpec(0.0, math.pi / 2)


# --------------------------------------------------------------- catalog-wide invariants

ESTIMATES = {}


def estimates(name):
    if name not in ESTIMATES:
        D = get_entry(name).series
        xs = window(D)
        ESTIMATES[name] = (bohr_cahen_pointwise(D, 0.0, xs).value,
                           bohr_cahen_uniform(D, 0.0, xs, T_GRID).value,
                           absolute_abscissa(D, xs).value)
    return ESTIMATES[name]


NAMES = [e.name for e in catalog_list()]


@pytest.mark.parametrize("name", NAMES)
def test_ordering(name):
    p, u, a = estimates(name)
    assert u >= p
    assert a + 0.05 >= u


@pytest.mark.parametrize("name", NAMES)
def test_higher_order_does_not_raise_estimate(name):
    D = get_entry(name).series
    xs = window(D)
    ks = [0.0, 0.5, 1.0, 2.0]
    vals = [bohr_cahen_pointwise(D, k, xs).value for k in ks]
    for lo, hi in zip(vals, vals[1:]):
        assert hi <= lo + 0.05


@pytest.mark.parametrize("name,ell", [("eta", 1.0), ("zeta_translate", 0.0)])
def test_absolute_bound_from_L(name, ell):
    e = get_entry(name)
    beta = e.fact("bc_beta").value
    L = estimate_L(e.series.frequency, 10_000)
    assert estimates(name)[2] <= L + beta * ell + 0.1


KIND_CASES = [n if n != "zeta" else pytest.param(
    n, marks=pytest.mark.xfail(strict=True, reason="first-kind means of zeta carry a log(x)/x "
                                                   "bias of 0.14 at x = log(1e6)")) for n in NAMES]


@pytest.mark.parametrize("name", KIND_CASES)
def test_first_and_second_kind_agree(name):
    D = get_entry(name).series
    xs = window(D)
    a = bohr_cahen_pointwise(D, 1.0, xs, "first").value
    b = bohr_cahen_pointwise(D, 1.0, xs, "second").value
    assert abs(a - b) < 0.05


def test_zeta_kind_gap_matches_log_bias():
    """The zeta discrepancy is the predicted log(x)/x - log(2)/x at the window end."""
    D = get_entry("zeta").series
    xs = window(D)
    a = bohr_cahen_pointwise(D, 1.0, xs, "first").value
    b = bohr_cahen_pointwise(D, 1.0, xs, "second").value
    x = xs[-1]
    assert b - a == pytest.approx((math.log(x) - math.log(2)) / x, abs=0.02)
