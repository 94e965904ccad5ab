import json
import math

import mpmath
import numpy as np
import pytest

from riesz_lab import (DirichletSeries, RieszSpec, catalog_list, cesaro_eval, eta_oracle, get_entry,
                       ordinary_frequency, riesz_limit, table,
                       zeta_oracle)
from riesz_lab.errors import DomainError, PrecisionLoss, UnknownCatalogEntry, WrongFrequency


def test_eta_examples():
    assert abs(eta_oracle(1.0) - math.log(2)) < 1e-8
    assert abs(eta_oracle(2.0) - math.pi ** 2 / 12) < 1e-8
    assert abs(eta_oracle(0.0) - 0.5) < 1e-8


def test_eta_against_mpmath():
    rng = np.random.default_rng(1)
    s = rng.uniform(-3, 8, 60) + 1j * rng.uniform(-30, 30, 60)
    ref = np.array([complex(mpmath.altzeta(complex(v))) for v in s])
    assert np.max(np.abs(eta_oracle(s) - ref) / np.maximum(np.abs(ref), 1)) < 1e-8


def test_eta_large_height():
    for s in (0.5 + 1e4j, -1 + 3000j, 2 - 9000j):
        ref = complex(mpmath.altzeta(s))
        assert abs(eta_oracle(s) - ref) <= 1e-8 * max(abs(ref), 1)


def test_eta_precision_loss():
    with pytest.raises(PrecisionLoss):
        eta_oracle(-30.0)


def test_zeta_examples():
    assert abs(zeta_oracle(2.0) - math.pi ** 2 / 6) < 1e-8
    assert abs(zeta_oracle(4.0) - math.pi ** 4 / 90) < 1e-8


def test_zeta_against_mpmath():
    rng = np.random.default_rng(2)
    s = rng.uniform(1.15, 10, 40) + 1j * rng.uniform(-50, 50, 40)
    ref = np.array([complex(mpmath.zeta(complex(v))) for v in s])
    assert np.max(np.abs(zeta_oracle(s) - ref) / np.abs(ref)) < 1e-10


def test_zeta_domain():
    with pytest.raises(DomainError):
        zeta_oracle(1.05)
    with pytest.raises(DomainError):
        zeta_oracle(np.array([2.0, 0.5 + 3j]))


def test_zeta_near_one_via_eta():
    """Near s = 1 the eta side supplies zeta; compare against mpmath."""
    s = 1.05
    val = eta_oracle(s) / (1 - 2 ** (1 - s))
    assert abs(val - float(mpmath.zeta(s))) < 1e-6


def test_eta_zeta_identity():
    sig = np.linspace(1.15, 5, 12)
    s = (sig[:, None] + 1j * np.linspace(-20, 20, 9)[None, :]).ravel()
    diff = eta_oracle(s) - (1 - 2.0 ** (1 - s)) * zeta_oracle(s)
    assert np.max(np.abs(diff)) < 1e-6


def test_cesaro_examples():
    E = get_entry("eta").series
    assert abs(cesaro_eval(E, 0.0, 10_000) - 0.5) < 1e-2
    assert abs(cesaro_eval(E, 0.5, 10_000) - eta_oracle(0.5)) < 1e-2
    D = DirichletSeries(ordinary_frequency(), table([2.5 + 1j]))
    for N in (1, 7, 1000):
        assert cesaro_eval(D, 0.3 + 2j, N) == pytest.approx(2.5 + 1j, abs=1e-14)


def test_cesaro_wrong_frequency():
    with pytest.raises(WrongFrequency):
        cesaro_eval(get_entry("geometric").series, 0.5, 10)


@pytest.mark.parametrize("s", [0.2, 0.5 + 3j, 1.0 - 2j, 2.0])
def test_cesaro_matches_eta(s):
    E = get_entry("eta").series
    assert abs(cesaro_eval(E, s, 10_000) - eta_oracle(s)) < 1e-2


def test_catalog_contents():
    names = {e.name for e in catalog_list()}
    assert {"single0", "single1", "geometric", "eta", "zeta", "zeta_translate", "sqrtlog_sample"} <= names
    assert get_entry("geometric").oracle(1.0) == pytest.approx(1 / (math.e - 1), rel=1e-14)
    eta = get_entry("eta")
    assert eta.fact("order(sigma<0)").value == "1/2 - sigma"
    assert not eta.fact("not_member_H_inf_ell").testable
    assert get_entry("single1").fact("sigma_c").value == -math.inf
    assert get_entry("single0").series.frequency.value(1) == 0
    assert get_entry("single1").series.frequency.value(1) == 1
    for e in catalog_list():
        for f in e.known_facts:
            assert f.provenance in {"literature", "derived", "trivial"}


def test_catalog_json():
    text = json.dumps([e.to_dict() for e in catalog_list()], sort_keys=True)
    assert "eta" in text and "provenance" in text


def test_unknown_entry():
    with pytest.raises(UnknownCatalogEntry):
        get_entry("nope")


POINTS = {
    "single0": [0.3, 1 + 1j, 2.0, 0.1 - 3j, 5.0],
    "single1": [0.3, 1 + 1j, 2.0, 0.1 - 3j, 5.0],
    "two_term": [0.3, 1 + 1j, 2.0, 0.1 - 3j, 5.0],
    "geometric": [0.5, 1.0, 1 + 1j, 2.0, 3 - 2j],
    "eta": [0.3, 0.5 + 1j, 1.0, 2.0 - 3j, 3.0],
    "zeta": [2.5, 2.0, 2 + 1j, 3.0, 4 - 2j],
    "zeta_translate": [0.0, 0.5, 1 + 1j, 0.2 - 1j, 2.0],
    "sqrtlog_sample": [0.3, 1 + 1j, 2.0, 0.1 - 3j, 5.0],
}


@pytest.mark.parametrize("name", sorted(POINTS))
def test_oracle_matches_riesz_limit(name):
    e = get_entry(name)
    s = np.array(POINTS[name], dtype=complex)
    assert np.all(e.in_region(s))
    D = e.series
    kind = D.frequency.kind
    x = {"log": math.log(1e6), "power": 300.0}.get(kind, 10.0)
    sched = np.linspace(x / 2, x, 40)
    for v in s:
        # first-kind means approach their limit like 1/x; extrapolate in 1/x
        rep = riesz_limit(D, RieszSpec(1.0), v, sched, 1e-3, "richardson")
        assert abs(rep.limit_estimate - e.oracle(v)) < 1e-3, v


def test_regions():
    assert not get_entry("zeta").in_region(1.0)
    assert not get_entry("geometric").in_region(0.0)
    assert get_entry("eta").in_region(-3 + 5j)
