"""Quick invariant suite behind ``riesz-lab verify``.

Each check returns ``(passed, detail)``; exceptions count as failures and
are reported in the detail column.  The whole suite runs in well under a
minute.
"""

from __future__ import annotations

import math

import numpy as np

from .abscissa import absolute_abscissa, bohr_cahen_pointwise, bohr_cahen_uniform
from .catalog import catalog_list, cesaro_eval, eta_oracle, get_entry, zeta_oracle
from .frequency import estimate_L, ordinary_frequency, power_frequency
from .series import RieszSpec, means_grid, riesz_limit, riesz_mean, summatory, translate
from .special import gamma_fn
from .transforms import (QuadratureConfig, abel_identity_check, laplace_forward,
                         order_change_identity_check, order_raise, perron_summatory)


def _rel(a, b) -> float:
    return abs(a - b) / max(abs(b), 1e-300)


def _gamma():
    rng = np.random.default_rng(0)
    z = rng.uniform(0.1, 30, 20) + 1j * rng.uniform(-5, 5, 20)
    err = max(_rel(gamma_fn(v + 1), v * gamma_fn(v)) for v in z)
    return err < 1e-10, f"max rel err {err:.2e}"


def _translation():
    err = 0.0
    for e in catalog_list():
        D = e.series
        for w in (0.3, 0.5 + 1j):
            a = riesz_mean(translate(D, w), RieszSpec(1.0), 0.7 + 2j, 6.0)
            b = riesz_mean(D, RieszSpec(1.0), 0.7 + 2j + w, 6.0)
            err = max(err, abs(a - b) / max(abs(b), 1.0))
    return err < 1e-12, f"max rel err {err:.2e}"


def _abel():
    err = 0.0
    for name in ("two_term", "geometric", "eta"):
        lhs, rhs = abel_identity_check(get_entry(name).series, 0.4 + 1j, 0.3, 5.5)
        err = max(err, _rel(lhs, rhs))
    return err < 1e-6, f"max rel err {err:.2e}"


def _order_change():
    lhs, rhs = order_change_identity_check(get_entry("geometric").series, 1.0, 2.0, 1.0)
    return _rel(lhs, rhs) < 1e-4, f"rel err {_rel(lhs, rhs):.2e}"


def _laplace():
    D = get_entry("geometric").series
    s = 1 + 1j
    val = laplace_forward(D, 1.0, s, QuadratureConfig()).value
    ref = 1.0 / np.expm1(s) / s ** 2
    return _rel(val, ref) < 1e-4, f"rel err {_rel(val, ref):.2e}"


def _perron():
    e = get_entry("two_term")
    # k=1 tails decay like 1/T, so ask only for what the check needs
    cfg = QuadratureConfig(tolerance=2e-4)
    err = max(abs(perron_summatory(e.oracle, k, x, cfg).value - summatory(e.series, k, 0.0, x))
              for k in (1.0, 2.0) for x in (0.5, 1.5, 2.5))
    return err < 1e-3, f"max abs err {err:.2e}"


def _order_raise():
    D = get_entry("geometric").series
    val = order_raise(D, 1.0, 0.5, 3.7).value
    ref = summatory(D, 1.5, 0.0, 3.7)
    return _rel(val, ref) < 1e-5, f"rel err {_rel(val, ref):.2e}"


def _oracles():
    worst = []
    for name, s, x in (("geometric", 1.0, 60.0), ("eta", 1.0, math.log(1e5)),
                       ("zeta_translate", 0.5, math.log(1e5)), ("two_term", 0.3 + 1j, 5.0)):
        e = get_entry(name)
        sched = np.linspace(x / 2, x, 40)
        rep = riesz_limit(e.series, RieszSpec(1.0), s, sched, 1e-3, "richardson")
        worst.append((abs(rep.limit_estimate - complex(e.oracle(s))), name))
    err, name = max(worst)
    return err < 1e-3, f"max abs err {err:.2e} ({name})"


def _abscissa_order():
    bad = []
    for name in ("zeta", "eta", "geometric", "zeta_translate"):
        D = get_entry(name).series
        x_max = math.log(1e5) if D.frequency.kind == "log" else 500.0
        xs = np.linspace(x_max / 100, x_max, 60)
        p = bohr_cahen_pointwise(D, 0.0, xs).value
        u = bohr_cahen_uniform(D, 0.0, xs, np.linspace(-5, 5, 11)).value
        a = absolute_abscissa(D, xs).value
        if not (a + 0.05 >= u and u >= p):
            bad.append(name)
    return not bad, "ordering holds" if not bad else f"violated on {', '.join(bad)}"


def _L():
    a, b = estimate_L(power_frequency(), 10_000), estimate_L(ordinary_frequency(), 10_000)
    return abs(a) < 0.01 and abs(b - 1) < 0.01, f"L((n))={a:.4f}, L((log n))={b:.4f}"


def _eta_zeta():
    s = np.array([1.15, 2.0, 3.5 + 2j, 5.0 - 1j])
    err = float(np.max(np.abs(eta_oracle(s) - (1 - 2.0 ** (1 - s)) * zeta_oracle(s))))
    return err < 1e-6, f"max abs err {err:.2e}"


def _cesaro():
    D = get_entry("eta").series
    err = abs(cesaro_eval(D, 0.5, 10_000) - eta_oracle(0.5))
    return err < 1e-2, f"abs err {err:.2e}"


def _kinds():
    D = get_entry("eta").series
    xs = np.array([math.log(1e5)])
    a = means_grid(D, RieszSpec(1.0, "first"), [1.0], xs)[0, 0]
    b = means_grid(D, RieszSpec(1.0, "second"), [1.0], xs)[0, 0]
    return abs(a - b) < 1e-1, f"|first - second| = {abs(a - b):.2e}"


CHECKS = [
    ("gamma functional equation", _gamma),
    ("translation identity", _translation),
    ("Abel partial summation", _abel),
    ("order-change identity", _order_change),
    ("Laplace forward (geometric)", _laplace),
    ("Perron round trip (two_term)", _perron),
    ("order raising", _order_raise),
    ("oracles vs Riesz limits", _oracles),
    ("abscissa ordering", _abscissa_order),
    ("L estimates", _L),
    ("eta/zeta identity", _eta_zeta),
    ("Cesaro mean of eta", _cesaro),
    ("first vs second kind", _kinds),
]


def run_suite() -> list[dict]:
    """Run every check; rows are ``{"check", "passed", "detail"}``."""
    rows = []
    for name, fn in CHECKS:
        try:
            ok, detail = fn()
        except Exception as exc:  # a crash is a failed check, not a crashed suite
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        rows.append({"check": name, "passed": bool(ok), "detail": detail})
    return rows
