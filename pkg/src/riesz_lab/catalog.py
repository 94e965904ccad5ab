"""Named test series with independent evaluations of their limit functions.

The eta oracle uses Borwein's Chebyshev-weighted acceleration of the
alternating series, which converges for every ``s`` and does not go through
zeta; the zeta oracle sums directly with an Euler-Maclaurin tail.  Keeping
them independent lets each cross-check the other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Optional

import numpy as np
from scipy.special import bernoulli, gammaln

from .errors import DomainError, PrecisionLoss, UnknownCatalogEntry, ValidationError, WrongFrequency
from .frequency import (
    GENERATORS,
    make_frequency,
    ordinary_frequency,
    power_frequency,
    sqrtlog_frequency,
)
from .series import DirichletSeries, alternating, expr, ones, table

_EPS = np.finfo(float).eps
_BLOCK = 2_000_000
# 3 + sqrt(8): per-term convergence factor of the Chebyshev weights
_RHO = math.log(3 + math.sqrt(8))


@lru_cache(maxsize=64)
def _borwein_weights(n: int) -> np.ndarray:
    """``e_k = (d_n - d_k) / d_n`` for ``k = 0..n-1``, built in log space."""
    i = np.arange(n + 1)
    # d_n's summands n (n+i-1)! 4^i / ((n-i)! (2i)!); i = 0 term equals 1
    lw = np.log(n) + gammaln(n + i) - gammaln(n - i + 1) - gammaln(2 * i + 1) + i * math.log(4.0)
    lw[0] = 0.0
    w = np.exp(lw - lw.max())
    tail = np.cumsum(w[::-1])[::-1]
    e = np.append(tail[1:], 0.0) / tail[0]
    return e[:n]


def _borwein_terms(t: float) -> int:
    return int(1.3 * math.pi * abs(t) / _RHO) + 60


def eta_oracle(s):
    """Dirichlet eta function ``sum (-1)**(n+1) n**(-s)`` for every ``s``.

    Borwein's acceleration with ``n ~ 1.3 pi |t| / log(3 + sqrt 8) + 60``
    terms; accurate to about 1e-12 relative for moderate ``|re s|`` and
    ``|t|`` up to 1e4.  Accepts scalars or arrays.

    Raises
    ------
    PrecisionLoss
        The alternating sum cancels so badly (large negative ``re s``) that
        fewer than eight digits would survive.
    """
    s_arr = np.asarray(s, dtype=complex)
    flat = s_arr.ravel()
    out = np.empty(flat.shape, dtype=complex)
    need = np.array([_borwein_terms(v.imag) for v in flat], dtype=int)
    # bucket by term count so each block shares its weights
    buckets = (need + 31) // 32 * 32
    for n in np.unique(buckets):
        idx = np.nonzero(buckets == n)[0]
        e = _borwein_weights(int(n)) * np.where(np.arange(n) % 2 == 0, 1.0, -1.0)
        logk = np.log(np.arange(1, n + 1, dtype=float))
        step = max(1, _BLOCK // int(n))
        for j0 in range(0, len(idx), step):
            sel = idx[j0:j0 + step]
            terms = np.exp(-np.outer(flat[sel], logk))
            vals = terms @ e
            mass = np.abs(terms) @ np.abs(e)
            bad = _EPS * mass > 1e-8 * np.maximum(np.abs(vals), 1.0)
            if np.any(bad):
                raise PrecisionLoss(
                    f"eta at s = {flat[sel][bad][0]} loses more than 8 digits to cancellation"
                )
            out[sel] = vals
    out = out.reshape(s_arr.shape)
    return complex(out) if out.ndim == 0 else out


def zeta_oracle(s):
    """Riemann zeta for ``re s > 1.1`` by direct summation plus Euler-Maclaurin tail.

    Raises
    ------
    DomainError
        If any ``re s <= 1.1``.
    """
    s_arr = np.asarray(s, dtype=complex)
    if np.any(s_arr.real <= 1.1):
        raise DomainError("zeta_oracle needs re s > 1.1")
    flat = s_arr.ravel()
    N = 32 + int(math.ceil(np.max(np.abs(flat)))) if len(flat) else 32
    n = np.arange(1, N, dtype=float)
    out = np.empty(flat.shape, dtype=complex)
    B = bernoulli(16)
    step = max(1, _BLOCK // N)
    for j0 in range(0, len(flat), step):
        sv = flat[j0:j0 + step]
        head = np.exp(-np.outer(sv, np.log(n))).sum(axis=1)
        NN = float(N)
        tail = NN ** (1 - sv) / (sv - 1) + 0.5 * NN ** (-sv)
        rising = sv.copy()  # s (s+1) ... (s+2j-2)
        for j in range(1, 8):
            tail += B[2 * j] / math.factorial(2 * j) * rising * NN ** (-sv - 2 * j + 1)
            rising = rising * (sv + 2 * j - 1) * (sv + 2 * j)
        out[j0:j0 + step] = head + tail
    out = out.reshape(s_arr.shape)
    return complex(out) if out.ndim == 0 else out


def _is_ordinary(freq) -> bool:
    if freq.generator is GENERATORS["log"]:
        return True
    m = min(len(freq.values), 64)
    return m > 0 and np.allclose(freq.values[:m], np.log(np.arange(1, m + 1)), rtol=0, atol=1e-12)


def cesaro_eval(D: DirichletSeries, s: complex, N: int) -> complex:
    """First Cesaro mean ``(1/N) sum_{n<=N} sum_{k<=n} a_k k**(-s)`` of an ordinary series.

    Uses the equivalent weighting ``sum_k a_k k**(-s) (N - k + 1) / N``.

    Raises
    ------
    WrongFrequency
        The series is not over ``lam = (log n)``.
    """
    if not _is_ordinary(D.frequency):
        raise WrongFrequency("Cesaro evaluation needs the frequency (log n)")
    if N < 1:
        raise ValidationError("N must be >= 1")
    length = D.length
    M = N if length is None else min(N, length)
    k = np.arange(1, M + 1)
    a = D.coefficients_upto(M) * np.exp(-complex(s) * np.log(k))
    return complex(np.sum(a * (N - k + 1)) / N)


@dataclass(frozen=True)
class KnownFact:
    """One recorded property of a catalog entry.

    ``provenance`` is ``"literature"`` (a published result), ``"derived"``
    (follows from a closed form or a computation) or ``"trivial"``.
    ``testable`` is False when no finite computation can check it.
    """

    quantity: str
    value: object
    provenance: str
    testable: bool = True
    note: str = ""

    def to_dict(self) -> dict:
        v = self.value
        if isinstance(v, float) and math.isinf(v):
            v = "inf" if v > 0 else "-inf"
        return {"quantity": self.quantity, "value": v, "provenance": self.provenance,
                "testable": self.testable, "note": self.note}


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    series: DirichletSeries
    oracle: Callable
    region: Callable[[np.ndarray], np.ndarray]
    region_text: str
    known_facts: tuple[KnownFact, ...] = field(default_factory=tuple)

    def fact(self, quantity: str) -> Optional[KnownFact]:
        return next((f for f in self.known_facts if f.quantity == quantity), None)

    def in_region(self, s) -> np.ndarray:
        return np.asarray(self.region(np.asarray(s, dtype=complex)), dtype=bool)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "series": self.series.to_dict(),
            "oracle_region": self.region_text,
            "known_facts": [f.to_dict() for f in self.known_facts],
        }


def _everywhere(s):
    return np.ones(np.shape(s), dtype=bool)


def _sqrtlog_oracle(s):
    n = np.arange(1, 51, dtype=float)
    s = np.asarray(s, dtype=complex)
    out = np.exp(-np.multiply.outer(s, np.sqrt(np.log(n)))) @ (1.0 / n)
    return complex(out) if out.ndim == 0 else out


def _abscissas(c, u, a, prov="derived"):
    return (KnownFact("sigma_c", c, prov), KnownFact("sigma_u", u, prov), KnownFact("sigma_a", a, prov))


def _build() -> dict[str, CatalogEntry]:
    ninf = -math.inf
    power = power_frequency()
    ordinary = ordinary_frequency()
    entries = [
        CatalogEntry(
            "single0",
            DirichletSeries(make_frequency([0.0, 1.0], label="custom"), table([1.0]), 0.0, "single0"),
            lambda s: np.ones_like(np.asarray(s, dtype=complex)),
            _everywhere, "entire",
            _abscissas(ninf, ninf, ninf, "trivial") + (KnownFact("lambda_1", 0.0, "trivial"),),
        ),
        CatalogEntry(
            "single1",
            DirichletSeries(power, table([1.0]), 0.0, "single1"),
            lambda s: np.exp(-np.asarray(s, dtype=complex)),
            _everywhere, "entire",
            _abscissas(ninf, ninf, ninf, "trivial") + (KnownFact("lambda_1", 1.0, "trivial"),),
        ),
        CatalogEntry(
            "two_term",
            DirichletSeries(power, table([2.0, 3.0]), 0.0, "two_term"),
            lambda s: 2 * np.exp(-np.asarray(s, dtype=complex)) + 3 * np.exp(-2 * np.asarray(s, dtype=complex)),
            _everywhere, "entire",
            _abscissas(ninf, ninf, ninf, "trivial") + (KnownFact("lambda_1", 1.0, "trivial"),),
        ),
        CatalogEntry(
            "geometric",
            DirichletSeries(power, ones(), 0.0, "geometric"),
            lambda s: 1.0 / np.expm1(np.asarray(s, dtype=complex)),
            lambda s: np.real(s) > 0, "re s > 0",
            _abscissas(0.0, 0.0, 0.0)
            + (KnownFact("L", 0.0, "literature"), KnownFact("lambda_1", 1.0, "trivial"),
               KnownFact("bc_beta", 1e-9, "trivial", note="gaps are 1, any beta > 0")),
        ),
        CatalogEntry(
            "eta",
            DirichletSeries(ordinary, alternating(), 0.0, "eta"),
            eta_oracle,
            lambda s: np.abs(s) <= 1e4, "entire; accuracy checked for |s| <= 1e4 with moderate re s",
            _abscissas(0.0, 1.0, 1.0, "literature")
            + (
                KnownFact("L", 1.0, "literature"),
                KnownFact("order(sigma<0)", "1/2 - sigma", "literature"),
                KnownFact("order(sigma>1)", 0.0, "literature"),
                KnownFact("member_H_inf_ell", "ell > 1/2", "literature"),
                KnownFact("not_member_H_inf_ell", "ell < 1/2", "literature", testable=False,
                          note="finite grids cannot falsify membership"),
                KnownFact("bc_beta", 1.0, "derived"),
                KnownFact("lambda_1", 0.0, "trivial"),
            ),
        ),
        CatalogEntry(
            "zeta",
            DirichletSeries(ordinary, ones(), 1.0, "zeta"),
            zeta_oracle,
            lambda s: np.real(s) > 1.1, "re s > 1.1",
            _abscissas(1.0, 1.0, 1.0, "literature")
            + (KnownFact("L", 1.0, "literature"), KnownFact("lambda_1", 0.0, "trivial")),
        ),
        CatalogEntry(
            "zeta_translate",
            DirichletSeries(ordinary, expr("n**-2.0"), 0.0, "zeta_translate"),
            lambda s: zeta_oracle(np.asarray(s, dtype=complex) + 2.0),
            lambda s: np.real(s) > -0.9, "re s > -0.9",
            _abscissas(-1.0, -1.0, -1.0, "derived")
            + (KnownFact("L", 1.0, "literature"), KnownFact("lambda_1", 0.0, "trivial"),
               KnownFact("bc_beta", 1.0, "derived")),
        ),
        CatalogEntry(
            "sqrtlog_sample",
            DirichletSeries(sqrtlog_frequency(), table(1.0 / np.arange(1, 51)), 0.0, "sqrtlog_sample"),
            _sqrtlog_oracle,
            _everywhere, "entire (finite sum of 50 terms)",
            _abscissas(ninf, ninf, ninf, "trivial")
            + (KnownFact("L", math.inf, "derived"), KnownFact("lambda_1", 0.0, "trivial"),
               KnownFact("satisfies_BC", False, "literature"), KnownFact("satisfies_LC", True, "literature")),
        ),
    ]
    return {e.name: e for e in entries}


_CATALOG: Optional[dict[str, CatalogEntry]] = None


def catalog_list() -> list[CatalogEntry]:
    """All catalog entries (built once, then shared)."""
    global _CATALOG
    if _CATALOG is None:
        _CATALOG = _build()
    return list(_CATALOG.values())


def get_entry(name: str) -> CatalogEntry:
    catalog_list()
    try:
        return _CATALOG[name]
    except KeyError:
        raise UnknownCatalogEntry(f"no catalog entry named {name!r}") from None
