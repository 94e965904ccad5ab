"""Laplace/Perron transform pair for summatory functions.

* :func:`laplace_forward` -- ``int_0^T exp(-s t) S_t^k(D)(0) dt``, which tends
  to ``Gamma(1+k) f(s) / s**(1+k)``.
* :func:`perron_summatory` -- the inverse direction, a truncated contour
  integral over ``re s = c``.
* :func:`recover_coefficients` -- peel ``a_1, a_2, ...`` from Perron values at
  midpoints between frequencies.
* :func:`order_raise` -- ``S^{k+mu}`` from ``S^k`` by a Beta-kernel integral.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.special import gammaincc, gammaln

from ._oracle import evaluate
from ._quadrature import graded_edges, grading_depth, panel_rule, uniform_edges
from .errors import (
    DomainError,
    IllSeparated,
    NonintegrableOrder,
    NonPositiveX,
    TailDominates,
    TruncationTooSmall,
    ValidationError,
)
from .frequency import Frequency
from .series import DirichletSeries, RieszSpec, means_grid, partial_sum, translate
from .special import gamma_fn

_BLOCK = 4_000_000


@dataclass(frozen=True)
class QuadratureConfig:
    """Controls shared by every integral in this module.

    Parameters
    ----------
    truncation_T : float, optional
        Upper limit replacing infinity (Laplace) or ``|im s|`` cut-off
        (Perron).  ``None`` picks the smallest value whose tail bound meets
        ``tolerance``.
    contour_c : float, optional
        Perron abscissa; ``None`` means ``1/x``.
    cell_order : int
        Gauss-Legendre nodes per panel.
    tolerance : float
        Absolute target for tail bounds and graded-mesh remainders.
    max_cells : int
        Hard cap on the number of panels.
    max_step : float, optional
        Largest Perron panel; defaults to ``min(2c, 8/(x+1), 2)``.
    """

    truncation_T: Optional[float] = None
    contour_c: Optional[float] = None
    cell_order: int = 20
    tolerance: float = 1e-6
    max_cells: int = 2_000_000
    max_step: Optional[float] = None

    def __post_init__(self):
        if self.truncation_T is not None and not self.truncation_T > 0:
            raise ValidationError("truncation_T must be positive")
        if self.contour_c is not None and not self.contour_c > 0:
            raise ValidationError("contour_c must be positive")
        if not self.tolerance > 0:
            raise ValidationError("tolerance must be positive")
        if self.cell_order < 1 or self.max_cells < 1:
            raise ValidationError("cell_order and max_cells must be positive")


@dataclass
class TransformResult:
    value: complex
    tail_bound: float
    cells_used: int

    def to_dict(self) -> dict:
        return {
            "value": [self.value.real, self.value.imag],
            "tail_bound": self.tail_bound,
            "cells": self.cells_used,
        }


def summatory_at(lam: np.ndarray, c: np.ndarray, k: float, u) -> np.ndarray:
    """``sum_{lam_n < u} c_n (u - lam_n)**k`` for every ``u`` (vectorised)."""
    u = np.asarray(u, dtype=float)
    out = np.zeros(u.shape, dtype=complex)
    flat = u.ravel()
    res = out.ravel()
    step = max(1, _BLOCK // max(len(lam), 1))
    for i in range(0, len(flat), step):
        d = flat[i:i + step, None] - lam[None, :]
        w = np.where(d > 0, np.abs(d) ** k, 0.0)
        res[i:i + step] = w @ c
    return res.reshape(u.shape)


def _is_integer(v: float) -> bool:
    return float(v).is_integer()


# ---------------------------------------------------------------- Laplace

def _laplace_tail(M: float, k: float, sigma: float, T: float) -> float:
    """``M * int_T^inf (1+t)**(k+1) exp(-sigma t) dt`` in closed form."""
    m = k + 1.0
    q = gammaincc(m + 1.0, sigma * (1.0 + T))
    if q == 0 or M == 0:
        return 0.0
    return float(M * math.exp(sigma - (m + 1.0) * math.log(sigma) + gammaln(m + 1.0) + math.log(q)))


def _envelope(D: DirichletSeries, k: float, T: float, samples: int = 256) -> float:
    """Sampled ``sup |S_t^k(D)(0)| / (1+t)**(k+1)`` on ``(0, T]``."""
    ts = np.linspace(T / samples, T, samples)
    S = means_grid(D, RieszSpec(k), [0.0], ts, summatory=True)[:, 0]
    return float(np.max(np.abs(S) / (1.0 + ts) ** (k + 1.0)))


def laplace_forward(D: DirichletSeries, k: float, s: complex,
                    cfg: QuadratureConfig = QuadratureConfig()) -> TransformResult:
    """Truncated Laplace transform of the summatory function at 0.

    Computes ``int_0^T exp(-s t) S_t^k(D)(0) dt``.  Swapping sum and integral
    gives ``sum_n a_n exp(-s lam_n) I(T - lam_n)`` with
    ``I(L) = int_0^L v**k exp(-s v) dv``; ``I`` is accumulated panel by panel
    over the breakpoints ``T - lam_n`` so each panel integrand is smooth
    (graded toward ``v = 0`` for non-integer ``k``).

    The tail bound is ``M int_T^inf (1+t)**(k+1) exp(-re(s) t) dt`` with
    ``M`` the sampled sup of ``|S_t| / (1+t)**(k+1)``, an envelope that also
    covers polynomially growing summatory functions.

    Raises
    ------
    DomainError
        ``re s <= 0``.
    TruncationTooSmall
        The tail bound exceeds ``cfg.tolerance``.
    """
    s = complex(s)
    if not s.real > 0:
        raise DomainError("laplace_forward needs re s > 0")
    if k < 0:
        raise ValidationError("k must be >= 0")
    sigma = s.real
    tol = cfg.tolerance
    if cfg.truncation_T is None:
        T = max(8.0 / sigma, 1.0)
        for _ in range(400):
            tail = _laplace_tail(_envelope(D, k, T), k, sigma, T)
            if tail <= tol / 4:
                break
            T *= 1.25
    else:
        T = float(cfg.truncation_T)
        tail = _laplace_tail(_envelope(D, k, T), k, sigma, T)
    if tail > tol:
        raise TruncationTooSmall(f"tail bound {tail:.3g} exceeds tolerance {tol:.3g} at T={T:.4g}")

    lam, a = D.terms_below(T)
    if len(lam) == 0:
        return TransformResult(0j, tail, 0)
    L = (T - lam)[::-1]  # ascending breakpoints
    h = min(1.0, 4.0 / abs(s))
    edges = np.union1d(np.concatenate([[0.0], L]), uniform_edges(0.0, L[-1], h))
    if not _is_integer(k) and len(edges) > 1:
        scale = float(np.sum(np.abs(a) * np.exp(-sigma * lam)))
        depth = grading_depth(edges[1], k, scale, tol * 1e-3)
        g = edges[1] * 0.5 ** np.arange(1, depth + 1)
        edges = np.union1d(edges, g)
    if len(edges) - 1 > cfg.max_cells:
        raise TruncationTooSmall(f"{len(edges) - 1} panels exceed max_cells={cfg.max_cells}")
    nodes, weights = panel_rule(edges, cfg.cell_order)
    vals = weights * nodes ** k * np.exp(-s * nodes)
    panel = vals.reshape(len(edges) - 1, cfg.cell_order).sum(axis=1)
    cum = np.concatenate([[0.0], np.cumsum(panel)])
    I = cum[np.searchsorted(edges, L)][::-1]
    value = complex(np.sum(a * np.exp(-s * lam) * I))
    return TransformResult(value, tail, len(edges) - 1)


def laplace_limit(D: DirichletSeries, k: float, s: complex,
                  cfg: QuadratureConfig = QuadratureConfig()) -> complex:
    """Limit function recovered from the Laplace side: ``value * s**(1+k) / Gamma(1+k)``."""
    r = laplace_forward(D, k, s, cfg)
    return r.value * complex(s) ** (1 + k) / gamma_fn(1.0 + k)


# ---------------------------------------------------------------- Perron

class _Contour:
    """Gauss panels on ``re s = c`` with cached ``f`` values."""

    def __init__(self, f, c: float, h: float, order: int, max_cells: int):
        self.f, self.c, self.h, self.order, self.max_cells = f, c, h, order, max_cells
        self.T = 0.0
        self.s = np.zeros(0, dtype=complex)
        self.w = np.zeros(0)
        self.fs = np.zeros(0, dtype=complex)

    @property
    def cells(self) -> int:
        return len(self.w) // self.order

    def extend(self, T: float):
        if T <= self.T:
            return
        n_new = 2 * int(math.ceil((T - self.T) / self.h))
        if self.cells + n_new > self.max_cells:
            raise TailDominates(
                f"contour to |t|={T:.4g} needs more than max_cells={self.max_cells} panels"
            )
        right = uniform_edges(self.T, T, self.h)
        y, w = panel_rule(right, self.order)
        y = np.concatenate([-y[::-1], y])
        w = np.concatenate([w[::-1], w])
        s = self.c + 1j * y
        self.fs = np.concatenate([self.fs, evaluate(self.f, s)])
        self.s = np.concatenate([self.s, s])
        self.w = np.concatenate([self.w, w])
        self.T = T

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.fs))) if len(self.fs) else 0.0

    def summatory(self, k: float, xs: np.ndarray) -> np.ndarray:
        base = self.w * self.fs / self.s ** (1.0 + k)
        pref = gamma_fn(1.0 + k) / (2 * math.pi)
        return np.array([pref * np.sum(base * np.exp(x * self.s)) for x in xs])


def _perron_tail(k: float, x: float, c: float, T: float, M: float, ell: float) -> float:
    """Envelope bound on the discarded ``|im s| > T`` part of the contour."""
    if k <= ell:
        return math.inf
    return float(
        gamma_fn(1.0 + k) / (2 * math.pi) * math.exp(x * c) * M
        * (1.0 + (1.0 + c) / T) ** ell * 2.0 * T ** (ell - k) / (k - ell)
    )


def _solve_T(k, x, c, M, ell, tol, T_min) -> float:
    if k <= ell:
        raise TailDominates(f"growth exponent {ell} is not below the order k={k}")
    T = T_min
    for _ in range(3):
        C = gamma_fn(1.0 + k) / (2 * math.pi) * math.exp(x * c) * M * (1 + (1 + c) / T) ** ell
        T = max(T_min, (2.0 * C / ((k - ell) * tol)) ** (1.0 / (k - ell)))
    return T


def _perron_setup(f, k, x_max, cfg, growth, allow_low_order):
    if k < 1 and not allow_low_order:
        raise NonintegrableOrder(
            f"k={k} < 1: the truncated contour tail decays too slowly; pass allow_low_order=True"
        )
    if k < 0:
        raise ValidationError("k must be >= 0")
    c = cfg.contour_c if cfg.contour_c is not None else 1.0 / x_max
    h = cfg.max_step or min(2 * c, 8.0 / (x_max + 1.0), 2.0)
    contour = _Contour(f, c, h, cfg.cell_order, cfg.max_cells)
    return contour, c


def _run_contour(contour: _Contour, k, x_max, c, cfg, growth, tol) -> float:
    """Extend the contour until its tail bound meets ``tol``; return the bound."""
    T_min = 64.0
    if cfg.truncation_T is not None:
        contour.extend(cfg.truncation_T)
        M, ell = growth if growth is not None else (contour.max_abs(), 0.0)
        tail = _perron_tail(k, x_max, c, contour.T, M, ell)
        if tail > tol:
            raise TailDominates(f"tail bound {tail:.3g} exceeds tolerance {tol:.3g}")
        return tail
    contour.extend(T_min)
    for _ in range(4):
        M, ell = growth if growth is not None else (contour.max_abs(), 0.0)
        T = _solve_T(k, x_max, c, M, ell, tol / 2, T_min)
        contour.extend(T)
        if growth is None:
            M = contour.max_abs()
        tail = _perron_tail(k, x_max, c, contour.T, M, ell)
        if tail <= tol:
            return tail
    raise TailDominates(f"tail bound {tail:.3g} exceeds tolerance {tol:.3g}")


def perron_summatory(
    f: Callable,
    k: float,
    x: float,
    cfg: QuadratureConfig = QuadratureConfig(),
    growth: Optional[tuple[float, float]] = None,
    allow_low_order: bool = False,
) -> TransformResult:
    """Summatory function ``S_x^k(D)(0)`` from the limit function ``f`` of ``D``.

    Evaluates ``Gamma(1+k)/(2 pi) int_{-T}^{T} f(c+iy) exp(x(c+iy)) /
    (c+iy)**(1+k) dy`` with composite Gauss-Legendre panels.

    Parameters
    ----------
    growth : (M, ell), optional
        Caller bound ``|f(s)| <= M (1+|s|)**ell`` on the contour.  Without it
        ``M`` is the largest sampled ``|f|`` and ``ell = 0``, a heuristic.

    Raises
    ------
    NonintegrableOrder
        ``k < 1`` unless ``allow_low_order``.
    TailDominates
        The envelope tail bound cannot be pushed below ``cfg.tolerance``.
    """
    if not x > 0:
        raise NonPositiveX("x must be positive")
    contour, c = _perron_setup(f, k, x, cfg, growth, allow_low_order)
    tail = _run_contour(contour, k, x, c, cfg, growth, cfg.tolerance)
    value = complex(contour.summatory(k, np.array([x]))[0])
    return TransformResult(value, tail, contour.cells)


def recover_coefficients(
    f: Callable,
    freq: Frequency,
    k: float,
    n_max: int,
    cfg: QuadratureConfig = QuadratureConfig(),
    growth: Optional[tuple[float, float]] = None,
    spacing_floor: float = 1e-8,
) -> list[complex]:
    """Recover ``a_1..a_{n_max}`` of the series whose limit function is ``f``.

    One contour with ``c = 1/x_{n_max}`` is shared by all midpoints
    ``x_n = (lam_n + lam_{n+1})/2``.  Coefficient ``n`` is

        ``(S(x_n) - sum_{j<n} a_j (x_n - lam_j)**k) / (x_n - lam_n)**k``.

    ``cfg.tolerance`` is a coefficient-level target: the contour is run to
    ``tolerance * min_n (x_n - lam_n)**k``.

    Raises
    ------
    IllSeparated
        A gap ``lam_{n+1} - lam_n`` is below ``spacing_floor``.
    """
    if n_max < 1:
        raise ValidationError("n_max must be >= 1")
    lam = freq.upto(n_max + 1)
    gaps = np.diff(lam)
    if np.any(gaps < spacing_floor):
        raise IllSeparated(f"gap below {spacing_floor} among the first {n_max + 1} frequencies")
    xs = (lam[:-1] + lam[1:]) / 2
    x_max = float(xs[-1])
    d = (xs - lam[:-1]) ** k
    contour, c = _perron_setup(f, k, x_max, cfg, growth, False)
    _run_contour(contour, k, x_max, c, cfg, growth, cfg.tolerance * float(np.min(d)))
    S = contour.summatory(k, xs)
    a: list[complex] = []
    for n in range(n_max):
        known = sum(a[j] * (xs[n] - lam[j]) ** k for j in range(n))
        a.append(complex((S[n] - known) / d[n]))
    return a


# ---------------------------------------------------------------- identities

def order_raise(D: DirichletSeries, k: float, mu: float, x: float, s: complex = 0j,
                cfg: QuadratureConfig = QuadratureConfig()) -> TransformResult:
    """``S_x^{k+mu}(D)(s)`` as ``Gamma(k+mu+1)/(Gamma(k+1)Gamma(mu)) int_0^x S_u^k (x-u)**(mu-1) du``.

    Panels follow the frequencies below ``x``.  Non-integer ``k`` grades each
    panel toward its left frequency, non-integer ``mu`` grades the last one
    toward ``u = x`` (ratio 1/2, depth chosen from ``cfg.tolerance``).

    Raises
    ------
    SingularityUnresolved
        The grading depth needed for ``cfg.tolerance`` exceeds the cap.
    """
    if k < 0 or not mu > 0:
        raise ValidationError("need k >= 0 and mu > 0")
    if not x > 0:
        raise NonPositiveX("x must be positive")
    lam, a = D.terms_below(x)
    if len(lam) == 0:
        return TransformResult(0j, 0.0, 0)
    c = a * np.exp(-lam * complex(s))
    size = float(np.sum(np.abs(c))) * max(x - lam[0], 1e-300) ** (k + mu)
    tol = cfg.tolerance * max(size, 1e-300) * 1e-3
    bounds = np.concatenate([lam, [x]])
    grade_left = not _is_integer(k)
    grade_right = not _is_integer(mu)
    total = 0j
    cells = 0
    for j in range(len(lam)):
        lo, hi = bounds[j], bounds[j + 1]
        width = hi - lo
        ld = rd = 0
        if grade_left:
            scale = float(np.sum(np.abs(c[:j + 1]))) * max(width, x - hi, 1e-300) ** min(mu - 1, 0)
            ld = grading_depth(width, k, scale, tol)
        if grade_right and j == len(lam) - 1:
            scale = float(np.sum(np.abs(c))) * x ** k
            rd = grading_depth(width, mu - 1, scale, tol)
        # work in v = x - u so nodes near u = x keep full relative precision
        edges = graded_edges(x - hi, x - lo, rd, ld, max_width=max(width / 4, 1.0))
        cells += len(edges) - 1
        v, w = panel_rule(edges, cfg.cell_order)
        S = summatory_at(lam[:j + 1], c[:j + 1], k, x - v)
        total += np.sum(w * S * v ** (mu - 1))
    factor = math.exp(gammaln(k + mu + 1) - gammaln(k + 1) - gammaln(mu))
    return TransformResult(complex(factor * total), 0.0, cells)


def order_change_identity_check(D: DirichletSeries, p: float, q: float, w: complex, s: complex = 0j,
                         cfg: QuadratureConfig = QuadratureConfig()) -> tuple[complex, complex]:
    """Both sides of the order-change identity for weighted Laplace integrals.

    ``lhs = int_0^inf S_x^q(D)(s) w**(q+1) exp(-w x) dx`` and
    ``rhs = Gamma(q+1)/Gamma(p+1) int_0^inf S_u^p(D)(s) w**(p+1) exp(-w u) du``,
    each truncated as in :func:`laplace_forward`.
    """
    if not 0 <= p < q:
        raise ValidationError("need 0 <= p < q")
    w = complex(w)
    if not w.real > 0:
        raise DomainError("need re w > 0")
    Ds = translate(D, s)
    lhs = w ** (q + 1) * laplace_forward(Ds, q, w, cfg).value
    rhs = (gamma_fn(q + 1.0) / gamma_fn(p + 1.0)) * w ** (p + 1) * laplace_forward(Ds, p, w, cfg).value
    return complex(lhs), complex(rhs)


def abel_identity_check(D: DirichletSeries, s: complex, w: complex, x: float,
                        cfg: QuadratureConfig = QuadratureConfig()) -> tuple[complex, complex]:
    """Both sides of the partial-summation identity

    ``S_x(s+w) = S_x(w) exp(-s x) + int_0^x S_t(w) s exp(-s t) dt``,

    the integral taken by Gauss-Legendre panels between consecutive
    frequencies (where ``S_t(w)`` is constant).  The plus sign comes from
    ``d exp(-s t) = -s exp(-s t) dt`` in the Stieltjes partial integration.
    """
    s, w = complex(s), complex(w)
    if x < 0:
        raise NonPositiveX("x must be >= 0")
    lhs = partial_sum(D, s + w, x)
    lam, a = D.terms_below(x)
    if len(lam) == 0:
        return complex(lhs), 0j
    P = np.cumsum(a * np.exp(-lam * w))
    bounds = np.concatenate([lam, [x]])
    h = min(1.0, 4.0 / max(abs(s), 1e-300))
    integral = 0j
    for j in range(len(lam)):
        edges = uniform_edges(bounds[j], bounds[j + 1], h)
        t, wt = panel_rule(edges, cfg.cell_order)
        integral += P[j] * np.sum(wt * s * np.exp(-s * t))
    rhs = P[-1] * np.exp(-s * x) + integral
    return complex(lhs), complex(rhs)
