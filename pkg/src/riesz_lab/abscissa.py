"""Abscissa and growth-order estimators.

Every abscissa is a finite-window surrogate of a limsup: the sup of
``log|quantity(x)| / x`` over the tail half ``x >= (x_min + x_max)/2`` of
the sample window.  When the true abscissa is negative the estimate is only
an upper bound (``upper_bound_only`` is set).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._oracle import evaluate
from .errors import EvaluationFailure, ValidationError
from .series import DirichletSeries, RieszSpec, means_grid


@dataclass
class AbscissaEstimate:
    value: float
    kind: str
    riesz_order: float
    window: tuple[float, float]
    slope_trace: list[tuple[float, float]] = field(default_factory=list)
    riesz_kind: str = "first"

    @property
    def upper_bound_only(self) -> bool:
        """True when the estimate is negative, where the limsup formula only bounds."""
        return self.value < 0

    def to_dict(self) -> dict:
        def num(v):
            return v if math.isfinite(v) else ("inf" if v > 0 else "-inf")

        return {
            "value": num(self.value),
            "kind": self.kind,
            "riesz_order": self.riesz_order,
            "riesz_kind": self.riesz_kind,
            "window": list(self.window),
            "upper_bound_only": self.upper_bound_only,
            "slope_trace": [[x, num(v)] for x, v in self.slope_trace],
        }


@dataclass
class OrderEstimate:
    sigma: float
    exponent: float
    fit_range: tuple[float, float]
    residual: float
    raw_slope: float = math.nan

    def to_dict(self) -> dict:
        return {"sigma": self.sigma, "exponent": self.exponent,
                "fit_range": list(self.fit_range), "residual": self.residual,
                "raw_slope": self.raw_slope}


@dataclass(frozen=True)
class ConeSpec:
    apex: complex
    half_angle: float

    def __post_init__(self):
        if not 0 < self.half_angle < math.pi / 2:
            raise ValidationError("cone half angle must lie in (0, pi/2)")


def _check_window(xs) -> np.ndarray:
    xs = np.asarray(xs, dtype=float)
    if len(xs) < 2 or np.any(np.diff(xs) <= 0) or xs[0] <= 0:
        raise ValidationError("xs must be positive and strictly increasing")
    if xs[-1] < 100 * xs[0]:
        raise ValidationError("the x window must span at least two decades")
    return xs


def _tail_sup(xs: np.ndarray, magnitudes: np.ndarray, kind: str, k: float,
              riesz_kind: str = "first") -> AbscissaEstimate:
    with np.errstate(divide="ignore"):
        slopes = np.log(magnitudes) / xs
    tail = xs >= (xs[0] + xs[-1]) / 2
    value = float(np.max(slopes[tail]))
    trace = [(float(x), float(v)) for x, v in zip(xs, slopes)]
    return AbscissaEstimate(value, kind, k, (float(xs[0]), float(xs[-1])), trace, riesz_kind)


def bohr_cahen_pointwise(D: DirichletSeries, k: float, xs, kind: str = "first") -> AbscissaEstimate:
    """Estimate of the ``(lam, k)`` convergence abscissa from ``|R_x(0)|``.

    Returns ``-inf`` when every sampled mean vanishes.
    """
    xs = _check_window(xs)
    R = means_grid(D, RieszSpec(k, kind), [0.0], xs)[:, 0]
    return _tail_sup(xs, np.abs(R), "pointwise", k, kind)


def bohr_cahen_uniform(D: DirichletSeries, k: float, xs, t_grid, kind: str = "first") -> AbscissaEstimate:
    """As :func:`bohr_cahen_pointwise` with ``sup_t |R_x(it)|`` over ``t_grid``."""
    xs = _check_window(xs)
    t = np.sort(np.asarray(t_grid, dtype=float))
    if len(t) == 0 or not np.allclose(t, -t[::-1], rtol=0, atol=1e-12 * max(1.0, np.max(np.abs(t)))):
        raise ValidationError("t_grid must be symmetric around 0")
    R = means_grid(D, RieszSpec(k, kind), 1j * t, xs)
    return _tail_sup(xs, np.max(np.abs(R), axis=1), "uniform", k, kind)


def absolute_abscissa(D: DirichletSeries, xs) -> AbscissaEstimate:
    """Estimate of the absolute abscissa from ``sum_{lam_n < x} |a_n|``."""
    xs = _check_window(xs)
    lam, a = D.terms_below(float(xs[-1]))
    csum = np.concatenate([[0.0], np.cumsum(np.abs(a))])
    mags = csum[np.searchsorted(lam, xs, side="left")]
    return _tail_sup(xs, mags, "absolute", 0.0)


def order_at(f, sigma: float, t_grid) -> OrderEstimate:
    """Growth exponent of ``|f(sigma + it)|`` by a log-log least-squares fit.

    The slope is clipped below at 0; ``residual`` is the largest deviation
    of ``log|f|`` from the fitted line.

    Raises
    ------
    EvaluationFailure
        ``f`` is undefined, non-finite or zero at a sample.
    """
    t = np.asarray(t_grid, dtype=float)
    if len(t) < 3 or t[0] < 10:
        raise ValidationError("t_grid needs at least 3 points with t_min >= 10")
    r = t[1:] / t[:-1]
    if np.any(r <= 1) or not np.allclose(r, r[0], rtol=1e-6):
        raise ValidationError("t_grid must be log-spaced and increasing")
    vals = evaluate(f, sigma + 1j * t)
    mag = np.abs(vals)
    if np.any(mag == 0):
        raise EvaluationFailure("f vanishes at a sample, log|f| undefined")
    X = np.log(t)
    Y = np.log(mag)
    slope, intercept = np.polyfit(X, Y, 1)
    resid = float(np.max(np.abs(Y - (slope * X + intercept))))
    return OrderEstimate(float(sigma), float(max(slope, 0.0)), (float(t[0]), float(t[-1])),
                         resid, float(slope))


def cone_points(cone: ConeSpec, ray_samples: int, radii) -> np.ndarray:
    """Sample points ``apex + r exp(i theta)`` on ``ray_samples`` rays of the cone."""
    if ray_samples < 3:
        raise ValidationError("need at least 3 rays")
    theta = np.linspace(-cone.half_angle, cone.half_angle, ray_samples)
    radii = np.asarray(radii, dtype=float)
    return (complex(cone.apex) + np.outer(radii, np.exp(1j * theta))).ravel()


def cone_uniformity(D: DirichletSeries, cone: ConeSpec, xs, ray_samples: int = 9,
                    radii=(0.0, 0.5, 1.0, 1.5, 2.0), k: float = 0.0) -> float:
    """Largest tail oscillation of the means over a truncated cone.

    For each sample ``s`` this is ``max |R_x(s) - R_x'(s)|`` over ``x, x'`` in
    the last quartile of ``xs`` (partial sums for ``k = 0``); the maximum over
    all samples is returned.
    """
    xs = np.asarray(xs, dtype=float)
    if len(xs) == 0 or np.any(np.diff(xs) <= 0):
        raise ValidationError("xs must be strictly increasing")
    s = cone_points(cone, ray_samples, radii)
    q = max(2, int(math.ceil(len(xs) / 4)))
    vals = means_grid(D, RieszSpec(k), s, xs[-q:])
    diam = np.abs(vals[:, None, :] - vals[None, :, :]).max(axis=(0, 1))
    return float(np.max(diam))
