"""Grid diagnostics for the weighted sup-norm ``sup |f(s)| / (1+|s|)**ell`` on ``re s > 0``.

All sups are maxima over finite grids, hence lower bounds of the true
suprema.  Functions taking a ``DirichletSeries`` evaluate Riesz means on the
grid; the limit function itself comes from a caller-supplied oracle when one
is given, otherwise from a high-``x`` second-kind mean (see
:func:`limit_function`).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from ._oracle import evaluate
from .errors import Lambda1Zero, NotReached, PreconditionError, ValidationError, ZeroNorm
from .series import DirichletSeries, RieszSpec, means_grid

ZERO_NORM_FLOOR = 1e-15
# cap on the number of terms used by limit_function's default cut-off
LIMIT_TERMS = 1_000_000


@dataclass(frozen=True)
class EvalGrid:
    """Sample points ``sigma + i t`` (outer product of both axes)."""

    sigma_values: np.ndarray
    t_values: np.ndarray
    resolution: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        sig = np.asarray(self.sigma_values, dtype=float)
        t = np.asarray(self.t_values, dtype=float)
        if len(sig) == 0 or len(t) == 0:
            raise ValidationError("grid axes must be non-empty")
        if np.any(sig <= 0) or np.any(np.diff(sig) <= 0):
            raise ValidationError("sigma_values must be positive and increasing")
        object.__setattr__(self, "sigma_values", sig)
        object.__setattr__(self, "t_values", t)

    @property
    def points(self) -> np.ndarray:
        """Array of shape ``(len(sigma), len(t))``."""
        return self.sigma_values[:, None] + 1j * self.t_values[None, :]

    def to_dict(self) -> dict:
        return {"sigma": self.sigma_values.tolist(), "t": self.t_values.tolist(), **self.resolution}


def default_grid(sigma_min: float = 1e-3, sigma_max: float = 20.0, n_sigma: int = 40,
                 t_max: float = 50.0, n_t: int = 1001) -> EvalGrid:
    """Log-spaced ``sigma`` in ``[sigma_min, sigma_max]``, linear ``t`` in ``[-t_max, t_max]``."""
    return EvalGrid(np.geomspace(sigma_min, sigma_max, n_sigma), np.linspace(-t_max, t_max, n_t),
                    {"sigma_spacing": "log", "t_spacing": "linear"})


@dataclass(frozen=True)
class NormSpec:
    ell: float
    grid: EvalGrid

    def __post_init__(self):
        if not self.ell >= 0:
            raise ValidationError("ell must be >= 0")


@dataclass
class NormEstimate:
    value: float
    argmax: complex
    grid_used: EvalGrid

    def to_dict(self) -> dict:
        return {"value": self.value, "argmax": [self.argmax.real, self.argmax.imag]}


def limit_function(D: DirichletSeries, k: float = 1.0, x: Optional[float] = None,
                   kind: str = "second") -> Callable:
    """Approximate limit function ``s -> R_x(D)(s)`` at one large ``x``.

    The default ``x`` is ``lam_1 + 200`` capped at ``lam_{LIMIT_TERMS}``
    (or just past the last term of a finite series).
    """
    if x is None:
        L = D.length
        if L is not None:
            x = D.frequency.value(L) + 50.0
        else:
            x = min(D.frequency.value(1) + 200.0, D.frequency.value(LIMIT_TERMS))
    spec = RieszSpec(k, kind)

    def f(s):
        s_arr = np.asarray(s, dtype=complex)
        out = means_grid(D, spec, s_arr.ravel(), [x])[0].reshape(s_arr.shape)
        return complex(out) if out.ndim == 0 else out

    return f


def _weighted(values: np.ndarray, s: np.ndarray, ell: float) -> np.ndarray:
    return np.abs(values) / (1.0 + np.abs(s)) ** ell


def norm_inf_ell(f: Callable, spec: NormSpec) -> NormEstimate:
    """Grid maximum of ``|f(s)| / (1+|s|)**ell`` (a lower bound of the norm)."""
    pts = spec.grid.points
    vals = _weighted(evaluate(f, pts), pts, spec.ell)
    i = np.unravel_index(int(np.argmax(vals)), vals.shape)
    return NormEstimate(float(vals[i]), complex(pts[i]), spec.grid)


def _sup_t(f: Callable, sigmas: np.ndarray, t_grid: np.ndarray, weight) -> np.ndarray:
    pts = sigmas[:, None] + 1j * np.asarray(t_grid, dtype=float)[None, :]
    vals = np.abs(evaluate(f, pts)) / weight(pts)
    return vals.max(axis=1)


def far_left_profile(f: Callable, ell: float, sigmas, t_grid) -> list[tuple[float, float]]:
    """``sup_t |f(sigma+it)| / |1 + sigma + it|**ell`` for decreasing ``sigma -> 0``."""
    sigmas = np.asarray(sigmas, dtype=float)
    if np.any(sigmas <= 0) or np.any(np.diff(sigmas) >= 0):
        raise ValidationError("sigmas must be positive and strictly decreasing")
    prof = _sup_t(f, sigmas, t_grid, lambda s: np.abs(1.0 + s) ** ell)
    return [(float(a), float(b)) for a, b in zip(sigmas, prof)]


def log_convexity_check(f: Callable, sigma1: float, sigma2: float, n_abscissas: int, t_grid,
                        bound: Optional[float] = None) -> float:
    """Largest midpoint violation of convexity of ``log sup_t |f(sigma+it)|``.

    Samples ``n_abscissas`` equally spaced abscissas in ``[sigma1, sigma2]``
    and returns ``max_i log L(s_i) - (log L(s_{i-1}) + log L(s_{i+1}))/2``
    over interior points (``<= 0`` for convex data).

    Parameters
    ----------
    bound : float, optional
        Caller-asserted bound on ``|f|`` over the strip.  Sampled values
        above it reject the input with :class:`PreconditionError`.
    """
    if not 0 < sigma1 < sigma2:
        raise ValidationError("need 0 < sigma1 < sigma2")
    if n_abscissas < 3:
        raise ValidationError("need at least 3 abscissas")
    sig = np.linspace(sigma1, sigma2, n_abscissas)
    L = _sup_t(f, sig, t_grid, lambda s: 1.0)
    if bound is not None and np.max(L) > bound:
        raise PreconditionError(
            f"|f| reaches {np.max(L):.4g} on the strip, above the asserted bound {bound}"
        )
    if np.any(L <= 0):
        raise ValidationError("f vanishes on a whole sampled line")
    logL = np.log(L)
    return float(np.max(logL[1:-1] - 0.5 * (logL[:-2] + logL[2:])))


def far_right_decay(D: DirichletSeries, ell: float, sigmas, t_grid, f: Optional[Callable] = None,
                    ) -> list[tuple[float, float]]:
    """``sup_t |f(sigma+it)| / (1+|t|)**ell`` for increasing ``sigma``.

    ``f`` defaults to :func:`limit_function` of ``D``.

    Raises
    ------
    Lambda1Zero
        ``lam_1 = 0``: the profile then tends to ``a_1``, not 0.
    """
    if D.frequency.value(1) == 0:
        raise Lambda1Zero("far-right decay needs lam_1 > 0")
    sigmas = np.asarray(sigmas, dtype=float)
    if np.any(np.diff(sigmas) <= 0):
        raise ValidationError("sigmas must be increasing")
    f = f or limit_function(D)
    prof = _sup_t(f, sigmas, t_grid, lambda s: (1.0 + np.abs(s.imag)) ** ell)
    return [(float(a), float(b)) for a, b in zip(sigmas, prof)]


def _norms_of_means(D: DirichletSeries, spec: RieszSpec, xs: np.ndarray, grid: EvalGrid,
                    ell: float, shift: complex = 0j, f_vals: Optional[np.ndarray] = None) -> np.ndarray:
    """For each ``x``: grid max of ``|g(s) - R_x(s + shift)| / (1+|s|)**ell``.

    ``g`` is zero unless ``f_vals`` (limit values at ``s + shift``) is given.
    """
    pts = grid.points.ravel()
    R = means_grid(D, spec, pts + shift, xs)
    if f_vals is not None:
        R = f_vals.ravel()[None, :] - R
    return (np.abs(R) / (1.0 + np.abs(pts)) ** ell).max(axis=1)


def maximal_ratio(D: DirichletSeries, ell: float, k: float, xs, norm_grid: EvalGrid,
                  f: Optional[Callable] = None) -> tuple[float, list[tuple[float, float]]]:
    """``sup_x ||R_x f|| / ||f||`` with first-kind means of order ``k > ell``.

    Returns the sup and the trace ``(x, ratio)``.

    Raises
    ------
    ZeroNorm
        ``||f||`` on the grid is below ``1e-15``.
    """
    if not k > ell:
        raise ValidationError("maximal_ratio needs k > ell")
    xs = np.asarray(xs, dtype=float)
    f = f or limit_function(D)
    denom = norm_inf_ell(f, NormSpec(ell, norm_grid)).value
    if denom < ZERO_NORM_FLOOR:
        raise ZeroNorm(f"norm of f is {denom:.3g}")
    ratios = _norms_of_means(D, RieszSpec(k), xs, norm_grid, ell) / denom
    trace = [(float(x), float(r)) for x, r in zip(xs, ratios)]
    return float(np.max(ratios)), trace


def uniform_riesz_approx(f_set: Sequence[DirichletSeries], ell: float, k: float, u: float,
                         eps: float, xs, norm_grid: EvalGrid,
                         oracles: Optional[Sequence[Optional[Callable]]] = None) -> float:
    """Smallest grid ``x0`` with ``||f(u+.) - R_x f(u+.)|| <= eps`` for all later grid ``x``.

    The condition must hold for every member of ``f_set`` simultaneously.

    Raises
    ------
    NotReached
        No grid point qualifies; ``largest_deviation`` is the worst deviation
        at the last grid ``x``.
    """
    if not k > ell:
        raise ValidationError("uniform_riesz_approx needs k > ell")
    if not (u > 0 and eps > 0):
        raise ValidationError("need u > 0 and eps > 0")
    xs = np.asarray(xs, dtype=float)
    oracles = list(oracles) if oracles is not None else [None] * len(f_set)
    pts = norm_grid.points
    ok = np.ones(len(xs), dtype=bool)
    worst_last = 0.0
    for D, g in zip(f_set, oracles):
        g = g or limit_function(D)
        fv = evaluate(g, pts + u)
        dev = _norms_of_means(D, RieszSpec(k), xs, norm_grid, ell, shift=u, f_vals=fv)
        ok &= dev <= eps
        worst_last = max(worst_last, float(dev[-1]))
    # suffix condition: every later grid point also qualifies
    good_suffix = np.flip(np.logical_and.accumulate(np.flip(ok)))
    idx = np.nonzero(good_suffix)[0]
    if len(idx) == 0:
        raise NotReached(f"deviation {worst_last:.3g} > eps={eps} at the last grid x", worst_last)
    return float(xs[idx[0]])


def coefficient_bound_check(D: DirichletSeries, ell: float, k: float, N: int,
                            norm_grid: Optional[EvalGrid] = None, f: Optional[Callable] = None,
                            norm: Optional[float] = None) -> tuple[float, float]:
    """``(|sum_{n<=N} a_n|, (lam_{N+1}/(lam_{N+1}-lam_N))**k * ||f||)``.

    Pass ``norm`` to reuse a precomputed ``||f||`` across many ``N``.
    """
    if not k > ell:
        raise ValidationError("coefficient_bound_check needs k > ell")
    if N < 1:
        raise ValidationError("N must be >= 1")
    if norm is None:
        if norm_grid is None:
            raise ValidationError("need norm_grid or norm")
        norm = norm_inf_ell(f or limit_function(D), NormSpec(ell, norm_grid)).value
    lam = D.frequency.upto(N + 1)
    lhs = float(abs(np.sum(D.coefficients_upto(N))))
    rhs = (lam[N] / (lam[N] - lam[N - 1])) ** k * norm
    return lhs, float(rhs)
