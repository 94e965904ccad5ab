"""General Dirichlet series ``sum a_n exp(-lam_n s)`` and their Riesz means.

Every cut-off is strict: a term contributes to a sum at ``x`` only when
``lam_n < x``.

Means of the first kind use the weight ``(1 - lam_n/x)**k``, means of the
second kind ``(1 - exp(lam_n - x))**k``; summatory functions are
``x**k`` times first-kind means.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import NonPositiveX, ScheduleEmpty, ValidationError, ZeroLambda
from .frequency import Frequency

CoefficientRule = Callable[[np.ndarray], np.ndarray]

# entries of one exp(-lam*s) block; larger problems are processed in chunks
_BLOCK = 4_000_000

_EXPR_NAMESPACE = {
    "np": np,
    "log": np.log,
    "exp": np.exp,
    "sqrt": np.sqrt,
    "sin": np.sin,
    "cos": np.cos,
    "pi": math.pi,
    "e": math.e,
    "abs": np.abs,
}


@dataclass(frozen=True)
class Coefficients:
    """Coefficient provider ``n -> a_n`` (1-based, vectorised).

    ``length`` is the number of non-zero leading coefficients for finite
    series (``None`` for infinite ones).  ``kind`` and ``data`` exist only for
    JSON round trips.
    """

    rule: CoefficientRule
    length: Optional[int] = None
    kind: str = "custom"
    data: object = None

    def __call__(self, n) -> np.ndarray:
        n = np.asarray(n)
        out = np.asarray(self.rule(n), dtype=complex)
        if out.shape != n.shape:
            out = np.broadcast_to(out, n.shape).astype(complex)
        if self.length is not None:
            out = np.where(n <= self.length, out, 0)
        return out

    def to_dict(self) -> dict:
        if self.kind == "custom":
            raise ValidationError("custom coefficient rules are not serialisable")
        data = self.data
        if self.kind == "table":
            data = [[float(np.real(v)), float(np.imag(v))] for v in data]
        return {"kind": self.kind, "data": data}

    @classmethod
    def from_dict(cls, d: dict) -> "Coefficients":
        kind = d.get("kind")
        data = d.get("data")
        if kind == "table":
            vals = [complex(v[0], v[1]) if isinstance(v, (list, tuple)) else complex(v) for v in data]
            return table(vals)
        if kind == "alternating":
            return alternating()
        if kind == "ones":
            return ones()
        if kind == "expr":
            return expr(str(data))
        raise ValidationError(f"unknown coefficient kind {kind!r}")


def table(values: Sequence[complex]) -> Coefficients:
    """Finite coefficient table ``a_1..a_L``; zero afterwards."""
    arr = np.asarray(values, dtype=complex)

    def rule(n):
        n = np.asarray(n)
        out = np.zeros(n.shape, dtype=complex)
        ok = (n >= 1) & (n <= len(arr))
        out[ok] = arr[n[ok] - 1]
        return out

    return Coefficients(rule, len(arr), "table", list(arr))


def alternating() -> Coefficients:
    """``a_n = (-1)**(n+1)``."""
    return Coefficients(lambda n: np.where(np.asarray(n) % 2 == 1, 1.0, -1.0), None, "alternating")


def ones() -> Coefficients:
    return Coefficients(lambda n: np.ones(np.shape(n)), None, "ones")


def expr(text: str) -> Coefficients:
    """Coefficients from an expression in ``n`` using numpy ufuncs.

    Meant for trusted local input (CLI files), e.g. ``"n**-2.0"``.
    """
    code = compile(text, "<coefficients>", "eval")
    for name in code.co_names:
        if name not in _EXPR_NAMESPACE and name != "n":
            raise ValidationError(f"name {name!r} not allowed in coefficient expression")

    def rule(n):
        return eval(code, {"__builtins__": {}}, {**_EXPR_NAMESPACE, "n": np.asarray(n, dtype=float)})

    return Coefficients(rule, None, "expr", text)


@dataclass(frozen=True)
class RieszSpec:
    """Summation order ``k >= 0`` and kind (``"first"`` or ``"second"``)."""

    order: float = 0.0
    kind: str = "first"

    def __post_init__(self):
        if not self.order >= 0:
            raise ValidationError(f"Riesz order must be >= 0, got {self.order}")
        if self.kind not in ("first", "second"):
            raise ValidationError(f"kind must be 'first' or 'second', got {self.kind!r}")


@dataclass(frozen=True)
class DirichletSeries:
    """A ``lam``-Dirichlet series.

    ``shift`` stores accumulated translations: the effective coefficients are
    ``a_n * exp(-lam_n * shift)``.  ``germ_order`` is caller-asserted
    metadata (an order ``m`` at which Riesz limits are believed to exist).
    """

    frequency: Frequency
    coefficients: Coefficients
    germ_order: Optional[float] = None
    label: str = "series"
    shift: complex = 0j

    def __post_init__(self):
        if self.germ_order is not None and self.germ_order < 0:
            raise ValidationError("germ_order must be >= 0")

    @property
    def length(self) -> Optional[int]:
        """Number of terms that can be non-zero (``None`` if unbounded)."""
        L = self.coefficients.length
        if self.frequency.is_finite:
            F = len(self.frequency.values)
            return F if L is None else min(L, F)
        return L

    def coefficients_upto(self, N: int) -> np.ndarray:
        """Effective coefficients ``a_1..a_N`` (translation included)."""
        n = np.arange(1, N + 1)
        a = self.coefficients(n)
        if self.shift != 0:
            lam = self.frequency.upto(N)
            a = a * np.exp(-lam * self.shift)
        return a

    def count_below(self, x: float) -> int:
        return self.frequency.count_below(x, self.length)

    def terms_below(self, x: float) -> tuple[np.ndarray, np.ndarray]:
        """``(lam_n, a_n)`` for all ``lam_n < x``."""
        N = self.count_below(x)
        return self.frequency.upto(N), self.coefficients_upto(N)

    def to_dict(self) -> dict:
        d = {
            "label": self.label,
            "frequency": self.frequency.to_dict(),
            "coefficients": self.coefficients.to_dict(),
            "germ_order": self.germ_order,
        }
        if self.shift != 0:
            d["shift"] = [self.shift.real, self.shift.imag]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "DirichletSeries":
        try:
            freq = Frequency.from_dict(d["frequency"])
            coeffs = Coefficients.from_dict(d["coefficients"])
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"malformed series JSON: {exc}") from exc
        shift = d.get("shift") or [0.0, 0.0]
        return cls(freq, coeffs, d.get("germ_order"), d.get("label", "series"),
                   complex(shift[0], shift[1]))


@dataclass
class ConvergenceReport:
    """Trajectory of means along a schedule plus a tail diagnostic."""

    samples: list[tuple[float, complex]]
    limit_estimate: complex
    tail_delta: float
    converged: bool
    tolerance: float = field(default=math.nan)

    def to_dict(self) -> dict:
        return {
            "samples": [[x, v.real, v.imag] for x, v in self.samples],
            "limit": [self.limit_estimate.real, self.limit_estimate.imag],
            "tail_delta": self.tail_delta,
            "converged": self.converged,
            "tolerance": self.tolerance,
        }


def riesz_weights(lam: np.ndarray, x: float, spec: RieszSpec) -> np.ndarray:
    """Weights ``(1-lam/x)**k`` or ``(1-exp(lam-x))**k`` for ``lam < x``."""
    if spec.order == 0:
        return np.ones_like(lam)
    if spec.kind == "first":
        base = 1.0 - lam / x
    else:
        base = -np.expm1(lam - x)
    return base ** spec.order


def means_grid(
    D: DirichletSeries,
    spec: RieszSpec,
    s,
    xs,
    *,
    summatory: bool = False,
) -> np.ndarray:
    """Riesz means on a grid: result ``[i, j]`` is ``R_{xs[i]}(D)(s[j])``.

    With ``summatory=True`` the first-kind summatory function
    ``sum (x-lam_n)**k a_n exp(-lam_n s)`` is returned instead.
    """
    s = np.atleast_1d(np.asarray(s, dtype=complex))
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    out = np.zeros((len(xs), len(s)), dtype=complex)
    if len(xs) == 0 or len(s) == 0:
        return out
    lam, a = D.terms_below(float(np.max(xs)))
    if len(lam) == 0:
        return out
    counts = np.searchsorted(lam, xs, side="left")
    chunk = max(1, _BLOCK // max(len(lam), 1))
    for j0 in range(0, len(s), chunk):
        sj = s[j0:j0 + chunk]
        E = a[:, None] * np.exp(-np.outer(lam, sj))
        if spec.order == 0 and not summatory:
            csum = np.vstack([np.zeros((1, len(sj)), dtype=complex), np.cumsum(E, axis=0)])
            out[:, j0:j0 + chunk] = csum[counts]
            continue
        for i, (x, c) in enumerate(zip(xs, counts)):
            if c == 0:
                continue
            if summatory:
                w = (x - lam[:c]) ** spec.order
            else:
                w = riesz_weights(lam[:c], x, spec)
            out[i, j0:j0 + chunk] = w @ E[:c]
    return out


def _scalar_or_array(values: np.ndarray, s):
    return complex(values[0]) if np.ndim(s) == 0 else values


def partial_sum(D: DirichletSeries, s, x: float):
    """``sum_{lam_n < x} a_n exp(-lam_n s)``; empty sums are 0."""
    if x < 0:
        raise NonPositiveX("x must be >= 0")
    return _scalar_or_array(means_grid(D, RieszSpec(0.0), s, [x])[0], s)


def riesz_mean(D: DirichletSeries, spec: RieszSpec, s, x: float):
    """Riesz mean of order ``spec.order`` and kind ``spec.kind`` at ``x > 0``.

    ``s`` may be a scalar or an array (returns an array then).
    """
    if not x > 0:
        raise NonPositiveX(f"x must be positive, got {x}")
    return _scalar_or_array(means_grid(D, spec, s, [x])[0], s)


def summatory(D: DirichletSeries, k: float, s, x: float):
    """Summatory function ``sum_{lam_n<x} a_n exp(-lam_n s) (x-lam_n)**k``."""
    if not x > 0:
        raise NonPositiveX(f"x must be positive, got {x}")
    return _scalar_or_array(means_grid(D, RieszSpec(k), s, [x], summatory=True)[0], s)


def translate(D: DirichletSeries, w: complex) -> DirichletSeries:
    """Series with coefficients ``a_n exp(-lam_n w)`` over the same frequency."""
    return replace(D, shift=D.shift + complex(w))


def riesz_limit(
    D: DirichletSeries,
    spec: RieszSpec,
    s: complex,
    schedule: Sequence[float],
    tolerance: float,
    estimator: str = "last",
) -> ConvergenceReport:
    """Sample the mean along ``schedule`` and estimate its limit.

    Parameters
    ----------
    estimator : {"last", "tail-average", "richardson"}
        ``"last"`` (default) takes the value at the largest ``x``;
        ``"tail-average"`` averages the last quartile.  ``"richardson"``
        fits a polynomial of degree ``ceil(k)`` in ``1/x`` to the last half
        of a first-kind trajectory and returns its constant term, which
        removes the ``O(1/x)`` bias of first-kind means (``x**k R_x`` is
        asymptotically a polynomial in ``x`` with leading coefficient
        ``f(s)``).  For second-kind means it falls back to ``"last"``.

    Notes
    -----
    ``tail_delta`` is ``max |value - estimate|`` over the last quartile of
    samples and the run counts as converged when it is below ``tolerance``.
    With the Richardson estimator ``tail_delta`` still measures the raw
    trajectory, so it may flag non-convergence even when the estimate is good.
    """
    xs = np.asarray(list(schedule), dtype=float)
    if len(xs) == 0:
        raise ScheduleEmpty("schedule is empty")
    if not tolerance > 0:
        raise ValidationError("tolerance must be positive")
    if np.any(np.diff(xs) <= 0) or xs[0] <= 0:
        raise ValidationError("schedule must be positive and strictly increasing")
    vals = means_grid(D, spec, [s], xs)[:, 0]
    q = max(1, int(math.ceil(len(xs) / 4)))
    tail = vals[-q:]
    if estimator == "last":
        est = complex(vals[-1])
    elif estimator == "tail-average":
        est = complex(np.mean(tail))
    elif estimator == "richardson":
        deg = int(math.ceil(spec.order))
        h = len(xs) // 2
        if spec.kind == "second" or deg == 0 or len(xs) - h < deg + 2:
            est = complex(vals[-1])
        else:
            X = np.vander(1.0 / xs[h:], deg + 1, increasing=True)
            est = complex(np.linalg.lstsq(X, vals[h:], rcond=None)[0][0])
    else:
        raise ValidationError(f"unknown estimator {estimator!r}")
    delta = float(np.max(np.abs(tail - est)))
    return ConvergenceReport(
        [(float(x), complex(v)) for x, v in zip(xs, vals)],
        est,
        delta,
        bool(delta < tolerance),
        tolerance,
    )


def scaled_tail_residuals(
    D: DirichletSeries, k: float, s: complex, C: complex, N_max: int
) -> list[tuple[int, complex]]:
    """Residuals ``((lam_{N+1}-lam_N)/lam_{N+1})**k * (sum_{n<=N} a_n e^{-lam_n s} - C)``.

    For a series that is ``(lam, k)``-summable to ``C`` at ``s`` these tend to
    0; the caller judges the decay.
    """
    lam = D.frequency.upto(N_max + 1)
    if lam[0] == 0 and N_max >= 0 and lam[1] == 0:
        raise ZeroLambda("lam_{N+1} = 0")
    a = D.coefficients_upto(N_max) * np.exp(-lam[:N_max] * complex(s))
    partial = np.cumsum(a)
    out = []
    for N in range(1, N_max + 1):
        if lam[N] == 0:
            raise ZeroLambda(f"lam_{N + 1} = 0")
        factor = ((lam[N] - lam[N - 1]) / lam[N]) ** k
        out.append((N, complex(factor * (partial[N - 1] - C))))
    return out
