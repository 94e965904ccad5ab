"""Frequencies and the spacing conditions (BC), (LC), (NC).

A frequency is a strictly increasing, non-negative real sequence
``lam[1] < lam[2] < ...``.  It is stored as a finite prefix plus an optional
vectorised generator ``n -> lam[n]`` (1-based) used to extend the prefix on
demand.

All spacing checks work on a finite index range and report the running
sup/inf they observe as a witness constant.  Products involving
``exp(exp(delta * lam))`` are formed in log space.
"""

from __future__ import annotations

import builtins
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import (
    DegeneratePair,
    NegativeFirst,
    NotIncreasing,
    RangeExceeded,
    ValidationError,
    ZeroFrequencyTail,
)

Generator = Callable[[np.ndarray], np.ndarray]

GENERATORS: dict[str, Generator] = {
    "power": lambda n: np.asarray(n, dtype=float),
    "log": lambda n: np.log(np.asarray(n, dtype=float)),
    "sqrtlog": lambda n: np.sqrt(np.log(np.asarray(n, dtype=float))),
}

# hard cap on lazily generated terms; (sqrt log n) below x=5 already needs e^25
MAX_TERMS = 20_000_000

# relative drift of a running sup/inf over the last decade of indices that
# still counts as "stable"
STABILITY_RTOL = 0.01

# inf-type witnesses below this are reported as not holding
LC_FLOOR = 1e-300


@dataclass(frozen=True, eq=False)
class Frequency:
    """Strictly increasing non-negative sequence, 1-based.

    Parameters
    ----------
    values : ndarray
        Stored prefix ``lam[1..N_max]``.
    generator : callable, optional
        Vectorised rule mapping 1-based indices to frequencies.  Must agree
        with the prefix on stored indices.
    label : str
        Free text tag (``"power"``, ``"ordinary"``, ``"sqrt-log"``, ...).
    kind : str
        Generator kind used for JSON round trips (``"power"``, ``"log"``,
        ``"sqrtlog"``, ``"none"`` or ``"custom"``).
    log_gap : callable, optional
        Rule ``n -> log(lam[n+1] - lam[n])``.  Only needed for engineered
        frequencies whose gaps underflow double precision; when present the
        spacing checks use it instead of differencing ``values``.
    """

    values: np.ndarray
    generator: Optional[Generator] = None
    label: str = "custom"
    kind: str = "none"
    log_gap: Optional[Callable[[np.ndarray], np.ndarray]] = None
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __len__(self) -> int:
        return len(self.values)

    @property
    def is_finite(self) -> bool:
        return self.generator is None

    def upto(self, N: int) -> np.ndarray:
        """Return ``lam[1..N]``; extends the prefix through the generator."""
        N = int(N)
        if N <= len(self.values):
            return self.values[:N]
        if self.generator is None:
            raise RangeExceeded(
                f"index {N} beyond stored prefix of length {len(self.values)} "
                "and no generator"
            )
        if N > MAX_TERMS:
            raise RangeExceeded(f"index {N} exceeds the term cap {MAX_TERMS}")
        cached = self._cache.get("ext")
        if cached is not None and len(cached) >= N:
            return cached[:N]
        start = len(self.values) if cached is None else len(cached)
        base = self.values if cached is None else cached
        # grow geometrically so repeated calls amortise
        target = max(N, int(1.5 * start) + 16)
        target = min(target, MAX_TERMS) if N <= MAX_TERMS else N
        new = np.asarray(self.generator(np.arange(start + 1, target + 1)), dtype=float)
        ext = np.concatenate([base, new])
        if self.log_gap is None:
            d = np.diff(ext[max(start - 1, 0):])
            if np.any(d <= 0):
                raise NotIncreasing("generator produced a non-increasing extension")
        self._cache["ext"] = ext
        return ext[:N]

    def value(self, n: int) -> float:
        """``lam[n]`` for a single 1-based index."""
        if n < 1:
            raise RangeExceeded("indices are 1-based")
        if n <= len(self.values):
            return float(self.values[n - 1])
        if self.generator is None:
            raise RangeExceeded(f"index {n} beyond stored prefix and no generator")
        return float(self.generator(np.array([n]))[0])

    def count_below(self, x: float, limit: Optional[int] = None) -> int:
        """Number of indices with ``lam[n] < x`` (strict), capped at ``limit``."""
        if limit is not None:
            limit = int(limit)
            if limit <= 0:
                return 0
            if limit <= len(self.values) or self.generator is not None:
                if self.value(limit) < x:
                    return limit
        vals = self.values
        if len(vals) and vals[-1] >= x:
            return int(np.searchsorted(vals, x, side="left"))
        if self.generator is None:
            if limit is not None and limit <= len(vals):
                return int(np.searchsorted(vals[:limit], x, side="left"))
            raise RangeExceeded(
                f"cut-off {x} lies beyond the stored prefix and there is no generator"
            )
        # exponential then binary search on the generator
        lo = len(vals)  # lam[lo] < x (or lo == 0)
        hi = max(2 * lo, 16)
        while self.value(hi) < x:
            lo = hi
            hi *= 2
            if hi > MAX_TERMS:
                if self.value(MAX_TERMS) < x:
                    raise RangeExceeded(
                        f"more than {MAX_TERMS} frequencies lie below {x}"
                    )
                hi = MAX_TERMS
                break
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if self.value(mid) < x:
                lo = mid
            else:
                hi = mid
        return lo if limit is None else min(lo, limit)

    def below(self, x: float, limit: Optional[int] = None) -> np.ndarray:
        """All ``lam[n] < x``."""
        return self.upto(self.count_below(x, limit))

    def log_gaps(self, lo: int, hi: int) -> np.ndarray:
        """``log(lam[n+1] - lam[n])`` for ``n = lo..hi``."""
        n = np.arange(lo, hi + 1)
        if self.log_gap is not None:
            return np.asarray(self.log_gap(n), dtype=float)
        lam = self.upto(hi + 1)
        gaps = lam[lo:hi + 1] - lam[lo - 1:hi]
        if np.any(gaps <= 0):
            raise NotIncreasing("non-positive gap in range")
        return np.log(gaps)

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "prefix": [float(v) for v in self.values],
            "generator": {"kind": self.kind if self.kind in GENERATORS else "none"},
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Frequency":
        try:
            prefix = data["prefix"]
            label = data.get("label", "custom")
            kind = (data.get("generator") or {}).get("kind", "none")
        except (TypeError, KeyError) as exc:
            raise ValidationError(f"malformed frequency JSON: {exc}") from exc
        if kind not in GENERATORS and kind != "none":
            raise ValidationError(f"unknown generator kind {kind!r}")
        return make_frequency(prefix, GENERATORS.get(kind), label=label, kind=kind)


def make_frequency(
    prefix,
    generator: Optional[Generator] = None,
    label: str = "custom",
    *,
    kind: Optional[str] = None,
    log_gap: Optional[Callable[[np.ndarray], np.ndarray]] = None,
) -> Frequency:
    """Validate a prefix (and optional generator) and build a :class:`Frequency`.

    Raises
    ------
    NotIncreasing
        The prefix is not strictly increasing.
    NegativeFirst
        ``prefix[0] < 0``.
    """
    values = np.asarray(prefix, dtype=float).ravel()
    if len(values) == 0 and generator is None:
        raise ValidationError("empty prefix needs a generator")
    if len(values) and values[0] < 0:
        raise NegativeFirst(f"lam_1 = {values[0]} < 0")
    if log_gap is None and np.any(np.diff(values) <= 0):
        raise NotIncreasing("prefix is not strictly increasing")
    if log_gap is not None and len(values) > 1:
        lg = np.asarray(log_gap(np.arange(1, len(values))), dtype=float)
        if np.any(np.isnan(lg)) or np.any(lg == -np.inf):
            raise NotIncreasing("log_gap reports a zero gap")
    if generator is not None and len(values):
        gen = np.asarray(generator(np.arange(1, len(values) + 1)), dtype=float)
        if not np.allclose(gen, values, rtol=1e-12, atol=1e-12):
            raise ValidationError("generator disagrees with the stored prefix")
    if kind is None:
        kind = next((k for k, g in GENERATORS.items() if g is generator), None)
        kind = kind or ("none" if generator is None else "custom")
    return Frequency(values, generator, label, kind, log_gap)


def power_frequency(prefix_len: int = 16) -> Frequency:
    """``lam = (n)`` -- the power-series case."""
    g = GENERATORS["power"]
    return make_frequency(g(np.arange(1, prefix_len + 1)), g, "power")


def ordinary_frequency(prefix_len: int = 16) -> Frequency:
    """``lam = (log n)`` -- ordinary Dirichlet series."""
    g = GENERATORS["log"]
    return make_frequency(g(np.arange(1, prefix_len + 1)), g, "ordinary")


def sqrtlog_frequency(prefix_len: int = 16) -> Frequency:
    """``lam = (sqrt(log n))``: satisfies (LC) but not (BC)."""
    g = GENERATORS["sqrtlog"]
    return make_frequency(g(np.arange(1, prefix_len + 1)), g, "sqrt-log")


@dataclass(frozen=True)
class ConditionReport:
    """Finite-range evidence for one of the spacing conditions.

    ``witness_constant`` is the running sup (BC, NC) or inf (LC) over the
    checked range; ``log_witness`` keeps it in log space because the LC
    witness routinely under- or overflows.
    """

    condition: str
    parameter: float
    witness_constant: float
    checked_range: tuple[int, int]
    holds: bool
    log_witness: float = math.nan

    def __post_init__(self):
        if self.holds and not self.witness_constant > 0:
            raise ValueError("a holding condition needs a positive witness")


def _check_range(freq: Frequency, rng, need_next: bool) -> tuple[int, int]:
    lo, hi = int(rng[0]), int(rng[1])
    if lo < 1 or hi < lo:
        raise ValidationError(f"bad index range {rng}")
    if freq.generator is None:
        # the gap lam[hi+1]-lam[hi] can come from log_gap when values stop at hi
        top = hi + 1 if need_next and freq.log_gap is None else hi
        if top > len(freq.values):
            raise RangeExceeded(f"range {rng} needs lam[{top}] beyond the prefix")
    return lo, hi


def _lams(freq: Frequency, lo: int, hi: int) -> np.ndarray:
    return freq.upto(hi)[lo - 1:hi]


def _early_stop(lo: int, hi: int) -> int:
    """Last index before the final decade of ``lo..hi``."""
    return max(lo, hi // 10)


def check_bc(freq: Frequency, beta: float, range: tuple[int, int]) -> ConditionReport:
    """Evidence for (BC): ``1/(lam[n+1]-lam[n]) = O(exp(beta*lam[n]))``.

    The witness is ``sup_n exp(-log gap_n - beta*lam_n)`` over ``range``;
    the condition is reported as holding when that sup is finite and moved by
    less than 1% over the last decade of indices.
    """
    if not beta > 0:
        raise ValidationError("beta must be positive")
    lo, hi = _check_range(freq, range, need_next=True)
    lam = _lams(freq, lo, hi)
    g = -freq.log_gaps(lo, hi) - beta * lam
    full = float(np.max(g))
    early = float(np.max(g[: _early_stop(lo, hi) - lo + 1]))
    stable = full - early <= math.log1p(STABILITY_RTOL)
    holds = bool(math.isfinite(full) and stable)
    witness = math.exp(full) if full < 709 else math.inf
    return ConditionReport("BC", beta, witness, (lo, hi), holds, full)


def check_lc(freq: Frequency, delta: float, range: tuple[int, int]) -> ConditionReport:
    """Evidence for (LC): ``lam[n+1]-lam[n] >= C exp(-exp(delta*lam[n]))``.

    Witness ``inf_n (lam[n+1]-lam[n]) * exp(exp(delta*lam[n]))`` computed as
    ``log gap + exp(delta*lam)``.  Holds when the inf is above ``1e-300`` and
    stable over the last decade of indices.
    """
    if not delta > 0:
        raise ValidationError("delta must be positive")
    lo, hi = _check_range(freq, range, need_next=True)
    lam = _lams(freq, lo, hi)
    with np.errstate(over="ignore"):
        h = freq.log_gaps(lo, hi) + np.exp(delta * lam)
    full = float(np.min(h))
    early = float(np.min(h[: _early_stop(lo, hi) - lo + 1]))
    stable = early - full <= math.log1p(STABILITY_RTOL)
    holds = bool(full > math.log(LC_FLOOR) and stable)
    witness = math.exp(full) if full < 709 else math.inf
    return ConditionReport("LC", delta, witness, (lo, hi), holds, full)


def check_nc(freq: Frequency, delta: float, range: tuple[int, int]) -> ConditionReport:
    """Evidence for (NC) over all pairs ``m > n`` inside ``range``.

    Witness ``sup [log((lam_m+lam_n)/(lam_m-lam_n)) + (m-n)] * exp(-delta*lam_n)``.
    For fixed ``n`` the ``m - n`` term grows with the range, so no stability
    test is applied: ``holds`` only says the witness is finite and the caller
    reads it together with ``checked_range``.
    """
    if not delta > 0:
        raise ValidationError("delta must be positive")
    lo, hi = _check_range(freq, range, need_next=False)
    if hi <= lo:
        raise ValidationError("range must contain at least one pair")
    lam = _lams(freq, lo, hi)
    idx = np.arange(lo, hi + 1)
    best = -math.inf
    for i in builtins.range(len(lam) - 1):
        lm, ln = lam[i + 1:], lam[i]
        diff = lm - ln
        if np.any(diff <= 0):
            raise DegeneratePair(f"lam_m <= lam_n for n={idx[i]}")
        vals = (np.log((lm + ln) / diff) + (idx[i + 1:] - idx[i])) * math.exp(-delta * ln)
        best = max(best, float(np.max(vals)))
    return ConditionReport("NC", delta, best, (lo, hi), bool(math.isfinite(best) and best > 0),
                           math.log(best) if best > 0 else -math.inf)


def estimate_L(freq: Frequency, N: int, cap: float = 10.0, growth_tol: float = 0.05) -> float:
    """Estimate ``L(lam) = limsup log(N)/lam_N``.

    Takes the sup of ``log(n)/lam_n`` over the window ``[N/2, N]``.  Returns
    ``+inf`` when that exceeds ``cap`` or when it grew by more than
    ``growth_tol`` (relative) against the window one decade earlier, the
    signature of a divergent limsup such as for ``lam = (sqrt(log n))``.
    """
    N = int(N)
    if N < 10:
        raise ValidationError("N must be at least 10")
    lam = freq.upto(N)
    if lam[-1] <= 0:
        raise ZeroFrequencyTail("lam_N = 0")

    def window(a: int, b: int) -> float:
        n = np.arange(max(a, 2), b + 1)
        ln = lam[n - 1]
        ok = ln > 0
        return float(np.max(np.log(n[ok]) / ln[ok]))

    est = window(N // 2, N)
    if est > cap:
        return math.inf
    if N // 20 >= 2:
        prev = window(N // 20, N // 10)
        if prev > 0 and est > prev * (1 + growth_tol):
            return math.inf
    return est
