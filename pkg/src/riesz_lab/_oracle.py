"""Calling user-supplied functions on arrays of complex points."""

from __future__ import annotations

import numpy as np

from .errors import EvaluationFailure


def evaluate(f, s) -> np.ndarray:
    """``f`` on every point of ``s``; falls back to a loop for scalar-only ``f``.

    Raises
    ------
    EvaluationFailure
        If ``f`` raises or returns a non-finite value.
    """
    s = np.asarray(s, dtype=complex)
    try:
        out = np.asarray(f(s), dtype=complex)
        if out.shape != s.shape:
            out = np.broadcast_to(out, s.shape).astype(complex) if out.ndim == 0 else None
    except (TypeError, ValueError):
        out = None
    except ArithmeticError as exc:
        raise EvaluationFailure(str(exc)) from exc
    if out is None:
        try:
            out = np.array([complex(f(v)) for v in s.ravel()]).reshape(s.shape)
        except (ArithmeticError, ValueError) as exc:
            raise EvaluationFailure(str(exc)) from exc
    if not np.all(np.isfinite(out)):
        bad = s[~np.isfinite(out)].ravel()[0]
        raise EvaluationFailure(f"function is not finite at s = {bad}")
    return out
