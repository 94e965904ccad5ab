"""Gamma and Beta kernels used by the order-raising and transform identities."""

from __future__ import annotations

import numpy as np
from scipy.special import loggamma

from .errors import DomainError


def gamma_fn(z):
    """Gamma function for ``re z > 0`` (complex or real, scalar or array).

    Evaluated as ``exp(loggamma(z))``; relative accuracy is about 1e-14 on
    ``0 < re z <= 30``.

    Raises
    ------
    DomainError
        If any ``re z <= 0``.
    """
    z = np.asarray(z)
    if np.any(np.real(z) <= 0):
        raise DomainError("gamma_fn requires re z > 0")
    out = np.exp(loggamma(z.astype(complex)))
    if not np.iscomplexobj(z) or np.all(np.imag(z) == 0):
        out = out.real
    return out[()] if out.ndim == 0 else out


def beta_fn(p, q):
    """``B(p, q) = Gamma(p) Gamma(q) / Gamma(p + q)`` for ``re p, re q > 0``."""
    p = np.asarray(p)
    q = np.asarray(q)
    if np.any(np.real(p) <= 0) or np.any(np.real(q) <= 0):
        raise DomainError("beta_fn requires re p > 0 and re q > 0")
    pc, qc = p.astype(complex), q.astype(complex)
    out = np.exp(loggamma(pc) + loggamma(qc) - loggamma(pc + qc))
    if np.all(np.imag(pc) == 0) and np.all(np.imag(qc) == 0):
        out = out.real
    return out[()] if out.ndim == 0 else out


def beta_moment(p: float, q: float, x: float) -> float:
    """Closed form of ``int_0^x y**p (x - y)**(q - p - 1) dy``.

    Equals ``x**q * Gamma(p+1) Gamma(q-p) / Gamma(q+1)``; needs ``p > -1``,
    ``q > p`` and ``x > 0``.
    """
    if not (p > -1 and q - p > 0 and x > 0):
        raise DomainError("beta_moment requires p > -1, q > p and x > 0")
    return float(x ** q * beta_fn(p + 1.0, q - p))
