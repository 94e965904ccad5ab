"""Composite Gauss-Legendre rules with optional geometric grading."""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .errors import SingularityUnresolved

GRADING_RATIO = 0.5
MAX_DEPTH = 200


@lru_cache(maxsize=32)
def gauss_legendre(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights on ``[0, 1]``."""
    x, w = np.polynomial.legendre.leggauss(order)
    return (x + 1) / 2, w / 2


def panel_rule(edges: np.ndarray, order: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes/weights on every panel ``[edges[i], edges[i+1]]``."""
    edges = np.asarray(edges, dtype=float)
    x, w = gauss_legendre(order)
    h = np.diff(edges)
    nodes = edges[:-1, None] + h[:, None] * x[None, :]
    weights = h[:, None] * w[None, :]
    return nodes.ravel(), weights.ravel()


def uniform_edges(a: float, b: float, max_width: float) -> np.ndarray:
    n = max(1, int(np.ceil((b - a) / max_width)))
    return np.linspace(a, b, n + 1)


def grading_depth(width: float, exponent: float, scale: float, tol: float) -> int:
    """Number of halvings until the dropped end piece is below ``tol``.

    The piece ``[0, eps]`` of ``scale * v**exponent`` contributes at most
    ``scale * eps**(exponent+1) / (exponent+1)``.
    """
    if exponent <= -1:
        raise SingularityUnresolved(f"endpoint exponent {exponent} is not integrable")
    e1 = exponent + 1.0
    if scale <= 0:
        return 0
    # eps**e1 <= tol * e1 / scale
    target = np.log(tol * e1 / scale) / e1
    depth = int(np.ceil((np.log(width) - target) / np.log(1 / GRADING_RATIO)))
    depth = max(depth, 0)
    if depth > MAX_DEPTH:
        raise SingularityUnresolved(
            f"graded mesh needs {depth} levels for exponent {exponent} at tolerance {tol}"
        )
    return depth


def graded_edges(a: float, b: float, left_depth: int = 0, right_depth: int = 0,
                 max_width: float = np.inf) -> np.ndarray:
    """Panel edges on ``[a, b]`` graded geometrically toward one or both ends.

    The innermost piece at a graded end has width ``(b - a) * ratio**depth``;
    it still gets one Gauss panel, and the caller bounds its error.
    """
    L = b - a
    if left_depth and right_depth:
        mid = a + L / 2
        left = graded_edges(a, mid, left_depth, 0, max_width)
        right = graded_edges(mid, b, 0, right_depth, max_width)
        return np.concatenate([left, right[1:]])
    inner = uniform_edges(a, b, max_width)
    if left_depth:
        g = a + L * GRADING_RATIO ** np.arange(left_depth, 0, -1)
        g = g[g < inner[1]]
        return np.concatenate([[a], g, inner[1:]])
    if right_depth:
        g = b - L * GRADING_RATIO ** np.arange(1, right_depth + 1)
        g = g[g > inner[-2]]
        return np.concatenate([inner[:-1], g, [b]])
    return inner
