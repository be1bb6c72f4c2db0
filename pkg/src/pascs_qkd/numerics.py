"""Deterministic quadrature, grid search and root bracketing.

Every integral in the package goes through composite Gauss-Legendre rules
built here. Rules are plain ``(nodes, weights)`` arrays so callers can
evaluate integrands on tensor grids and reduce with matrix products.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, replace
from typing import Callable, Sequence

import numpy as np


class NonFiniteIntegrand(ArithmeticError):
    """An integrand returned NaN or inf on a quadrature node."""


class NoSignChange(ValueError):
    """A root bracket whose end points have the same sign."""


class ConvergenceError(ArithmeticError):
    """Refining the quadrature changed the result by more than the tolerance."""


@dataclass(frozen=True)
class IntegrationConfig:
    """Quadrature resolution along one axis.

    ``half_width`` of ``None`` means the caller chooses ``max|alpha| + 6``.
    ``nodes`` is the per-axis node budget over ``[-L, L]``; it is rounded to
    an odd number of panels of ``order`` points, so with odd ``order`` the
    origin is always a node.
    """

    half_width: float | None = None
    nodes: int = 121
    order: int = 11
    # rule for the integral along the imaginary axis of a single-mode Wigner function
    inner_nodes: int = 63
    inner_order: int = 21
    inner_half_width: float = 6.0

    def __post_init__(self):
        if self.half_width is not None and not self.half_width > 0:
            raise ValueError("half_width must be positive")
        if self.nodes < 21 or self.nodes % 2 == 0:
            raise ValueError("nodes must be odd and at least 21")
        if self.order < 2:
            raise ValueError("order must be at least 2")

    @property
    def panels(self) -> int:
        p = max(1, round(self.nodes / self.order))
        return p if p % 2 == 1 else p + 1

    def width(self, alpha_scale: float = 0.0) -> float:
        return self.half_width if self.half_width is not None else abs(alpha_scale) + 6.0

    def refined(self) -> "IntegrationConfig":
        """Roughly twice the nodes, on both the outer and the inner rule."""
        p = 2 * self.panels + 1
        inner = self.inner()
        return replace(self, nodes=p * self.order, inner_nodes=(2 * inner.panels + 1) * self.inner_order)

    def inner(self) -> "IntegrationConfig":
        """Rule for ``int W(x + i y) dy``, centred on the imaginary part of the amplitude."""
        return IntegrationConfig(half_width=self.inner_half_width, nodes=self.inner_nodes, order=self.inner_order,
                                 inner_nodes=self.inner_nodes, inner_order=self.inner_order,
                                 inner_half_width=self.inner_half_width)


@dataclass(frozen=True)
class Grid2D:
    """Samples ``values[i, j] = f(x[i], y[j])`` on strictly increasing axes."""

    x: np.ndarray
    y: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        y = np.asarray(self.y, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if v.shape != (x.size, y.size) or v.size == 0:
            raise ValueError("values shape must be (len(x), len(y)) and non-empty")
        if np.any(np.diff(x) <= 0) or np.any(np.diff(y) <= 0):
            raise ValueError("axes must be strictly increasing")
        if not np.all(np.isfinite(v)):
            raise ValueError("grid values must be finite")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "values", v)


_GL_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _gauss_legendre(order: int) -> tuple[np.ndarray, np.ndarray]:
    if order not in _GL_CACHE:
        _GL_CACHE[order] = np.polynomial.legendre.leggauss(order)
    return _GL_CACHE[order]


def composite_rule(breaks: Sequence[float], max_width: float, order: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights over ``[breaks[0], breaks[-1]]``.

    Every break point is a panel edge, so an integral that starts or ends at
    a break is exact in its limits. Segments longer than ``max_width`` are cut
    into equal panels with ``order`` nodes each; shorter segments get a
    proportionally lower order (never below 3).
    """
    b = np.unique(np.asarray(breaks, dtype=float))
    if b.size < 2:
        raise ValueError("need at least two distinct break points")
    xs, ws = [], []
    for lo, hi in zip(b[:-1], b[1:]):
        width = hi - lo
        n_pan = max(1, math.ceil(width / max_width - 1e-9))
        k = order if n_pan > 1 else max(3, min(order, math.ceil(order * width / max_width)))
        t, w = _gauss_legendre(k)
        edges = np.linspace(lo, hi, n_pan + 1)
        for a, c in zip(edges[:-1], edges[1:]):
            h = 0.5 * (c - a)
            xs.append(0.5 * (a + c) + h * t)
            ws.append(h * w)
    return np.concatenate(xs), np.concatenate(ws)


def axis_rule(config: IntegrationConfig, lo: float, hi: float) -> tuple[np.ndarray, np.ndarray]:
    """Composite rule on ``[lo, hi]`` with the panel width implied by ``config``."""
    p = config.panels
    t, w = _gauss_legendre(config.order)
    edges = np.linspace(lo, hi, p + 1)
    h = 0.5 * (edges[1] - edges[0])
    mids = 0.5 * (edges[:-1] + edges[1:])
    x = (mids[:, None] + h * t[None, :]).ravel()
    wt = np.tile(h * w, p)
    return x, wt


def symmetric_rule(config: IntegrationConfig, half_width: float) -> tuple[np.ndarray, np.ndarray]:
    x, w = axis_rule(config, -half_width, half_width)
    # enforce exact mirror symmetry of nodes so reflected grids map onto themselves
    x = 0.5 * (x - x[::-1])
    w = 0.5 * (w + w[::-1])
    return x, w


def integrate(fn: Callable[..., np.ndarray], config: IntegrationConfig, d: int = 1,
              center: Sequence[float] | None = None, check: bool = False, tol: float = 1e-6) -> float:
    """Integrate ``fn`` over the box ``center +- L`` in ``d`` dimensions.

    ``fn`` receives ``d`` broadcastable coordinate arrays and must return the
    integrand values. In four dimensions the first axis is looped over to
    bound memory. With ``check=True`` the refined rule is also evaluated and
    :class:`ConvergenceError` is raised if the two differ by more than ``tol``.
    """
    if d not in (1, 2, 4):
        raise ValueError("d must be 1, 2 or 4")
    L = config.width()
    center = np.zeros(d) if center is None else np.asarray(center, dtype=float)
    x, w = symmetric_rule(config, L)

    def _eval(xn, wn) -> float:
        axes = [xn + c for c in center]
        if d == 1:
            vals = np.asarray(fn(axes[0]), dtype=float)
            if not np.all(np.isfinite(vals)):
                raise NonFiniteIntegrand("integrand is not finite on the quadrature grid")
            return float(wn @ vals)
        if d == 2:
            vals = np.asarray(fn(axes[0][:, None], axes[1][None, :]), dtype=float)
            if not np.all(np.isfinite(vals)):
                raise NonFiniteIntegrand("integrand is not finite on the quadrature grid")
            return float(wn @ vals @ wn)
        total = 0.0
        a1 = axes[1][:, None, None]
        a2 = axes[2][None, :, None]
        a3 = axes[3][None, None, :]
        w3 = wn[:, None, None] * wn[None, :, None] * wn[None, None, :]
        for x0, w0 in zip(axes[0], wn):
            vals = np.asarray(fn(x0, a1, a2, a3), dtype=float)
            if not np.all(np.isfinite(vals)):
                raise NonFiniteIntegrand("integrand is not finite on the quadrature grid")
            total += w0 * float(np.sum(w3 * vals))
        return total

    result = _eval(x, w)
    if check:
        xr, wr = symmetric_rule(config.refined(), L)
        fine = _eval(xr, wr)
        if abs(fine - result) > tol:
            raise ConvergenceError(f"refinement changed integral by {abs(fine - result):.3g} > {tol:g}")
    return result


def argmax_on_grid(grid: Grid2D) -> tuple[tuple[float, float], float]:
    """Location and value of the largest sample.

    Ties go to the lexicographically smallest ``(x, y)``; axes are increasing,
    so that is the first maximal entry in C order.
    """
    flat = int(np.argmax(grid.values))
    i, j = np.unravel_index(flat, grid.values.shape)
    return (float(grid.x[i]), float(grid.y[j])), float(grid.values[i, j])


def find_root(fn: Callable[[float], float], bracket: tuple[float, float], tol: float = 1e-6) -> float:
    """Bisection on a sign-changing bracket down to ``|hi - lo| <= tol``."""
    lo, hi = float(bracket[0]), float(bracket[1])
    f_lo, f_hi = fn(lo), fn(hi)
    if f_lo == 0:
        return lo
    if f_hi == 0:
        return hi
    if np.sign(f_lo) == np.sign(f_hi):
        raise NoSignChange(f"f({lo:g}) = {f_lo:.3g} and f({hi:g}) = {f_hi:.3g} have the same sign")
    for _ in itertools.count():
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        f_mid = fn(mid)
        if f_mid == 0:
            return mid
        if np.sign(f_mid) == np.sign(f_lo):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
