"""Polynomial special functions used by the PASCS closed forms and the Fock oracle."""

from __future__ import annotations

import numpy as np

MAX_FACTORIAL = 64

FACTORIALS = np.ones(MAX_FACTORIAL + 1)
for _n in range(1, MAX_FACTORIAL + 1):
    FACTORIALS[_n] = FACTORIALS[_n - 1] * _n


def factorial(n: int) -> float:
    """Table lookup of ``n!`` as a float; raises for ``n`` outside ``[0, 64]``."""
    if n < 0 or n > MAX_FACTORIAL:
        raise ValueError(f"factorial argument {n} outside table range [0, {MAX_FACTORIAL}]")
    return float(FACTORIALS[n])


def laguerre(n: int, x):
    """Laguerre polynomial ``L_n(x)`` by the three-term recurrence.

    ``(k + 1) L_{k+1} = (2k + 1 - x) L_k - k L_{k-1}``. Accepts scalar or
    array ``x``.
    """
    if n < 0:
        raise ValueError("order must be non-negative")
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if n == 0:
        return prev[()] if prev.ndim == 0 else prev
    cur = 1.0 - x
    for k in range(1, n):
        prev, cur = cur, ((2 * k + 1 - x) * cur - k * prev) / (k + 1)
    return cur[()] if cur.ndim == 0 else cur


def laguerre_sum(n: int, x):
    """Explicit-sum Laguerre polynomial, kept as an independent check of :func:`laguerre`."""
    x = np.asarray(x, dtype=float)
    total = np.zeros_like(x)
    for j in range(n + 1):
        coef = factorial(n) / (factorial(j) * factorial(n - j) * factorial(j))
        total = total + (-1) ** j * coef * x**j
    return total[()] if total.ndim == 0 else total


def bivariate_hermite(p: int, q: int, e1, e2):
    """Two-variable Hermite polynomial ``H_{p,q}(e1, e2)``.

    Defined by ``sum_r (-1)^r p! q! / (r! (p-r)! (q-r)!) e1^(p-r) e2^(q-r)``
    and evaluated here through the recurrence in the first index,
    ``H_{j+1,q} = e1 H_{j,q} - q H_{j,q-1}``, starting from
    ``H_{0,q} = e2^q``. Broadcasts over array arguments.
    """
    if p < 0 or q < 0:
        raise ValueError("indices must be non-negative")
    e1 = np.asarray(e1, dtype=complex)
    e2 = np.asarray(e2, dtype=complex)
    e1, e2 = np.broadcast_arrays(e1, e2)
    # row[j] holds H_{i, j} for the current first index i
    row = [e2**j for j in range(q + 1)]
    for _ in range(p):
        row = [e1 * row[j] - (j * row[j - 1] if j > 0 else 0.0) for j in range(q + 1)]
    out = row[q]
    return out[()] if out.ndim == 0 else out


def bivariate_hermite_sum(p: int, q: int, e1, e2):
    """Direct finite-sum evaluation of :func:`bivariate_hermite` (test oracle)."""
    e1 = np.asarray(e1, dtype=complex)
    e2 = np.asarray(e2, dtype=complex)
    total = np.zeros(np.broadcast(e1, e2).shape, dtype=complex)
    for r in range(min(p, q) + 1):
        coef = (-1) ** r * factorial(p) * factorial(q) / (factorial(r) * factorial(p - r) * factorial(q - r))
        total = total + coef * e1 ** (p - r) * e2 ** (q - r)
    return total[()] if total.ndim == 0 else total


def hermite_phys(n: int, x):
    """Physicists' Hermite polynomial via ``H_{k+1} = 2x H_k - 2k H_{k-1}``."""
    if n < 0:
        raise ValueError("order must be non-negative")
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if n == 0:
        return prev[()] if prev.ndim == 0 else prev
    cur = 2.0 * x
    for k in range(1, n):
        prev, cur = cur, 2.0 * x * cur - 2.0 * k * prev
    return cur[()] if cur.ndim == 0 else cur


def hermite_functions(n_max: int, x) -> np.ndarray:
    """Number-state quadrature wavefunctions ``psi_0 .. psi_{n_max}`` at ``x``.

    ``psi_n(x) = (2/pi)^(1/4) (2^n n!)^(-1/2) H_n(sqrt(2) x) exp(-x^2)``, i.e.
    the convention where the vacuum quadrature variance is 1/4. Uses the
    normalized recurrence so large ``n`` never overflows. Returns an array of
    shape ``(n_max + 1,) + x.shape``.
    """
    x = np.asarray(x, dtype=float)
    s = np.sqrt(2.0) * x
    out = np.empty((n_max + 1,) + x.shape)
    out[0] = (2.0 / np.pi) ** 0.25 * np.exp(-x * x)
    if n_max >= 1:
        out[1] = np.sqrt(2.0) * s * out[0]
    for k in range(1, n_max):
        out[k + 1] = s * np.sqrt(2.0 / (k + 1)) * out[k] - np.sqrt(k / (k + 1)) * out[k - 1]
    return out
