"""Photon-added-then-subtracted coherent states (PASCS) and their phase-space images.

Conventions: phase-space points are complex numbers ``zeta = zr + 1j*zi``;
the vacuum Wigner function peaks at ``2/pi`` and each quadrature of the vacuum
has variance 1/4. A homodyne outcome at angle ``theta`` is the real part of
``zeta * exp(-1j*theta)``.

Two independent routes are provided: closed forms (normalization constant,
Wigner function through bivariate Hermite polynomials) and a truncated
number-basis representation (:class:`FockVector`) used as a brute-force
oracle.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .numerics import IntegrationConfig, symmetric_rule
from .special import MAX_FACTORIAL, bivariate_hermite, factorial, hermite_functions, laguerre

TAIL_TOLERANCE = 1e-10
_CHUNK = 1 << 20  # complex samples per vectorized block

# Complex phase-space coordinate; numpy complex arrays are accepted everywhere.
PhasePoint = complex


class TruncationTooSmall(ValueError):
    """A number-basis cutoff leaves more than the allowed probability in the tail."""


@dataclass(frozen=True)
class PascsParams:
    """State ``a^l (a^dagger)^k |alpha>`` up to normalization.

    ``k = l = 0`` is the plain coherent state; the protocol uses ``k = l = 1``.
    """

    k: int
    l: int
    alpha: complex

    def __post_init__(self):
        if self.k < 0 or self.l < 0:
            raise ValueError("k and l must be non-negative")
        object.__setattr__(self, "alpha", complex(self.alpha))
        if not np.isfinite(self.alpha):
            raise ValueError("alpha must be finite")

    @classmethod
    def coherent(cls, alpha: complex) -> "PascsParams":
        return cls(0, 0, alpha)

    @classmethod
    def pascs(cls, alpha: complex) -> "PascsParams":
        return cls(1, 1, alpha)

    def with_alpha(self, alpha: complex) -> "PascsParams":
        return PascsParams(self.k, self.l, alpha)


class SignalLabel(enum.Enum):
    """The four signal states Alice chooses from."""

    PLUS = (1, "horizontal", 1)
    MINUS = (0, "horizontal", -1)
    PLUS_I = (1, "vertical", 1j)
    MINUS_I = (0, "vertical", -1j)

    @property
    def bit(self) -> int:
        return self.value[0]

    @property
    def basis(self) -> str:
        return self.value[1]

    @property
    def phase(self) -> complex:
        """Factor multiplying the real amplitude ``a``."""
        return complex(self.value[2])

    @property
    def angle(self) -> float:
        """Homodyne angle of this label's basis."""
        return 0.0 if self.basis == "horizontal" else math.pi / 2

    @classmethod
    def from_bit_basis(cls, bit: int, basis: str) -> "SignalLabel":
        for label in cls:
            if label.bit == bit and label.basis == basis:
                return label
        raise ValueError(f"no signal with bit={bit!r}, basis={basis!r}")


def normalization_constant(params: PascsParams) -> float:
    """Squared norm of ``a^l (a^dagger)^k |alpha>`` as a finite Laguerre sum."""
    k, l = params.k, params.l
    if k + l > MAX_FACTORIAL:
        raise ValueError(f"k + l = {k + l} exceeds the factorial table bound {MAX_FACTORIAL}")
    x = -abs(params.alpha) ** 2
    total = 0.0
    for m in range(l + 1):
        coef = factorial(l) ** 2 * factorial(l + k - m) / ((-1) ** m * factorial(m) * factorial(l - m) ** 2)
        total += coef * laguerre(l + k - m, x)
    return float(total)


def _checked_norm(params: PascsParams) -> float:
    n = normalization_constant(params)
    if not n > 0:
        # e.g. a|0> = 0: the ladder operators annihilate the vector
        raise ValueError(f"a^{params.l} (a^dagger)^{params.k} |{params.alpha}> is the zero vector")
    return n


def wigner_coherent(alpha: complex, z):
    """Gaussian Wigner function ``(2/pi) exp(-2|alpha - z|^2)``."""
    z = np.asarray(z, dtype=complex)
    out = 2.0 / np.pi * np.exp(-2.0 * np.abs(alpha - z) ** 2)
    return out[()] if out.ndim == 0 else out


def wigner_pascs(params: PascsParams, z):
    """Closed-form Wigner function of the PASCS at phase-space point(s) ``z``.

    The bivariate Hermite factor enters only through its squared modulus, so
    the result is real by construction.
    """
    k, l, a = params.k, params.l, params.alpha
    z = np.asarray(z, dtype=complex)
    e1 = 1j * (2.0 * z - a)
    e2 = 1j * np.conj(a)
    acc = np.zeros(z.shape)
    for n in range(k + 1):
        coef = (-1) ** n * factorial(k) ** 2 / (factorial(n) * factorial(k - n) ** 2)
        acc = acc + coef * np.abs(bivariate_hermite(k - n, l, e1, e2)) ** 2
    out = 2.0 * np.exp(-2.0 * np.abs(a - z) ** 2) / (np.pi * _checked_norm(params)) * acc
    return out[()] if out.ndim == 0 else out


def wigner_x_marginal(params: PascsParams, x, config=None):
    """``int W(x + i y) dy`` by composite Gauss-Legendre quadrature over ``y``.

    Uses the inner rule of ``config``. This is the homodyne density of the horizontal quadrature computed from
    the closed-form Wigner function. ``x`` may be any array shape.
    """
    config = (config or IntegrationConfig()).inner()
    a = params.alpha
    y, w = symmetric_rule(config, config.width())
    y = y + a.imag
    x = np.asarray(x, dtype=float)
    flat = x.ravel()
    out = np.empty(flat.size)
    step = max(1, _CHUNK // y.size)
    for start in range(0, flat.size, step):
        block = flat[start:start + step]
        out[start:start + step] = wigner_pascs(params, block[:, None] + 1j * y) @ w
    out = out.reshape(x.shape)
    return out[()] if out.ndim == 0 else out


@dataclass(frozen=True)
class FockVector:
    """Truncated number-basis amplitudes ``c_0 .. c_N`` of a pure single-mode state."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex)
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)
        norm2 = float(np.sum(np.abs(c) ** 2))
        if not (0.0 < norm2 <= 1.0 + 1e-9):
            raise ValueError(f"squared norm {norm2:.3g} outside (0, 1]")

    @property
    def truncation(self) -> int:
        return self.coeffs.size - 1

    def mean_photon_number(self) -> float:
        n = np.arange(self.coeffs.size)
        return float(n @ np.abs(self.coeffs) ** 2)


def default_truncation(alpha: complex) -> int:
    a = abs(alpha)
    return int(math.ceil(a * a + 10.0 * a + 20.0))


def coherent_amplitudes(alpha: complex, size: int) -> np.ndarray:
    """``exp(-|alpha|^2/2) alpha^n / sqrt(n!)`` for ``n < size`` via a stable recurrence."""
    c = np.empty(size, dtype=complex)
    c[0] = np.exp(-0.5 * abs(alpha) ** 2)
    for n in range(1, size):
        c[n] = c[n - 1] * alpha / np.sqrt(n)
    return c


def raise_amplitudes(c: np.ndarray) -> np.ndarray:
    """Apply the creation operator; the output is one entry longer."""
    n = np.arange(1, c.size + 1)
    out = np.zeros(c.size + 1, dtype=complex)
    out[1:] = np.sqrt(n) * c
    return out


def lower_amplitudes(c: np.ndarray) -> np.ndarray:
    """Apply the annihilation operator; the output is one entry shorter."""
    n = np.arange(1, c.size)
    return np.sqrt(n) * c[1:]


def ladder_amplitudes(params: PascsParams, truncation: int) -> np.ndarray:
    """Unnormalized amplitudes of ``a^l (a^dagger)^k |alpha>`` up to ``truncation``.

    The squared norm of the result approximates :func:`normalization_constant`.
    """
    c = coherent_amplitudes(params.alpha, truncation + 1 + params.l)
    for _ in range(params.k):
        c = raise_amplitudes(c)
    for _ in range(params.l):
        c = lower_amplitudes(c)
    return c[: truncation + 1]


def fock_coefficients(params: PascsParams, truncation: int | None = None) -> FockVector:
    """Normalized number-basis representation of the PASCS."""
    n_max = default_truncation(params.alpha) + params.k if truncation is None else truncation
    c = ladder_amplitudes(params, n_max)
    norm2 = float(np.sum(np.abs(c) ** 2))
    if norm2 == 0.0:
        raise TruncationTooSmall("all retained amplitudes vanish")
    c = c / np.sqrt(norm2)
    tail = float(np.abs(c[-1]) ** 2)
    if tail >= TAIL_TOLERANCE:
        raise TruncationTooSmall(f"tail mass {tail:.2e} at n = {n_max} exceeds {TAIL_TOLERANCE:g}")
    return FockVector(c)


def displacement_columns(beta: complex, n_cols: int, n_rows: int) -> np.ndarray:
    """Matrix elements ``<m|D(beta)|n>`` for ``m < n_rows``, ``n < n_cols``.

    Column 0 is the coherent state ``|beta>``; further columns follow from
    ``D a^dagger = (a^dagger - conj(beta)) D``. Rows are exact (not affected
    by the row cutoff).
    """
    d = np.zeros((n_rows, n_cols), dtype=complex)
    d[:, 0] = coherent_amplitudes(beta, n_rows)
    sq = np.sqrt(np.arange(n_rows))
    for n in range(n_cols - 1):
        col = -np.conj(beta) * d[:, n]
        col[1:] += sq[1:] * d[:-1, n]
        d[:, n + 1] = col / np.sqrt(n + 1)
    return d


def displaced_amplitudes(state: FockVector, beta: complex, extra: int | None = None) -> np.ndarray:
    """Amplitudes of ``D(beta)|psi>``, with a tail check on the result."""
    b = abs(beta)
    n_rows = state.coeffs.size + (int(math.ceil(b * b + 10.0 * b + 20.0)) if extra is None else extra)
    out = displacement_columns(beta, state.coeffs.size, n_rows) @ state.coeffs
    norm2 = float(np.sum(np.abs(state.coeffs) ** 2))
    missing = norm2 - float(np.sum(np.abs(out) ** 2))
    if missing > TAIL_TOLERANCE:
        raise TruncationTooSmall(f"displaced state loses {missing:.2e} probability")
    return out


def wigner_from_fock(state: FockVector, z) -> float | np.ndarray:
    """Wigner function from the parity series ``(2/pi) sum (-1)^n |<n|D(-z)|psi>|^2``."""
    z_arr = np.asarray(z, dtype=complex)
    out = np.empty(z_arr.shape)
    for idx, zz in np.ndenumerate(z_arr):
        amps = displaced_amplitudes(state, -complex(zz))
        parity = np.where(np.arange(amps.size) % 2 == 0, 1.0, -1.0)
        out[idx] = 2.0 / np.pi * float(parity @ np.abs(amps) ** 2)
    return out[()] if out.ndim == 0 else out


def quadrature_amplitude(coeffs: np.ndarray, angle: float, x) -> np.ndarray:
    """``sum_n c_n exp(-i n theta) psi_n(x)`` along the last axis of ``coeffs``."""
    x = np.asarray(x, dtype=float)
    n_max = coeffs.shape[-1] - 1
    psi = hermite_functions(n_max, x)
    phased = coeffs * np.exp(-1j * angle * np.arange(n_max + 1))
    return np.tensordot(phased, psi, axes=([-1], [0]))


def quadrature_pdf(state: FockVector, angle: float, x):
    """Homodyne density of the quadrature at ``angle`` (0 horizontal, pi/2 vertical)."""
    out = np.abs(quadrature_amplitude(state.coeffs, angle, x)) ** 2
    return out[()] if np.ndim(out) == 0 else out
