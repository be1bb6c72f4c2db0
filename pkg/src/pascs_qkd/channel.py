"""Lossy line modelled as a beam splitter with vacuum in the second port.

Port convention: with input mode ``a`` and vacuum ``v`` the outputs are
``beta = t*a + r*v`` (to Bob) and ``epsilon = -r*a + t*v`` (to Eve), which is
exactly the argument pattern ``W_in(t*beta - r*epsilon) W_vac(r*beta + t*epsilon)``
of the output Wigner function. A coherent input ``|alpha>`` therefore leaves
as ``|t*alpha> (x) |-r*alpha>``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .special import factorial, hermite_functions
from .states import (
    TAIL_TOLERANCE,
    FockVector,
    PascsParams,
    TruncationTooSmall,
    quadrature_amplitude,
    wigner_coherent,
    wigner_pascs,
)

FIBER_WAVELENGTH_UM = 1.22  # recorded for reference only; never enters the loss model


@dataclass(frozen=True)
class BeamSplitter:
    """Real amplitude transmission ``t`` and reflection ``r`` with ``t^2 + r^2 = 1``."""

    t: float
    r: float

    def __post_init__(self):
        if not (0.0 <= self.t <= 1.0 and 0.0 <= self.r <= 1.0):
            raise ValueError("t and r must lie in [0, 1]")
        if abs(self.t**2 + self.r**2 - 1.0) > 1e-12:
            raise ValueError(f"t^2 + r^2 = {self.t**2 + self.r**2!r} != 1")

    @classmethod
    def from_transmission(cls, t_squared: float) -> "BeamSplitter":
        if not 0.0 <= t_squared <= 1.0:
            raise ValueError("transmission must lie in [0, 1]")
        return cls(math.sqrt(t_squared), math.sqrt(1.0 - t_squared))

    @classmethod
    def balanced(cls) -> "BeamSplitter":
        return cls(math.sqrt(0.5), math.sqrt(0.5))

    @property
    def t_squared(self) -> float:
        return self.t**2


@dataclass(frozen=True)
class ChannelSpec:
    loss_coefficient: float = 0.2  # dB/km
    distance: float = 0.0  # km

    def __post_init__(self):
        if self.loss_coefficient < 0 or self.distance < 0:
            raise ValueError("loss coefficient and distance must be non-negative")


def transmission_from_distance(spec: ChannelSpec) -> float:
    """Power transmission ``10^(-loss * distance / 10)``."""
    return 10.0 ** (-spec.loss_coefficient * spec.distance / 10.0)


def distance_from_transmission(t_squared: float, loss_coefficient: float = 0.2) -> float:
    return -10.0 * math.log10(t_squared) / loss_coefficient


def joint_wigner(params: PascsParams, bs: BeamSplitter, beta, epsilon):
    """Two-mode Wigner function of the beam-splitter output (Bob ``beta``, Eve ``epsilon``)."""
    beta = np.asarray(beta, dtype=complex)
    epsilon = np.asarray(epsilon, dtype=complex)
    return wigner_pascs(params, bs.t * beta - bs.r * epsilon) * wigner_coherent(0.0, bs.r * beta + bs.t * epsilon)


@dataclass(frozen=True)
class TwoModeFock:
    """Amplitudes ``c[m, n]`` of ``|m>_Bob |n>_Eve``."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex)
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)
        norm2 = float(np.sum(np.abs(c) ** 2))
        if abs(norm2 - 1.0) > 1e-9:
            raise ValueError(f"squared norm {norm2!r} differs from 1")

    @property
    def truncation(self) -> int:
        return self.coeffs.shape[0] - 1

    def mean_photon_numbers(self) -> tuple[float, float]:
        p = np.abs(self.coeffs) ** 2
        n = np.arange(p.shape[0])
        return float(n @ p.sum(axis=1)), float(n @ p.sum(axis=0))

    def joint_quadrature_pdf(self, x_bob, x_eve, angle_bob: float = 0.0, angle_eve: float = 0.0):
        """Density of the two homodyne outcomes; ``x_bob`` and ``x_eve`` broadcast."""
        x_bob, x_eve = np.broadcast_arrays(np.asarray(x_bob, float), np.asarray(x_eve, float))
        n = np.arange(self.coeffs.shape[0])
        psi_e = hermite_functions(n[-1], x_eve) * np.exp(-1j * angle_eve * n).reshape((-1,) + (1,) * x_eve.ndim)
        psi_b = hermite_functions(n[-1], x_bob) * np.exp(-1j * angle_bob * n).reshape((-1,) + (1,) * x_bob.ndim)
        amp = np.einsum("mn,m...,n...->...", self.coeffs, psi_b, psi_e)
        return np.abs(amp) ** 2

    def bob_quadrature_pdf(self, angle: float, x):
        """Bob's homodyne density with Eve's mode traced out."""
        # rows of coeffs.T are Bob-amplitude vectors for each Eve photon number
        amps = quadrature_amplitude(self.coeffs.T, angle, x)
        out = np.sum(np.abs(amps) ** 2, axis=0)
        return out[()] if np.ndim(out) == 0 else out


def bs_transform_fock(state: FockVector, bs: BeamSplitter) -> TwoModeFock:
    """Send a number-basis state through the beam splitter with vacuum in the other port.

    ``|n>|0> -> sum_j C(n, j) t^j (-r)^(n-j) sqrt(j! (n-j)! / n!) |j>|n-j>``.
    """
    size = state.coeffs.size
    if size - 1 > 64:
        raise TruncationTooSmall("input truncation beyond the factorial table")
    out = np.zeros((size, size), dtype=complex)
    for n, cn in enumerate(state.coeffs):
        if cn == 0:
            continue
        for j in range(n + 1):
            amp = math.sqrt(factorial(n) / (factorial(j) * factorial(n - j)))
            out[j, n - j] += cn * amp * bs.t**j * (-bs.r) ** (n - j)
    tail = float(np.sum(np.abs(out[-1, :]) ** 2) + np.sum(np.abs(out[:, -1]) ** 2))
    if tail >= TAIL_TOLERANCE:
        raise TruncationTooSmall(f"output tail mass {tail:.2e}")
    norm2 = float(np.sum(np.abs(out) ** 2))
    return TwoModeFock(out / math.sqrt(norm2))
