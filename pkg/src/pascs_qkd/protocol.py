"""Monte Carlo run of the four-state post-selected homodyne protocol.

Alice picks one of four signals, the line keeps a fraction ``t_squared`` of
the light, Bob measures a random quadrature, and pulses are sifted on basis
agreement and post-selected on ``|outcome| > beta_c``. Only the legitimate
parties are simulated; Bob's mode is sampled from the reduced state of the
beam-splitter output.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy.integrate import cumulative_trapezoid

from .beamsplitter_attack import Family
from .channel import BeamSplitter, TwoModeFock, bs_transform_fock
from .states import FockVector, SignalLabel, fock_coefficients, quadrature_pdf

TABLE_NODES = 4096
BATCH_SIZE = 50_000


class QuadratureSampler:
    """Inverse-CDF sampler built from a tabulated density with linear interpolation."""

    def __init__(self, pdf, half_width: float, nodes: int = TABLE_NODES):
        self.x = np.linspace(-half_width, half_width, nodes)
        dens = np.maximum(np.asarray(pdf(self.x), float), 0.0)
        cdf = cumulative_trapezoid(dens, self.x, initial=0.0)
        if cdf[-1] <= 0:
            raise ValueError("density has no mass on the table")
        self.cdf = cdf / cdf[-1]

    def sample(self, rng: np.random.Generator, size=None):
        return np.interp(rng.random(size), self.cdf, self.x)


def _half_width(state) -> float:
    coeffs = state.coeffs
    n = np.arange(coeffs.shape[0])
    weights = np.abs(coeffs) ** 2 if coeffs.ndim == 1 else np.sum(np.abs(coeffs) ** 2, axis=1)
    return math.sqrt(float(n @ weights)) + 6.0


def sampler_for(state: FockVector | TwoModeFock, angle: float) -> QuadratureSampler:
    """Sampler for a single-mode state or for Bob's mode of a two-mode state."""
    if isinstance(state, TwoModeFock):
        return QuadratureSampler(lambda x: state.bob_quadrature_pdf(angle, x), _half_width(state))
    return QuadratureSampler(lambda x: quadrature_pdf(state, angle, x), _half_width(state))


def sample_quadrature(state: FockVector | TwoModeFock, angle: float, rng: np.random.Generator, size=None):
    """Homodyne outcome(s) at ``angle`` drawn from the state's quadrature density."""
    return sampler_for(state, angle).sample(rng, size)


@dataclass(frozen=True)
class ProtocolConfig:
    family: Family
    alpha: float
    beta_c: float
    n_pulses: int
    rng_seed: int = 0
    t_squared: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        if self.n_pulses < 1:
            raise ValueError("n_pulses must be at least 1")
        if self.beta_c < 0:
            raise ValueError("beta_c must be non-negative")
        if not self.alpha > 0:
            raise ValueError("alpha must be positive")


@dataclass(frozen=True)
class SiftReport:
    n_sent: int
    n_sifted: int
    n_accepted: int
    n_errors: int
    sift_fraction: float
    sift_se: float
    r_acc: float
    r_acc_se: float
    delta: float
    delta_se: float
    seed: int

    def as_dict(self) -> dict:
        return asdict(self)


def _binomial(k: int, n: int) -> tuple[float, float]:
    if n == 0:
        return float("nan"), float("nan")
    p = k / n
    return p, math.sqrt(p * (1.0 - p) / n)


def _bob_state(config: ProtocolConfig, label: SignalLabel) -> FockVector | TwoModeFock:
    state = fock_coefficients(config.family.params(config.alpha * label.phase))
    if config.t_squared >= 1.0:
        return state
    return bs_transform_fock(state, BeamSplitter.from_transmission(config.t_squared))


def run_protocol(config: ProtocolConfig) -> SiftReport:
    """Simulate ``n_pulses`` pulses and count sifted, accepted and wrong bits.

    Pulses are processed in fixed-size batches, each with its own stream
    spawned from the master seed, so the counts depend only on the seed.
    """
    labels = list(SignalLabel)
    angles = (0.0, math.pi / 2)
    samplers = {(lab, ang): sampler_for(_bob_state(config, lab), ang) for lab in labels for ang in angles}
    bits = np.array([lab.bit for lab in labels])
    basis_of = np.array([0 if lab.basis == "horizontal" else 1 for lab in labels])

    n_batches = -(-config.n_pulses // BATCH_SIZE)
    streams = np.random.SeedSequence(config.rng_seed).spawn(n_batches)
    sifted = accepted = errors = 0
    for b, ss in enumerate(streams):
        rng = np.random.default_rng(ss)
        n = min(BATCH_SIZE, config.n_pulses - b * BATCH_SIZE)
        sent = rng.integers(0, 4, size=n)
        bob_basis = rng.integers(0, 2, size=n)
        outcome = np.empty(n)
        for li, lab in enumerate(labels):
            for ai, ang in enumerate(angles):
                sel = (sent == li) & (bob_basis == ai)
                outcome[sel] = samplers[(lab, ang)].sample(rng, int(sel.sum()))
        match = basis_of[sent] == bob_basis
        keep = match & (np.abs(outcome) > config.beta_c)
        bob_bit = (outcome > 0).astype(int)
        sifted += int(match.sum())
        accepted += int(keep.sum())
        errors += int((keep & (bob_bit != bits[sent])).sum())

    n = config.n_pulses
    sift, sift_se = _binomial(sifted, n)
    r_acc, r_acc_se = _binomial(accepted, n)
    delta, delta_se = _binomial(errors, accepted)
    return SiftReport(n, sifted, accepted, errors, sift, sift_se, r_acc, r_acc_se, delta, delta_se, config.rng_seed)
