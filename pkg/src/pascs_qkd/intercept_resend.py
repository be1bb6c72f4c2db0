"""Simultaneous quadrature measurement (intercept-resend) attack.

Eve splits every pulse on a balanced beam splitter and measures ``beta_r`` on
the transmitted half and ``eps_i`` on the reflected half, then guesses which
of the four signals was sent from the phase-space sector of the outcome.

With ``beta = beta_r + i beta_i`` and ``eps = eps_r + i eps_i`` the joint
density ``int int W_in(t beta - r eps) W_vac(r beta + t eps) d beta_i d eps_r``
becomes, after substituting ``x = t beta_r - r eps_r`` and
``y = t beta_i - r eps_i``,

    2 / (pi r t) * int int W_in(x + i y)
        * exp(-2 (beta_r - t x)^2 / r^2) * exp(-2 (eps_i + r y)^2 / t^2) dx dy,

a separable Gaussian smoothing of the input Wigner function. On a fixed
quadrature grid in ``(x, y)`` this is two matrix products.

Port orientation: the reflected port carries ``-r`` times the input
amplitude, so the quarter-turn signals ``+-i a`` show up at ``eps_i`` of sign
opposite to their label. Eve's sectors for ``PLUS_I``/``MINUS_I`` are oriented
accordingly (see :class:`DecisionRegion`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .beamsplitter_attack import Family, ZeroAcceptance
from .channel import BeamSplitter, joint_wigner
from .numerics import IntegrationConfig, NoSignChange, composite_rule, find_root, symmetric_rule
from .states import PascsParams, SignalLabel, wigner_pascs, wigner_x_marginal

DELTA_TARGET = 1.15e-3
ALPHA_BRACKET = (0.05, 5.0)
SCAN_STEP = 0.02


@dataclass(frozen=True)
class DecisionRegion:
    """Eve's guess sector for one signal label.

    ``PLUS``: ``beta_r >= |eps_i|``; ``MINUS``: ``-beta_r >= |eps_i|``;
    ``PLUS_I``: ``-eps_i > |beta_r|``; ``MINUS_I``: ``eps_i > |beta_r|``.
    """

    label: SignalLabel

    def contains(self, beta_r, eps_i):
        b = np.asarray(beta_r, float)
        e = np.asarray(eps_i, float)
        if self.label is SignalLabel.PLUS:
            return b >= np.abs(e)
        if self.label is SignalLabel.MINUS:
            return -b >= np.abs(e)
        if self.label is SignalLabel.PLUS_I:
            return -e > np.abs(b)
        return e > np.abs(b)


@dataclass(frozen=True)
class EveSuccess:
    """Eve's success rate under three readings of the guessing rule.

    ``p_corr`` is the probability that the sector rule names the sent signal.
    ``p_corr_doubled`` is twice the single-sector mass, the normalization that is
    sometimes quoted for this attack; ``audit_ok`` is False when it leaves ``[1/4, 1]``.
    ``p_corr_ml`` uses the true maximum-likelihood rule over the four densities.
    """

    alpha: float
    p_corr: float
    p_corr_doubled: float
    p_corr_ml: float
    region_total: float
    audit_ok: bool


@dataclass(frozen=True)
class IRCurvePoint:
    family: str
    beta_c: float
    alpha_opt: float
    r_acc: float
    p_corr: float
    p_corr_doubled: float
    p_corr_ml: float
    audit_ok: bool
    flag: str = ""


def _signal_params(family, alpha: float, label: SignalLabel) -> PascsParams:
    return Family(family).params(alpha * label.phase)


class _SmoothedWigner:
    """Input Wigner function tabulated once on an ``(x, y)`` product rule."""

    def __init__(self, params: PascsParams, bs: BeamSplitter, config: IntegrationConfig):
        if bs.t == 0.0 or bs.r == 0.0:
            raise ValueError("simultaneous measurement needs both ports open")
        self.bs = bs
        a = params.alpha
        half = config.width(abs(a))
        x, self.wx = symmetric_rule(config, half)
        y, self.wy = symmetric_rule(config, half)
        self.x = x + a.real
        self.y = y + a.imag
        self.w = wigner_pascs(params, self.x[:, None] + 1j * self.y[None, :])

    def _kernel_b(self, beta_r):
        t, r = self.bs.t, self.bs.r
        return np.exp(-2.0 * (np.asarray(beta_r, float)[..., None] - t * self.x) ** 2 / r**2) * self.wx

    def _kernel_e(self, eps_i):
        t, r = self.bs.t, self.bs.r
        return np.exp(-2.0 * (np.asarray(eps_i, float)[..., None] + r * self.y) ** 2 / t**2) * self.wy

    @property
    def prefactor(self) -> float:
        return 2.0 / (math.pi * self.bs.r * self.bs.t)

    def grid(self, beta_r, eps_i) -> np.ndarray:
        """Density on the tensor product of two 1-D axes."""
        return self.prefactor * self._kernel_b(beta_r) @ self.w @ self._kernel_e(eps_i).T

    def points(self, beta_r, eps_i) -> np.ndarray:
        b, e = np.broadcast_arrays(np.asarray(beta_r, float), np.asarray(eps_i, float))
        left = self._kernel_b(b) @ self.w
        return self.prefactor * np.einsum("...l,...l->...", left, self._kernel_e(e))


def joint_prob_ir(family, alpha: float, beta_r, eps_i, label: SignalLabel = SignalLabel.PLUS,
                  config: IntegrationConfig | None = None, bs: BeamSplitter | None = None):
    """Joint density of Eve's ``(beta_r, eps_i)`` for the given signal."""
    sw = _SmoothedWigner(_signal_params(family, alpha, label), bs or BeamSplitter.balanced(), config or IntegrationConfig())
    out = sw.points(beta_r, eps_i)
    return out[()] if np.ndim(out) == 0 else out


def joint_prob_ir_direct(params: PascsParams, beta_r: float, eps_i: float, config: IntegrationConfig | None = None,
                         bs: BeamSplitter | None = None) -> float:
    """Same density by brute-force quadrature of the two-mode Wigner function (check route)."""
    bs = bs or BeamSplitter.balanced()
    config = config or IntegrationConfig()
    L = config.width(abs(params.alpha))
    s, w = symmetric_rule(config, L)
    beta_i = s[:, None]
    eps_r = s[None, :]
    vals = joint_wigner(params, bs, beta_r + 1j * beta_i, eps_r + 1j * eps_i)
    return float(w @ vals @ w)


# maps (radial b >= 0, u in [-1, 1]) onto each sector; Jacobian is b
_SECTOR_MAPS = {
    SignalLabel.PLUS: lambda b, u: (b, b * u),
    SignalLabel.MINUS: lambda b, u: (-b, b * u),
    SignalLabel.PLUS_I: lambda b, u: (b * u, -b),
    SignalLabel.MINUS_I: lambda b, u: (b * u, b),
}
ML_GRID_STEP = 0.01


def _sector_mass(sw: _SmoothedWigner, label: SignalLabel, config: IntegrationConfig, half: float) -> float:
    """Mass of one decision sector, integrated in sector-adapted coordinates."""
    b, wb = composite_rule([0.0, half], 2.0 * half / config.panels, config.order)
    u, wu = composite_rule([-1.0, 1.0], 2.0 / config.panels, config.order)
    br, ei = _SECTOR_MAPS[label](b[:, None], u[None, :])
    dens = sw.points(br, ei)
    return float(wb @ (b[:, None] * dens) @ wu)


def _midpoint_axis(half: float, step: float = ML_GRID_STEP) -> np.ndarray:
    n = int(math.ceil(2.0 * half / step))
    return -half + step * (np.arange(n) + 0.5)


def _ml_tables(family, alpha: float, config: IntegrationConfig):
    """Four signal densities on a uniform midpoint grid (decision rules are discontinuous)."""
    bs = BeamSplitter.balanced()
    half = config.width(alpha)
    b_axis = _midpoint_axis(half)
    step = b_axis[1] - b_axis[0]
    # offset keeps nodes off the diagonals, where sector boundaries and likelihood ties lie
    e_axis = b_axis + step / 3.0
    labels = list(SignalLabel)
    dens = np.stack([_SmoothedWigner(_signal_params(family, alpha, lab), bs, config).grid(b_axis, e_axis)
                     for lab in labels])
    return labels, (b_axis, e_axis), step * step, dens


def eve_success(family, alpha: float, config: IntegrationConfig | None = None) -> EveSuccess:
    """Eve's success probability for the balanced simultaneous-measurement attack."""
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    config = config or IntegrationConfig()
    half = config.width(alpha)
    sw_plus = _SmoothedWigner(_signal_params(family, alpha, SignalLabel.PLUS), BeamSplitter.balanced(), config)
    masses = {lab: _sector_mass(sw_plus, lab, config, half) for lab in SignalLabel}
    wedge = masses[SignalLabel.PLUS]

    _, _, cell, dens = _ml_tables(family, alpha, config)
    p_ml = 0.25 * cell * float(np.sum(np.max(dens, axis=0)))

    doubled = 2.0 * wedge
    return EveSuccess(alpha=float(alpha), p_corr=wedge, p_corr_doubled=doubled, p_corr_ml=float(p_ml),
                      region_total=sum(masses.values()), audit_ok=bool(0.25 - 1e-9 <= doubled <= 1.0 + 1e-9))


def sector_success(family, alpha: float, label: SignalLabel, config: IntegrationConfig | None = None) -> float:
    """Probability that the sector rule identifies ``label`` when ``label`` is sent."""
    config = config or IntegrationConfig()
    sw = _SmoothedWigner(_signal_params(family, alpha, label), BeamSplitter.balanced(), config)
    return _sector_mass(sw, label, config, config.width(alpha))


def ml_agreement(family, alpha: float, config: IntegrationConfig | None = None) -> float:
    """Probability mass (averaged over the four signals) where the sector rule
    names the same signal as the maximum-likelihood rule."""
    labels, (b_axis, e_axis), cell, dens = _ml_tables(family, alpha, config or IntegrationConfig())
    B, E = np.meshgrid(b_axis, e_axis, indexing="ij")
    sector = np.argmax(np.stack([DecisionRegion(lab).contains(B, E) for lab in labels]), axis=0)
    match = np.argmax(dens, axis=0) == sector
    return 0.25 * cell * float(np.sum(dens * match))


def _tails(params: PascsParams, beta_c: float, config: IntegrationConfig) -> tuple[float, float]:
    """``(P(x < -beta_c), P(x > beta_c))`` for the lossless homodyne marginal."""
    L = config.width(abs(params.alpha))
    if beta_c >= L:
        return 0.0, 0.0
    x, w = composite_rule([beta_c, L], 2.0 * L / config.panels, config.order)
    hi = float(w @ wigner_x_marginal(params, x, config))
    lo = float(w @ wigner_x_marginal(params, -x, config))
    return lo, hi


def intrinsic_error_rate(family, alpha: float, beta_c: float, config: IntegrationConfig | None = None) -> float:
    """Post-selected bit error rate on a lossless line without Eve."""
    if not alpha > 0 or beta_c < 0:
        raise ValueError("need alpha > 0 and beta_c >= 0")
    lo, hi = _tails(Family(family).params(alpha), beta_c, config or IntegrationConfig())
    if lo + hi <= 1e-15:
        raise ZeroAcceptance(f"no accepted bits at alpha = {alpha:g}, beta_c = {beta_c:g}")
    return lo / (lo + hi)


def lossless_acceptance(family, alpha: float, beta_c: float, config: IntegrationConfig | None = None) -> float:
    """``r_acc = (P(0) + P(1)) / 2`` with ``T = 1``."""
    lo, hi = _tails(Family(family).params(alpha), beta_c, config or IntegrationConfig())
    return 0.5 * (lo + hi)


def optimize_alpha(family, beta_c: float, delta_target: float = DELTA_TARGET,
                   config: IntegrationConfig | None = None, bracket=ALPHA_BRACKET, tol: float = 1e-5,
                   scan_step: float = SCAN_STEP) -> float:
    """Smallest amplitude at which the intrinsic error rate comes down to ``delta_target``.

    For the PASCS the error rate is not monotone in ``alpha`` (the marginal has
    a zero that sweeps through the rejected band), so several amplitudes can
    hit the target. The bracket is scanned with ``scan_step`` for the first
    downward crossing, which is then refined by bisection.
    """
    if not 0.0 < delta_target < 0.5:
        raise ValueError("delta_target must lie in (0, 1/2)")

    def gap(a: float) -> float:
        try:
            return intrinsic_error_rate(family, a, beta_c, config) - delta_target
        except ZeroAcceptance:
            return -delta_target

    lo, hi = float(bracket[0]), float(bracket[1])
    n = max(1, int(math.ceil((hi - lo) / scan_step)))
    grid = np.linspace(lo, hi, n + 1)
    prev = gap(grid[0])
    if prev <= 0:
        raise NoSignChange(f"error rate already at or below target at alpha = {lo:g}")
    for a0, a1 in zip(grid[:-1], grid[1:]):
        cur = gap(a1)
        if cur <= 0:
            return find_root(gap, (a0, a1), tol)
    raise NoSignChange(f"error rate stays above {delta_target:g} on [{lo:g}, {hi:g}]")


def ir_curves(family, beta_c_range, delta_target: float = DELTA_TARGET,
              config: IntegrationConfig | None = None) -> list[IRCurvePoint]:
    """Optimal amplitude, accepted fraction and Eve's success for each threshold."""
    family = Family(family)
    points = []
    for beta_c in beta_c_range:
        beta_c = float(beta_c)
        try:
            a = optimize_alpha(family, beta_c, delta_target, config)
        except NoSignChange as exc:
            nan = float("nan")
            points.append(IRCurvePoint(family.value, beta_c, nan, nan, nan, nan, nan, False, f"no-sign-change: {exc}"))
            continue
        es = eve_success(family, a, config)
        points.append(IRCurvePoint(family.value, beta_c, a, lossless_acceptance(family, a, beta_c, config),
                                   es.p_corr, es.p_corr_doubled, es.p_corr_ml, es.audit_ok))
    return points
