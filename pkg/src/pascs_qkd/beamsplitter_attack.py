"""Secret key rate under the beam-splitter (superior channel) attack.

Eve replaces the line loss by a beam splitter, keeps the reflected light and
measures the same quadrature as Bob after the basis is announced. Only the
horizontal basis (signals ``+a`` and ``-a``) is analysed; the vertical one is
its quarter-turn image.

The four-dimensional integral defining Bob's and Eve's joint density is
reduced exactly: the beam splitter rotates the real and the imaginary
phase-space parts separately, so integrating out both imaginary parts gives
``m_in(t*b - r*e) * m_vac(r*b + t*e)`` where ``m`` is the ``x``-marginal of a
single-mode Wigner function. Those marginals are themselves computed by
quadrature of the Wigner functions.
"""

from __future__ import annotations

import enum
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .channel import BeamSplitter, ChannelSpec, transmission_from_distance
from .numerics import Grid2D, IntegrationConfig, argmax_on_grid, composite_rule, symmetric_rule
from .states import PascsParams, wigner_x_marginal

NEGATIVE_DENSITY_SLACK = 1e-9
BOUND_SLACK = 1e-9
DEFAULT_ALPHAS = np.round(np.arange(0.1, 2.5 + 1e-9, 0.05), 10)
DEFAULT_BETA_CS = np.round(np.arange(0.0, 2.5 + 1e-9, 0.05), 10)


class ZeroAcceptance(ArithmeticError):
    """Post-selection rejects (numerically) every outcome."""


class Family(str, enum.Enum):
    PASCS = "pascs"
    COHERENT = "coherent"

    def params(self, alpha: complex) -> PascsParams:
        return PascsParams.pascs(alpha) if self is Family.PASCS else PascsParams.coherent(alpha)


@dataclass(frozen=True)
class AttackScenario:
    family: Family
    alpha: float
    bs: BeamSplitter

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        if not self.alpha > 0:
            raise ValueError("alpha must be positive")

    @classmethod
    def make(cls, family, alpha: float, t_squared: float) -> "AttackScenario":
        return cls(Family(family), float(alpha), BeamSplitter.from_transmission(t_squared))

    def params(self, sign: int = +1) -> PascsParams:
        return self.family.params(sign * self.alpha)


@dataclass(frozen=True)
class KeyRateReport:
    family: str
    alpha: float
    beta_c: float
    t_squared: float
    p0: float
    p1: float
    r_acc: float
    i_ab: float
    p_c: float
    tau: float
    s_ab: float
    s_ab_usable: float
    half_width: float
    nodes_beta: int
    nodes_eps: int

    def as_dict(self) -> dict:
        return asdict(self)


def _marginal(params: PascsParams, x, config: IntegrationConfig):
    return wigner_x_marginal(params, x, config)


def joint_density_grid(scenario: AttackScenario, beta_r, eps_r, sign: int = +1,
                       config: IntegrationConfig | None = None) -> np.ndarray:
    """``P_sign(beta_r[i], eps_r[j])`` on the tensor grid of the two axes."""
    config = config or IntegrationConfig()
    t, r = scenario.bs.t, scenario.bs.r
    b = np.asarray(beta_r, float)[:, None]
    e = np.asarray(eps_r, float)[None, :]
    p = _marginal(scenario.params(sign), t * b - r * e, config) * _marginal(PascsParams.coherent(0.0), r * b + t * e, config)
    if np.min(p) < -NEGATIVE_DENSITY_SLACK:
        raise ArithmeticError(f"joint density {np.min(p):.3g} is negative beyond quadrature noise")
    return np.maximum(p, 0.0)


def joint_prob(scenario: AttackScenario, sign: int, beta_r, eps_r, config: IntegrationConfig | None = None):
    """Joint density of Bob's ``beta_r`` and Eve's ``eps_r`` for signal ``sign * alpha``."""
    b, e = np.broadcast_arrays(np.asarray(beta_r, float), np.asarray(eps_r, float))
    config = config or IntegrationConfig()
    t, r = scenario.bs.t, scenario.bs.r
    p = _marginal(scenario.params(sign), t * b - r * e, config) * _marginal(PascsParams.coherent(0.0), r * b + t * e, config)
    p = np.maximum(p, 0.0)
    return p[()] if p.ndim == 0 else p


def bob_marginal(scenario: AttackScenario, sign: int, beta_r, config: IntegrationConfig | None = None):
    """Bob's homodyne density ``int P(beta_r, eps_r) d eps_r``."""
    config = config or IntegrationConfig()
    L = config.width(scenario.alpha)
    e, w = symmetric_rule(config, L)
    b = np.atleast_1d(np.asarray(beta_r, float))
    out = joint_density_grid(scenario, b.ravel(), e, sign, config) @ w
    out = out.reshape(b.shape)
    return out[0] if np.ndim(beta_r) == 0 else out


def joint_covariance(scenario: AttackScenario, sign: int = +1, config: IntegrationConfig | None = None) -> float:
    """Covariance of Bob's ``beta_r`` and Eve's ``eps_r`` under ``P_sign``."""
    config = config or IntegrationConfig()
    x, w = symmetric_rule(config, config.width(scenario.alpha))
    p = joint_density_grid(scenario, x, x, sign, config)
    mass = w @ p @ w
    mean_b = (w * x) @ p @ w / mass
    mean_e = w @ p @ (w * x) / mass
    return float((w * (x - mean_b)) @ p @ (w * (x - mean_e)) / mass)


class _AcceptedGrid:
    """Joint density tabulated once for a set of thresholds.

    Bob's axis is mirror-symmetric and has every ``+-beta_c`` as a panel edge,
    so all threshold integrals are exact in their limits.
    """

    def __init__(self, scenario: AttackScenario, beta_cs, config: IntegrationConfig):
        self.scenario = scenario
        self.config = config
        L = config.width(scenario.alpha)
        self.half_width = L
        max_width = 2.0 * L / config.panels
        cuts = [0.0, L] + [float(b) for b in np.atleast_1d(beta_cs) if 0.0 < b < L]
        bpos, wpos = composite_rule(cuts, max_width, config.order)
        self.beta = np.concatenate([-bpos[::-1], bpos])
        self.wbeta = np.concatenate([wpos[::-1], wpos])
        self.npos = bpos.size
        self.eps, self.weps = symmetric_rule(config, L)
        self.p_plus = joint_density_grid(scenario, self.beta, self.eps, +1, config)
        # parity: P_-(b, e) = P_+(-b, -e); both axes are mirror-symmetric
        self.p_minus = self.p_plus[::-1, ::-1]
        self.bob = self.p_plus @ self.weps

    def report(self, beta_c: float) -> KeyRateReport:
        sc = self.scenario
        beta, wb, bob = self.beta, self.wbeta, self.bob
        upper = beta >= beta_c
        lower = beta <= -beta_c
        p1 = float(wb[upper] @ bob[upper])
        p0 = float(wb[lower] @ bob[lower])
        acc = p0 + p1
        if acc <= 2e-15:
            raise ZeroAcceptance(f"no accepted bits at beta_c = {beta_c:g}")
        r_acc = 0.5 * acc

        pos = np.arange(self.npos, 2 * self.npos)
        pos = pos[beta[pos] >= beta_c]
        mirror = 2 * self.npos - 1 - pos
        bp, bm = bob[pos], bob[mirror]
        s = bp + bm
        with np.errstate(divide="ignore", invalid="ignore"):
            d = np.where(s > 0, bm / s, 0.5)
            bracket = 1.0 + _xlog2x(d) + _xlog2x(1.0 - d)
        i_ab = float(wb[pos] @ (s / acc * bracket))

        rows = upper | lower
        cp = (wb[rows] @ self.p_plus[rows]) / acc
        cm = (wb[rows] @ self.p_minus[rows]) / acc
        tot = cp + cm
        both_tiny = (cp < 1e-300) & (cm < 1e-300)
        with np.errstate(divide="ignore", invalid="ignore"):
            integrand = np.where(both_tiny, 0.0, (cp**2 + cm**2) / np.where(both_tiny, 1.0, tot))
        p_c = 0.5 * float(self.weps @ integrand)

        i_ab = _clip_checked(i_ab, 0.0, 1.0, "I_AB")
        p_c = _clip_checked(p_c, 0.5, 1.0, "P_c")
        tau = 1.0 + math.log2(p_c)
        s_ab = r_acc * (i_ab - tau)
        return KeyRateReport(
            family=sc.family.value, alpha=sc.alpha, beta_c=float(beta_c), t_squared=round(sc.bs.t_squared, 12),
            p0=p0, p1=p1, r_acc=r_acc, i_ab=i_ab, p_c=p_c, tau=tau, s_ab=s_ab,
            s_ab_usable=max(s_ab, 0.0), half_width=self.half_width,
            nodes_beta=int(self.beta.size), nodes_eps=int(self.eps.size),
        )


def _xlog2x(x: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(x > 0, x * np.log2(np.where(x > 0, x, 1.0)), 0.0)


def _clip_checked(value: float, lo: float, hi: float, name: str) -> float:
    if value < lo - BOUND_SLACK or value > hi + BOUND_SLACK:
        raise ArithmeticError(f"{name} = {value!r} outside [{lo}, {hi}]")
    return min(max(value, lo), hi)


def acceptance(scenario: AttackScenario, beta_c: float, config: IntegrationConfig | None = None) -> tuple[float, float, float]:
    """``(P(0), P(1), r_acc)`` for post-selection threshold ``beta_c``."""
    if beta_c < 0:
        raise ValueError("beta_c must be non-negative")
    g = _AcceptedGrid(scenario, [beta_c], config or IntegrationConfig())
    upper, lower = g.beta >= beta_c, g.beta <= -beta_c
    p1 = float(g.wbeta[upper] @ g.bob[upper])
    p0 = float(g.wbeta[lower] @ g.bob[lower])
    return p0, p1, 0.5 * (p0 + p1)


def shannon_info(scenario: AttackScenario, beta_c: float, config: IntegrationConfig | None = None) -> float:
    """Mutual information (bits) between Alice and Bob on post-selected bits."""
    return secret_key_rate(scenario, beta_c, config).i_ab


def collision_probability(scenario: AttackScenario, beta_c: float,
                          config: IntegrationConfig | None = None) -> tuple[float, float]:
    """``(P_c, tau)``: Eve's collision probability and the privacy-amplification cost."""
    rep = secret_key_rate(scenario, beta_c, config)
    return rep.p_c, rep.tau


def secret_key_rate(scenario: AttackScenario, beta_c: float, config: IntegrationConfig | None = None) -> KeyRateReport:
    """All intermediate quantities and ``S_AB = r_acc (I_AB - tau)``."""
    if beta_c < 0:
        raise ValueError("beta_c must be non-negative")
    return _AcceptedGrid(scenario, [beta_c], config or IntegrationConfig()).report(beta_c)


def _row(args) -> list[KeyRateReport | None]:
    family, alpha, t_squared, beta_cs, config = args
    grid = _AcceptedGrid(AttackScenario.make(family, alpha, t_squared), beta_cs, config)
    out = []
    for b in beta_cs:
        try:
            out.append(grid.report(float(b)))
        except ZeroAcceptance:
            out.append(None)
    return out


@dataclass
class SweepResult:
    family: str
    t_squared: float
    alphas: np.ndarray
    beta_cs: np.ndarray
    reports: list = field(repr=False)  # reports[i][j] at (alphas[i], beta_cs[j]); None where nothing is accepted
    s_ab: Grid2D = field(repr=False)
    best: KeyRateReport | None = None

    @property
    def max_s_ab(self) -> float:
        return self.best.s_ab if self.best is not None else float("nan")

    def rows(self):
        for row in self.reports:
            for rep in row:
                if rep is not None:
                    yield rep


def _workers(workers: int | None) -> int:
    return max(1, os.cpu_count() or 1) if workers is None else max(1, workers)


def sweep_keyrate(family, t_squared: float, alpha_range=None, beta_c_range=None,
                  config: IntegrationConfig | None = None, workers: int | None = None) -> SweepResult:
    """``S_AB`` over the ``(alpha, beta_c)`` grid with its located maximum.

    Rows (one per ``alpha``) are independent and may run in worker processes;
    results are assembled in grid order.
    """
    family = Family(family)
    alphas = np.asarray(DEFAULT_ALPHAS if alpha_range is None else alpha_range, float)
    beta_cs = np.asarray(DEFAULT_BETA_CS if beta_c_range is None else beta_c_range, float)
    if alphas.size == 0 or beta_cs.size == 0:
        raise ValueError("sweep ranges must be non-empty")
    config = config or IntegrationConfig()
    jobs = [(family, float(a), float(t_squared), beta_cs, config) for a in alphas]
    n = _workers(workers)
    if n > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=n) as pool:
            reports = list(pool.map(_row, jobs))
    else:
        reports = [_row(j) for j in jobs]
    values = np.array([[rep.s_ab if rep is not None else -np.inf for rep in row] for row in reports])
    finite = np.where(np.isfinite(values), values, np.finfo(float).min)
    grid = Grid2D(alphas, beta_cs, finite)
    best = None
    if np.any(np.isfinite(values)):
        (a, b), _ = argmax_on_grid(grid)
        best = reports[int(np.searchsorted(alphas, a))][int(np.searchsorted(beta_cs, b))]
    return SweepResult(family.value, float(t_squared), alphas, beta_cs, reports, grid, best)


def keyrate_vs_distance(family, distances, loss_coefficient: float = 0.2, alpha_range=None, beta_c_range=None,
                        config: IntegrationConfig | None = None, workers: int | None = None) -> list[tuple[float, float, KeyRateReport | None]]:
    """Optimized ``S_AB`` at each distance: ``(distance, t_squared, best report)``.

    ``(alpha, beta_c)`` is re-optimized over the grid at every distance.
    """
    out = []
    for d in distances:
        if d < 0:
            raise ValueError("distances must be non-negative")
        t2 = transmission_from_distance(ChannelSpec(loss_coefficient, float(d)))
        res = sweep_keyrate(family, t2, alpha_range, beta_c_range, config, workers)
        out.append((float(d), t2, res.best))
    return out
