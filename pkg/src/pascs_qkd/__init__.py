"""Photon-added-then-subtracted coherent states for four-state CV-QKD.

Closed-form Wigner functions, a lossy-channel model, the beam-splitter and
intercept-resend attacks, a Monte Carlo run of the protocol and a CLI.
"""

from .beamsplitter_attack import (
    AttackScenario,
    Family,
    KeyRateReport,
    SweepResult,
    ZeroAcceptance,
    acceptance,
    bob_marginal,
    collision_probability,
    joint_prob,
    keyrate_vs_distance,
    secret_key_rate,
    shannon_info,
    sweep_keyrate,
)
from .channel import BeamSplitter, ChannelSpec, TwoModeFock, bs_transform_fock, joint_wigner, transmission_from_distance
from .intercept_resend import (
    DELTA_TARGET,
    DecisionRegion,
    EveSuccess,
    IRCurvePoint,
    eve_success,
    intrinsic_error_rate,
    ir_curves,
    joint_prob_ir,
    optimize_alpha,
)
from .numerics import ConvergenceError, Grid2D, IntegrationConfig, NoSignChange, NonFiniteIntegrand, argmax_on_grid, find_root, integrate
from .protocol import ProtocolConfig, SiftReport, run_protocol, sample_quadrature
from .states import (
    FockVector,
    PascsParams,
    SignalLabel,
    TruncationTooSmall,
    fock_coefficients,
    normalization_constant,
    quadrature_pdf,
    wigner_coherent,
    wigner_from_fock,
    wigner_pascs,
    wigner_x_marginal,
)

__version__ = "0.1.0"
