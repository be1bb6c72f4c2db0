"""Command-line front end.

    pascs-qkd wigner        --family pascs --alpha 1 --out w.csv
    pascs-qkd keyrate-sweep --family coherent --t2 0.75
    pascs-qkd distance      --loss-db-km 0.2 --distance-range 0:40:2
    pascs-qkd intercept     --beta-c-range 0:1.5:0.1
    pascs-qkd simulate      --alpha 1 --beta-c 0.5 --pulses 200000 --seed 7

Any flag may instead come from a ``--config`` file of ``key = value`` lines
(keys are flag names without the dashes); flags given on the command line win.
Exit codes: 0 success, 2 configuration error, 3 numerical audit failure.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from .beamsplitter_attack import DEFAULT_ALPHAS, DEFAULT_BETA_CS, Family, keyrate_vs_distance, sweep_keyrate
from .formats import Table, write_table
from .intercept_resend import DELTA_TARGET, ir_curves
from .numerics import ConvergenceError, IntegrationConfig, NonFiniteIntegrand
from .protocol import ProtocolConfig, run_protocol
from .states import PascsParams, TruncationTooSmall, wigner_pascs

COMMANDS = ("wigner", "keyrate-sweep", "distance", "intercept", "simulate")
EXIT_CONFIG = 2
EXIT_AUDIT = 3


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    family: str = "pascs"
    alpha: str = "1"
    k: int | None = None
    l: int | None = None
    beta_c: float = 0.5
    t2: float = 0.75
    loss_db_km: float = 0.2
    delta_target: float = DELTA_TARGET
    nodes: int = 121
    half_width: float | None = None
    seed: int = 0
    pulses: int = 200_000
    workers: int | None = None
    grid: str = "-3:3:0.05"
    alpha_range: str | None = None
    beta_c_range: str | None = None
    distance_range: str = "0:40:2"
    out: str | None = None
    format: str = "csv"

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise ConfigError(f"command: unknown command {self.command!r}")
        if self.family not in ("pascs", "coherent"):
            raise ConfigError(f"family: expected pascs or coherent, got {self.family!r}")
        if self.format not in ("csv", "json"):
            raise ConfigError(f"format: expected csv or json, got {self.format!r}")
        if not 0.0 <= self.t2 <= 1.0:
            raise ConfigError("t2: must lie in [0, 1]")
        if self.beta_c < 0:
            raise ConfigError("beta_c: must be non-negative")
        if self.loss_db_km < 0:
            raise ConfigError("loss_db_km: must be non-negative")
        if not 0.0 < self.delta_target < 0.5:
            raise ConfigError("delta_target: must lie in (0, 1/2)")
        if self.pulses < 1:
            raise ConfigError("pulses: must be at least 1")
        try:
            self.integration()
        except ValueError as exc:
            raise ConfigError(f"nodes/half_width: {exc}") from None
        self.amplitude()
        for name in ("grid", "alpha_range", "beta_c_range", "distance_range"):
            if getattr(self, name) is not None:
                parse_range(getattr(self, name), name)

    def amplitude(self) -> complex:
        try:
            return complex(str(self.alpha).replace(" ", "").replace("i", "j"))
        except ValueError:
            raise ConfigError(f"alpha: cannot parse {self.alpha!r}") from None

    def real_amplitude(self) -> float:
        a = self.amplitude()
        if a.imag != 0 or a.real <= 0:
            raise ConfigError("alpha: this command needs a positive real amplitude")
        return a.real

    def integration(self) -> IntegrationConfig:
        return IntegrationConfig(half_width=self.half_width, nodes=self.nodes)

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self) if f.name not in ("out",)}


def parse_range(spec: str, name: str = "range") -> np.ndarray:
    """``"lo:hi:step"`` inclusive of ``hi`` (to rounding), or a comma list."""
    try:
        if ":" in spec:
            lo, hi, step = (float(p) for p in spec.split(":"))
            if step <= 0 or hi < lo:
                raise ValueError
            n = int(math.floor((hi - lo) / step + 1e-9)) + 1
            values = np.round(lo + step * np.arange(n), 10)
        else:
            values = np.array([float(p) for p in spec.split(",")])
    except ValueError:
        raise ConfigError(f"{name}: cannot parse {spec!r} (expected lo:hi:step with step > 0)") from None
    if values.size == 0:
        raise ConfigError(f"{name}: empty range")
    return values


def read_config_file(path: str) -> dict:
    out = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"config: {exc}") from None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"config: line {lineno} is not 'key = value'")
        out[key.strip().replace("-", "_")] = value.strip()
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pascs-qkd", description="PASCS quantum key distribution analysis")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config")
        p.add_argument("--family", choices=("pascs", "coherent"))
        p.add_argument("--alpha")
        p.add_argument("--k", type=int)
        p.add_argument("--l", type=int)
        p.add_argument("--beta-c", type=float)
        p.add_argument("--t2", type=float)
        p.add_argument("--loss-db-km", type=float)
        p.add_argument("--delta-target", type=float)
        p.add_argument("--nodes", type=int)
        p.add_argument("--half-width", type=float)
        p.add_argument("--seed", type=int)
        p.add_argument("--pulses", type=int)
        p.add_argument("--workers", type=int)
        p.add_argument("--grid")
        p.add_argument("--alpha-range")
        p.add_argument("--beta-c-range")
        p.add_argument("--distance-range")
        p.add_argument("--out")
        p.add_argument("--format", choices=("csv", "json"))
    return parser


def resolve_config(argv) -> RunConfig:
    args = build_parser().parse_args(argv)
    merged = read_config_file(args.config) if args.config else {}
    for key, value in vars(args).items():
        if key not in ("config", "command") and value is not None:
            merged[key] = value
    kinds = {f.name: f.type for f in fields(RunConfig)}
    kwargs = {}
    for key, value in merged.items():
        if key not in kinds or key == "command":
            raise ConfigError(f"{key}: unknown setting")
        kind = str(kinds[key])
        try:
            if "int" in kind and not isinstance(value, int):
                value = int(value)
            elif "float" in kind and not isinstance(value, float):
                value = float(value)
        except ValueError:
            raise ConfigError(f"{key}: cannot parse {value!r}") from None
        kwargs[key] = value
    cfg = RunConfig(command=args.command, **kwargs)
    cfg.validate()
    return cfg


def cmd_wigner(cfg: RunConfig) -> Table:
    a = cfg.amplitude()
    if cfg.k is not None or cfg.l is not None:
        params = PascsParams(cfg.k or 0, cfg.l or 0, a)
    else:
        params = Family(cfg.family).params(a)
    axis = parse_range(cfg.grid, "grid")
    zr, zi = np.meshgrid(axis, axis, indexing="ij")
    w = wigner_pascs(params, zr + 1j * zi)
    rows = [[float(x), float(y), float(v)] for x, y, v in zip(zr.ravel(), zi.ravel(), w.ravel())]
    step = axis[1] - axis[0] if axis.size > 1 else 0.0
    summary = {"k": params.k, "l": params.l, "alpha_re": a.real, "alpha_im": a.imag,
               "min_w": float(w.min()), "max_w": float(w.max()), "negative": bool(w.min() < 0),
               "grid_integral": float(w.sum() * step * step)}
    return Table("wigner", ["zr", "zi", "w"], rows, cfg.as_dict(), summary)


KEYRATE_COLUMNS = ["family", "alpha", "beta_c", "t_squared", "p0", "p1", "r_acc", "i_ab", "p_c", "tau",
                   "s_ab", "s_ab_usable", "half_width", "nodes_beta", "nodes_eps"]


def cmd_keyrate_sweep(cfg: RunConfig) -> Table:
    alphas = parse_range(cfg.alpha_range, "alpha_range") if cfg.alpha_range else DEFAULT_ALPHAS
    beta_cs = parse_range(cfg.beta_c_range, "beta_c_range") if cfg.beta_c_range else DEFAULT_BETA_CS
    res = sweep_keyrate(cfg.family, cfg.t2, alphas, beta_cs, cfg.integration(), cfg.workers)
    rows = [[getattr(rep, c) for c in KEYRATE_COLUMNS] for rep in res.rows()]
    best = res.best.as_dict() if res.best is not None else None
    summary = {"max_s_ab": res.max_s_ab, "max_s_ab_usable": max(res.max_s_ab, 0.0) if best else float("nan"),
               "best": best, "n_points": len(rows)}
    return Table("keyrate-sweep", KEYRATE_COLUMNS, rows, cfg.as_dict(), summary)


def cmd_distance(cfg: RunConfig) -> Table:
    alphas = parse_range(cfg.alpha_range, "alpha_range") if cfg.alpha_range else DEFAULT_ALPHAS
    beta_cs = parse_range(cfg.beta_c_range, "beta_c_range") if cfg.beta_c_range else DEFAULT_BETA_CS
    distances = parse_range(cfg.distance_range, "distance_range")
    curves = {fam: keyrate_vs_distance(fam, distances, cfg.loss_db_km, alphas, beta_cs, cfg.integration(), cfg.workers)
              for fam in ("pascs", "coherent")}
    rows = []
    for (d, t2, bp), (_, _, bc) in zip(curves["pascs"], curves["coherent"]):
        def pick(rep, attr):
            return getattr(rep, attr) if rep is not None else float("nan")
        rows.append([d, t2, pick(bp, "s_ab"), pick(bc, "s_ab"), pick(bp, "alpha"), pick(bp, "beta_c"),
                     pick(bc, "alpha"), pick(bc, "beta_c")])
    cols = ["distance_km", "t_squared", "s_ab_pascs", "s_ab_coherent",
            "alpha_pascs", "beta_c_pascs", "alpha_coherent", "beta_c_coherent"]
    dominated = all(r[2] >= r[3] for r in rows if r[2] > 0 and r[3] > 0)
    return Table("distance", cols, rows, cfg.as_dict(), {"pascs_dominates": dominated})


IR_COLUMNS = ["family", "beta_c", "alpha_opt", "r_acc", "p_corr", "p_corr_doubled", "p_corr_ml", "audit_ok", "flag"]


def cmd_intercept(cfg: RunConfig) -> Table:
    beta_cs = parse_range(cfg.beta_c_range or "0:1.5:0.1", "beta_c_range")
    rows = []
    for fam in ("pascs", "coherent"):
        for pt in ir_curves(fam, beta_cs, cfg.delta_target, cfg.integration()):
            rows.append([getattr(pt, c) for c in IR_COLUMNS])
    summary = {"delta_target": cfg.delta_target, "flagged_rows": sum(1 for r in rows if r[-1])}
    return Table("intercept", IR_COLUMNS, rows, cfg.as_dict(), summary)


def cmd_simulate(cfg: RunConfig) -> Table:
    pc = ProtocolConfig(cfg.family, cfg.real_amplitude(), cfg.beta_c, cfg.pulses, cfg.seed, cfg.t2)
    rep = run_protocol(pc).as_dict()
    cols = list(rep)
    return Table("simulate", cols, [[rep[c] for c in cols]], cfg.as_dict(), rep)


HANDLERS = {
    "wigner": cmd_wigner,
    "keyrate-sweep": cmd_keyrate_sweep,
    "distance": cmd_distance,
    "intercept": cmd_intercept,
    "simulate": cmd_simulate,
}


def _summary_line(table: Table) -> str:
    parts = []
    for k, v in table.summary.items():
        if isinstance(v, dict):
            continue
        parts.append(f"{k}={v:.6g}" if isinstance(v, float) else f"{k}={v}")
    return f"{table.command}: " + " ".join(parts)


def main(argv=None) -> int:
    try:
        cfg = resolve_config(argv)
        table = HANDLERS[cfg.command](cfg)
    except (ConvergenceError, NonFiniteIntegrand, TruncationTooSmall, ArithmeticError) as exc:
        print(f"numerical audit failure: {exc}", file=sys.stderr)
        return EXIT_AUDIT
    except ValueError as exc:
        # ConfigError, or a parameter the library rejects (e.g. a zero-vector state)
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    text = write_table(table, cfg.out, cfg.format)
    if cfg.out is None:
        sys.stdout.write(text)
        print(_summary_line(table), file=sys.stderr)
    else:
        print(_summary_line(table))
    return 0


if __name__ == "__main__":
    sys.exit(main())
