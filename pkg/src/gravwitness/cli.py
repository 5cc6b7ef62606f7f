"""Command-line experiment runner.

Subcommands emit plot-ready tables (CSV or JSON) for the phase shifts,
the negativity and witness curves with and without dephasing, and a
soundness check of the witness on random separable channels::

    gravwitness fig4 --out fig4.csv
    gravwitness witness-check --seed 7 --format json

Exit codes: 0 success, 2 configuration error, 3 numerical invariant violation.
"""

from __future__ import annotations

import argparse
import functools
import io
import json
import math
import sys
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import __version__
from .channels import (
    CoefficientMatrix,
    DampingRates,
    apply_channel,
    damped_gravity_channel,
    gravity_channel,
    sample_separable_channel,
    validate_channel,
)
from .entanglement import (
    negativity_closed_form,
    negativity_damped_closed_form,
    negativity_numeric,
)
from .errors import GravWitnessError, InvalidChannel, InvalidState, ZeroCoherence
from .phases import (
    Geometry,
    PATH_LABELS,
    PhaseSet,
    dimensionless_phases,
    phases_exact,
    phases_large_T,
    phases_quadrature,
    to_dimensionless,
    unit_geometry,
)
from .states import CoherencePair, initial_state
from .witness import (
    REFERENCE_PHASES,
    canonical_witness,
    gravity_nu,
    witness_eigendata,
    witness_expectation_closed_form,
    witness_expectation_trace,
    witness_matrix_w,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INVARIANT = 3

SQRT2_M1 = math.sqrt(2) - 1
PANEL_T = "T_in_units_pi_hbar_D_over_Gm2"
GAMMA_UNITS = ("Gm2/(pi hbar D)", "Gm2/(hbar D)")
CROSS_CHECK_ATOL = 1e-10
C_INDEPENDENCE_ATOL = 1e-12


class ConfigError(ValueError):
    pass


class InvariantViolation(RuntimeError):
    pass


@dataclass
class ExperimentConfig:
    """Flat experiment description. Every field has a documented default.

    ``T_range`` is ``(start, stop, points)``: panel units of
    ``pi hbar D / (G m^2)`` in dimensionless mode, seconds in SI mode.
    ``theta_range`` (radians) replaces it in dimensionless mode when set.
    Damping pairs are ``(gamma_A, gamma_B)`` in ``gamma_unit`` (1/s in SI mode).
    """

    mode: str = "dimensionless"
    T_range: tuple[float, float, int] = (0.0, 3.0, 1000)
    theta_range: tuple[float, float, int] | None = None
    r: float = 0.5
    tau_over_T: float = 0.0
    coherence: list[tuple[float, float]] | None = None
    damping: list[tuple[float, float]] = field(
        default_factory=lambda: [(0.0, 0.0), (0.2, 0.2), (0.4, 0.4), (0.8, 0.8)]
    )
    gamma_unit: str = GAMMA_UNITS[0]
    geometry: dict[str, float] = field(default_factory=dict)
    phase_method: str = "large_T"
    quadrature_steps: int = 10_000
    negativity_method: str = "numeric"
    seed: int = 0
    samples: int = 10_000
    mixtures: int = 3
    out: str | None = None
    format: str = "csv"
    witness_mode: str = "trace"

    def validate(self) -> "ExperimentConfig":
        if self.mode not in ("dimensionless", "si"):
            raise ConfigError(f"field 'mode': expected 'dimensionless' or 'si', got {self.mode!r}")
        self.T_range = _check_range("T_range", self.T_range)
        if self.theta_range is not None:
            self.theta_range = _check_range("theta_range", self.theta_range)
        if not (isinstance(self.r, (int, float)) and 0 < self.r < 1):
            raise ConfigError(f"field 'r': must lie in (0, 1), got {self.r!r}")
        if not (isinstance(self.tau_over_T, (int, float)) and 0 <= self.tau_over_T < math.inf):
            raise ConfigError(f"field 'tau_over_T': must be finite and >= 0, got {self.tau_over_T!r}")
        if self.coherence is not None:
            self.coherence = [_check_pair("coherence", p, 1.0) for p in self.coherence]
            if not self.coherence:
                raise ConfigError("field 'coherence': must not be empty")
        self.damping = [_check_pair("damping", p, math.inf) for p in self.damping]
        if any(g < 0 for pair in self.damping for g in pair):
            raise ConfigError("field 'damping': rates must be >= 0")
        if self.gamma_unit not in GAMMA_UNITS:
            raise ConfigError(f"field 'gamma_unit': expected one of {GAMMA_UNITS}, got {self.gamma_unit!r}")
        if self.phase_method not in ("large_T", "exact", "quadrature", "all"):
            raise ConfigError(f"field 'phase_method': unknown value {self.phase_method!r}")
        if self.negativity_method not in ("numeric", "closed_form"):
            raise ConfigError(f"field 'negativity_method': unknown value {self.negativity_method!r}")
        if self.format not in ("csv", "json"):
            raise ConfigError(f"field 'format': expected 'csv' or 'json', got {self.format!r}")
        if self.witness_mode not in ("trace", "literal"):
            raise ConfigError(f"field 'witness_mode': expected 'trace' or 'literal', got {self.witness_mode!r}")
        for name in ("seed", "samples", "mixtures", "quadrature_steps"):
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool) or value < 0:
                raise ConfigError(f"field '{name}': must be a non-negative integer, got {value!r}")
        if self.seed >= 2**64:
            raise ConfigError("field 'seed': must fit in 64 bits")
        if self.samples < 1 or self.mixtures < 1:
            raise ConfigError("fields 'samples' and 'mixtures' must be >= 1")
        if self.quadrature_steps < 100:
            raise ConfigError("field 'quadrature_steps': must be >= 100")
        if self.mode == "si":
            self.si_geometry(1.0)
        return self

    def si_geometry(self, T: float) -> Geometry:
        known = {f.name for f in fields(Geometry)} - {"T"}
        unknown = set(self.geometry) - known
        if unknown:
            raise ConfigError(f"field 'geometry': unknown keys {sorted(unknown)}")
        missing = {"D", "L", "tau", "m_A", "m_B"} - set(self.geometry)
        if missing:
            raise ConfigError(f"field 'geometry': missing keys {sorted(missing)} (required in si mode)")
        try:
            return Geometry(T=T, **self.geometry)
        except (TypeError, GravWitnessError) as exc:
            raise ConfigError(f"field 'geometry': {exc}") from exc


def _check_range(name: str, value) -> tuple[float, float, int]:
    if not isinstance(value, (list, tuple)) or len(value) != 3:
        raise ConfigError(f"field '{name}': expected [start, stop, points], got {value!r}")
    start, stop, steps = value
    if not all(isinstance(x, (int, float)) and math.isfinite(x) for x in (start, stop)):
        raise ConfigError(f"field '{name}': start and stop must be finite numbers")
    if not isinstance(steps, int) or isinstance(steps, bool) or steps < 2:
        raise ConfigError(f"field '{name}': points must be an integer >= 2, got {steps!r}")
    if start < 0 or stop < start:
        raise ConfigError(f"field '{name}': need 0 <= start <= stop, got {start!r}, {stop!r}")
    return float(start), float(stop), steps


def _check_pair(name: str, value, bound: float) -> tuple[float, float]:
    if isinstance(value, (int, float)):
        value = (value, value)
    if not isinstance(value, (list, tuple)) or len(value) != 2:
        raise ConfigError(f"field '{name}': expected a number or a pair, got {value!r}")
    if not all(isinstance(x, (int, float)) and not isinstance(x, bool) and math.isfinite(x) for x in value):
        raise ConfigError(f"field '{name}': entries must be finite numbers, got {value!r}")
    if any(abs(x) > bound for x in value):
        raise ConfigError(f"field '{name}': entries must satisfy |x| <= {bound}, got {value!r}")
    return float(value[0]), float(value[1])


def load_config(path: str | None, overrides: dict[str, Any]) -> ExperimentConfig:
    data: dict[str, Any] = {}
    if path is not None:
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}") from exc
        if not isinstance(data, dict):
            raise ConfigError(f"{path}: top level must be a JSON object")
    known = {f.name for f in fields(ExperimentConfig)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ConfigError(f"unknown config field(s): {', '.join(unknown)}")
    data.update({k: v for k, v in overrides.items() if v is not None})
    for key in ("T_range", "theta_range"):
        if isinstance(data.get(key), list):
            data[key] = tuple(data[key])
    return ExperimentConfig(**data).validate()


# -- sweeps -----------------------------------------------------------------


@dataclass(frozen=True)
class SweepPoint:
    x: float
    theta: float
    T: float
    phases: PhaseSet


def sweep_points(cfg: ExperimentConfig) -> tuple[str, list[SweepPoint]]:
    """Sweep abscissae in order, with large-T phases for each point.

    ``T`` is the time in the unit used for damping products: panel units in
    dimensionless mode, seconds in SI mode.
    """
    if cfg.mode == "si":
        start, stop, n = cfg.T_range
        pts = []
        for T in np.linspace(start, stop, n):
            g = cfg.si_geometry(float(T))
            pts.append(SweepPoint(float(T), to_dimensionless(g).theta, float(T), phases_large_T(g)))
        return "T_s", pts
    if cfg.theta_range is not None:
        start, stop, n = cfg.theta_range
        return "theta_rad", [
            SweepPoint(float(th), float(th), float(th) / math.pi, dimensionless_phases(float(th), cfg.r))
            for th in np.linspace(start, stop, n)
        ]
    start, stop, n = cfg.T_range
    pts = []
    for t in np.linspace(start, stop, n):
        th = math.pi * float(t)
        pts.append(SweepPoint(float(t), th, float(t), dimensionless_phases(th, cfg.r)))
    return PANEL_T, pts


def damping_at(cfg: ExperimentConfig, gammas: tuple[float, float], pt: SweepPoint) -> DampingRates:
    ga, gb = gammas
    if cfg.mode == "si":
        return DampingRates(ga, gb, pt.T)
    # gamma in Gm2/(pi hbar D) times T in pi hbar D/Gm2 is dimensionless as is
    scale = 1.0 if cfg.gamma_unit == GAMMA_UNITS[0] else math.pi
    return DampingRates(ga * scale, gb * scale, pt.T)


def _label(value: float) -> str:
    return f"{value:.1f}" if abs(value - round(value, 1)) < 1e-12 else f"{value:.4f}"


def _c_label(c: tuple[float, float]) -> str:
    return f"c{_label(c[0])}" if c[0] == c[1] else f"c{_label(c[0])}_{_label(c[1])}"


def _g_label(g: tuple[float, float]) -> str:
    return f"g{_label(g[0])}" if g[0] == g[1] else f"gA{_label(g[0])}_gB{_label(g[1])}"


def _checked_channel(p: PhaseSet, d: DampingRates | None) -> CoefficientMatrix:
    e = gravity_channel(p) if d is None else damped_gravity_channel(p, d)
    report = validate_channel(e.matrix)
    if not report.valid:
        raise InvariantViolation(f"channel at {p} failed validation: {report}")
    return e


def _negativities(cfg: ExperimentConfig, coherences, p: PhaseSet, d: DampingRates | None) -> list[float]:
    """Negativity per coherence pair, cross-checked against the closed form.

    The channel is validated once; a valid coefficient matrix maps states
    to states (Schur product theorem), so outputs are not re-validated.
    """
    e = None if cfg.negativity_method == "closed_form" else _checked_channel(p, d)
    out = []
    for c in coherences:
        pair = CoherencePair(*c)
        closed = (
            negativity_closed_form(pair, p) if d is None else negativity_damped_closed_form(pair, p, d)
        ).negativity
        if e is None:
            out.append(closed)
            continue
        numeric = negativity_numeric(apply_channel(e, initial_state(pair), check=False)).negativity
        if abs(numeric - closed) > CROSS_CHECK_ATOL:
            raise InvariantViolation(
                f"negativity mismatch at {p}, c={c}: numeric {numeric!r} vs closed form {closed!r}"
            )
        out.append(numeric)
    return out


@functools.lru_cache(maxsize=64)
def _canonical(c: tuple[float, float]):
    return canonical_witness(CoherencePair(*c)), initial_state(CoherencePair(*c))


def _witness(cfg: ExperimentConfig, coherences, p: PhaseSet, d: DampingRates | None) -> float:
    pair = CoherencePair(*coherences[0])
    if cfg.witness_mode == "literal":
        return witness_expectation_closed_form(pair, p, d, mode="literal")
    e = _checked_channel(p, d)
    values = []
    for c in coherences:
        w, rho_in = _canonical(tuple(c))
        values.append(witness_expectation_trace(w, apply_channel(e, rho_in, check=False)))
    if max(values) - min(values) > C_INDEPENDENCE_ATOL:
        raise InvariantViolation(f"witness expectation depends on coherence at {p}: {values}")
    closed = witness_expectation_closed_form(pair, p, d, mode="trace")
    if abs(values[0] - closed) > CROSS_CHECK_ATOL:
        raise InvariantViolation(f"witness trace {values[0]!r} vs closed form {closed!r} at {p}")
    return values[0]


@dataclass
class Table:
    command: str
    columns: list[str]
    rows: list[list[float]]
    meta: dict[str, Any] = field(default_factory=dict)


def cmd_phases(cfg: ExperimentConfig) -> Table:
    xname, pts = sweep_points(cfg)
    columns = [xname] + [f"phi_{lab}_rad" for lab in PATH_LABELS] + ["delta_phi_rad"]
    extra = {"large_T": [], "exact": ["exact"], "quadrature": ["quadrature"], "all": ["exact", "quadrature"]}[
        cfg.phase_method
    ]
    for method in extra:
        columns += [f"phi_{lab}_{method}_rad" for lab in PATH_LABELS]
    if cfg.phase_method == "all":
        columns.append("max_rel_diff_exact_quadrature")
    rows = []
    for pt in pts:
        row = [pt.x, *pt.phases.as_array(), pt.phases.entangling_phase]
        if extra:
            g = cfg.si_geometry(pt.T) if cfg.mode == "si" else unit_geometry(pt.theta, cfg.r, cfg.tau_over_T)
            computed = {}
            if "exact" in extra:
                computed["exact"] = phases_exact(g).as_array()
            if "quadrature" in extra:
                computed["quadrature"] = phases_quadrature(g, cfg.quadrature_steps).as_array()
            for method in extra:
                row += list(computed[method])
            if cfg.phase_method == "all":
                ex, qu = computed["exact"], computed["quadrature"]
                rel = np.abs(ex - qu) / np.where(ex == 0, 1.0, np.abs(ex))
                row.append(float(rel.max()))
        rows.append(row)
    return Table("phases", columns, rows, {"phase_method": cfg.phase_method})


def _coherences(cfg: ExperimentConfig, default):
    return cfg.coherence if cfg.coherence is not None else default


def cmd_fig2(cfg: ExperimentConfig) -> Table:
    cs = _coherences(cfg, [(1.0, 1.0), (0.6, 0.6), (SQRT2_M1, SQRT2_M1)])
    xname, pts = sweep_points(cfg)
    rows = [[pt.x] + _negativities(cfg, cs, pt.phases, None) for pt in pts]
    return Table("fig2", [xname] + [f"N_{_c_label(c)}" for c in cs], rows)


def cmd_fig4(cfg: ExperimentConfig) -> Table:
    cs = _coherences(cfg, [(1.0, 1.0), (0.6, 0.6), (SQRT2_M1, SQRT2_M1)])
    xname, pts = sweep_points(cfg)
    wname = "W_expectation_" + cfg.witness_mode.replace("-", "_")
    rows = [
        [pt.x, _witness(cfg, cs, pt.phases, None)] + _negativities(cfg, cs, pt.phases, None)
        for pt in pts
    ]
    return Table("fig4", [xname, wname] + [f"N_{_c_label(c)}" for c in cs], rows, {"witness_mode": cfg.witness_mode})


def cmd_fig5(cfg: ExperimentConfig) -> Table:
    cs = _coherences(cfg, [(1.0, 1.0), (0.6, 0.6)])
    xname, pts = sweep_points(cfg)
    columns = [xname] + [f"N_{_c_label(c)}_{_g_label(g)}" for c in cs for g in cfg.damping]
    rows = []
    for pt in pts:
        per_gamma = [_negativities(cfg, cs, pt.phases, damping_at(cfg, g, pt)) for g in cfg.damping]
        rows.append([pt.x] + [per_gamma[j][i] for i in range(len(cs)) for j in range(len(cfg.damping))])
    return Table("fig5", columns, rows, {"gamma_unit": cfg.gamma_unit if cfg.mode != "si" else "1/s"})


def cmd_fig6(cfg: ExperimentConfig) -> Table:
    cs = _coherences(cfg, [(1.0, 1.0), (0.6, 0.6)])
    xname, pts = sweep_points(cfg)
    wname = "W_" + cfg.witness_mode.replace("-", "_")
    columns = [xname] + [f"{wname}_{_g_label(g)}" for g in cfg.damping]
    rows = [[pt.x] + [_witness(cfg, cs, pt.phases, damping_at(cfg, g, pt)) for g in cfg.damping] for pt in pts]
    return Table(
        "fig6",
        columns,
        rows,
        {"gamma_unit": cfg.gamma_unit if cfg.mode != "si" else "1/s", "witness_mode": cfg.witness_mode},
    )


def cmd_witness_check(cfg: ExperimentConfig) -> Table:
    """Sample separable channels and confirm the witness never goes negative on them."""
    c = _coherences(cfg, [(1.0, 1.0)])[0]
    report: dict[str, Any] = {
        "samples": cfg.samples,
        "seed": cfg.seed,
        "mixtures": cfg.mixtures,
        "c1": c[0],
        "c2": c[1],
    }
    try:
        w = canonical_witness(CoherencePair(*c))
    except ZeroCoherence as exc:
        report["status"] = f"ZeroCoherence: {exc}"
        return Table("witness-check", ["quantity", "value"], [], {"report": report})
    rho_in = initial_state(CoherencePair(*c))
    values = np.empty(cfg.samples)
    for i in range(cfg.samples):
        f = sample_separable_channel([cfg.seed, i], cfg.mixtures)
        values[i] = witness_expectation_trace(w, apply_channel(f, rho_in, check=False))
    ed = witness_eigendata(gravity_channel(REFERENCE_PHASES))
    tr_ew = complex(np.trace(gravity_channel(REFERENCE_PHASES).matrix @ witness_matrix_w(ed)))
    report.update(
        {
            "min_expectation": float(values.min()),
            "violations": int(np.sum(values < -1e-10)),
            "reference_delta_phi_rad": REFERENCE_PHASES.entangling_phase,
            "nu_numeric": ed.nu,
            "nu_formula": gravity_nu(REFERENCE_PHASES),
            "trace_E_W": tr_ew.real,
            "trace_E_W_minus_nu": tr_ew.real - ed.nu,
        }
    )
    report["status"] = "ok" if report["violations"] == 0 else "violation"
    return Table("witness-check", ["quantity", "value"], [], {"report": report})


COMMANDS = {
    "phases": cmd_phases,
    "fig2": cmd_fig2,
    "fig4": cmd_fig4,
    "fig5": cmd_fig5,
    "fig6": cmd_fig6,
    "witness-check": cmd_witness_check,
}


# -- output -----------------------------------------------------------------


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return "0" if x == 0 else format(x, ".17g")
    return str(x)


def render(table: Table, fmt: str, cfg: ExperimentConfig) -> str:
    if fmt == "json":
        payload: dict[str, Any] = {"command": table.command, "version": __version__}
        if table.command == "witness-check":
            payload["report"] = table.meta["report"]
        else:
            payload["columns"] = table.columns
            payload["rows"] = [[0.0 if v == 0 else float(v) for v in row] for row in table.rows]
            payload["meta"] = table.meta
        payload["config"] = _config_dict(cfg)
        return json.dumps(payload, sort_keys=True, indent=1) + "\n"
    buf = io.StringIO()
    if table.command == "witness-check":
        buf.write("quantity,value\n")
        for key, value in table.meta["report"].items():
            text = _fmt(value)
            buf.write(f'{key},"{text}"\n' if "," in text else f"{key},{text}\n")
        return buf.getvalue()
    buf.write(",".join(table.columns) + "\n")
    for row in table.rows:
        buf.write(",".join(_fmt(v) for v in row) + "\n")
    return buf.getvalue()


def _config_dict(cfg: ExperimentConfig) -> dict[str, Any]:
    out = {}
    for f in fields(cfg):
        if f.name in ("out", "format"):
            continue
        value = getattr(cfg, f.name)
        if isinstance(value, tuple):
            value = list(value)
        elif isinstance(value, list):
            value = [list(v) if isinstance(v, tuple) else v for v in value]
        out[f.name] = value
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gravwitness", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="flat JSON config file; flags override its values")
        p.add_argument("--out", help="output path (default: stdout)")
        p.add_argument("--format", choices=["csv", "json"])
        p.add_argument("--seed", type=int)
        p.add_argument("--mode", dest="witness_mode", choices=["trace", "literal"])
        p.add_argument("--r", type=float, help="L/D ratio (default 0.5)")
        p.add_argument("--points", type=int, help="number of sweep points (default 1000)")
        p.add_argument("--t-max", type=float, help="sweep end in panel units (dimensionless mode)")
        p.add_argument("--samples", type=int, help="separable channels sampled by witness-check")
        p.add_argument("--gamma-unit", choices=GAMMA_UNITS)
        p.add_argument("--phase-method", choices=["large_T", "exact", "quadrature", "all"])
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    overrides = {
        "out": args.out,
        "format": args.format,
        "seed": args.seed,
        "witness_mode": args.witness_mode,
        "r": args.r,
        "samples": args.samples,
        "gamma_unit": args.gamma_unit,
        "phase_method": args.phase_method,
    }
    try:
        cfg = load_config(args.config, overrides)
        if args.points is not None or args.t_max is not None:
            start, stop, n = cfg.T_range
            cfg.T_range = (start, stop if args.t_max is None else args.t_max, n if args.points is None else args.points)
            cfg.validate()
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        table = COMMANDS[args.command](cfg)
    except (InvariantViolation, InvalidChannel, InvalidState) as exc:
        print(f"numerical invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT

    text = render(table, cfg.format, cfg)
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)

    if table.command == "witness-check":
        status = table.meta["report"]["status"]
        if status.startswith("ZeroCoherence"):
            print(status, file=sys.stderr)
            return EXIT_CONFIG
        if status != "ok":
            return EXIT_INVARIANT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
