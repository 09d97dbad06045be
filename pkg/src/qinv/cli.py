"""Command-line interface: verify / solve / phases / sweep.

Configuration is one flat JSON object; outputs are byte-deterministic CSV or
JSON data files (floats printed with 17 significant digits so they
round-trip exactly), plus a `<out>.meta.json` sidecar carrying the tool
version, the config hash, the wall time and the data checksum.  Exit codes:
0 success, 2 domain/regime failure, 64 configuration error, 70 internal
numeric failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .algebra import (
    AlgebraKind,
    Representation,
    check_commutation,
    k0_eigenbasis,
    su11_boson_generators,
    su2_generators,
)
from .dynamics import extract_phase, propagate, stability_horizon
from .errors import ConfigError, QinvError, RegimeError
from .invariant import (
    build_frame,
    check_invariant_equation,
    check_pseudo_hermiticity,
    invariant_eigenframe,
    similarity_identities_residual,
    solve_epsilon,
    auxiliary_residual,
    build_R,
)
from .matkit import adjoint, herm_eig, max_abs
from .model import ModelParams, check_pt_symmetry
from .phases import (
    breaking_diagram,
    lr_phase,
    phase_decompose,
    sin_sq_half,
    sinh_sq_half,
)
from .tolerances import TOL

EXIT_OK = 0
EXIT_REGIME = 2
EXIT_CONFIG = 64
EXIT_NUMERIC = 70

_ALLOWED_KEYS = {
    "algebra", "j", "fock_dim", "Omega", "G", "omega", "t_final", "steps",
    "integrator", "initial_n", "output_path", "format", "grid",
}


@dataclass(frozen=True)
class RunConfig:
    """Validated run configuration (flat JSON keys)."""

    algebra: AlgebraKind
    omega_drive: float
    coupling: float
    phase_rate: float
    j: float | None
    fock_dim: int | None
    t_final: float
    steps: int
    integrator: str
    initial_n: int
    output_path: str | None
    format: str
    grid: dict | None
    raw: dict

    @property
    def params(self) -> ModelParams:
        return ModelParams(self.omega_drive, self.coupling, self.phase_rate)

    def representation(self) -> Representation:
        if self.algebra is AlgebraKind.SU2:
            return su2_generators(self.j)
        return su11_boson_generators(self.fock_dim)


def _require_number(cfg: dict, key: str) -> float:
    if key not in cfg:
        raise ConfigError(key, "missing")
    v = cfg[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
        raise ConfigError(key, f"expected a finite number, got {v!r}")
    return float(v)


def load_config(path: str) -> RunConfig:
    """Read and validate a flat JSON configuration file."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError("config", f"cannot read {path}: {exc}") from exc
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError("config", f"invalid JSON: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ConfigError("config", "top level must be a JSON object")
    for key in cfg:
        if key not in _ALLOWED_KEYS:
            raise ConfigError(key, "unknown field")

    algebra_raw = cfg.get("algebra")
    if algebra_raw not in ("su2", "su11"):
        raise ConfigError("algebra", f"expected 'su2' or 'su11', got {algebra_raw!r}")
    algebra = AlgebraKind(algebra_raw)

    omega_drive = _require_number(cfg, "Omega")
    coupling = _require_number(cfg, "G")
    phase_rate = _require_number(cfg, "omega")

    j = None
    fock_dim = None
    if algebra is AlgebraKind.SU2:
        if "fock_dim" in cfg:
            raise ConfigError("fock_dim", "not allowed for algebra 'su2'")
        j = _require_number(cfg, "j")
        if j <= 0 or abs(2 * j - round(2 * j)) > 1e-12:
            raise ConfigError("j", f"expected a positive half-integer, got {j}")
    else:
        if "j" in cfg:
            raise ConfigError("j", "not allowed for algebra 'su11'")
        fd = cfg.get("fock_dim", 48)
        if isinstance(fd, bool) or not isinstance(fd, int) or fd < 6:
            raise ConfigError("fock_dim", f"expected an integer >= 6, got {fd!r}")
        fock_dim = fd

    if "t_final" in cfg:
        t_final = _require_number(cfg, "t_final")
    elif phase_rate != 0.0:
        t_final = 2.0 * math.pi / abs(phase_rate)  # one driving period
    else:
        raise ConfigError("t_final", "required when omega = 0")
    if t_final <= 0:
        raise ConfigError("t_final", f"must be > 0, got {t_final}")

    steps = cfg.get("steps", 4096)
    if isinstance(steps, bool) or not isinstance(steps, int) or steps < 16:
        raise ConfigError("steps", f"expected an integer >= 16, got {steps!r}")

    integrator = cfg.get("integrator", "magnus2")
    if integrator not in ("rk4", "magnus2"):
        raise ConfigError("integrator", f"expected 'rk4' or 'magnus2', got {integrator!r}")

    dim = int(round(2 * j)) + 1 if j is not None else fock_dim
    initial_n = cfg.get("initial_n", 0)
    if isinstance(initial_n, bool) or not isinstance(initial_n, int) or not 0 <= initial_n < dim:
        raise ConfigError("initial_n", f"expected an integer in [0, {dim}), got {initial_n!r}")

    fmt = cfg.get("format", "csv")
    if fmt not in ("csv", "json"):
        raise ConfigError("format", f"expected 'csv' or 'json', got {fmt!r}")

    grid = cfg.get("grid")
    if grid is not None:
        if not isinstance(grid, dict) or not grid:
            raise ConfigError("grid", "expected a non-empty object of axis specs")
        for axis, axis_range in grid.items():
            if axis not in ("Omega", "G", "omega"):
                raise ConfigError("grid", f"unknown axis {axis!r}")
            if not isinstance(axis_range, dict) or set(axis_range) != {"min", "max", "count"}:
                raise ConfigError("grid", f"axis {axis!r} needs exactly min/max/count")
            if (isinstance(axis_range["count"], bool)
                    or not isinstance(axis_range["count"], int)
                    or axis_range["count"] < 1):
                raise ConfigError("grid", f"axis {axis!r} count must be a positive integer")

    return RunConfig(
        algebra=algebra,
        omega_drive=omega_drive,
        coupling=coupling,
        phase_rate=phase_rate,
        j=j,
        fock_dim=fock_dim,
        t_final=t_final,
        steps=steps,
        integrator=integrator,
        initial_n=initial_n,
        output_path=cfg.get("output_path"),
        format=fmt,
        grid=grid,
        raw=cfg,
    )


# ---------------------------------------------------------------------------
# deterministic serialization


def format_value(x) -> str:
    """Canonical text for one data cell: 17-significant-digit floats, '' for nan."""
    if isinstance(x, str):
        return x
    xf = float(x)
    if math.isnan(xf):
        return ""
    return f"{xf:.17g}"


def render_csv(header: list[str], rows: list[list]) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(format_value(v) for v in row))
    return "\n".join(lines) + "\n"


def render_json_columns(header: list[str], rows: list[list]) -> str:
    cols: dict[str, list] = {name: [] for name in header}
    for row in rows:
        for name, v in zip(header, row):
            if isinstance(v, str):
                cols[name].append(v)
            else:
                vf = float(v)
                cols[name].append(None if math.isnan(vf) else vf)
    return json.dumps({"columns": cols}, separators=(",", ":")) + "\n"


def _sha256_text(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


def roundtrip_checksum(path: str) -> str:
    """Parse a data file, re-render it canonically and hash the result.

    Equality with the sidecar's data_checksum proves every float survives a
    text -> float -> text round trip.
    """
    text = Path(path).read_text()
    if path.endswith(".json"):
        obj = json.loads(text)
        return _sha256_text(json.dumps(obj, separators=(",", ":")) + "\n")
    lines = text.splitlines()
    header = lines[0].split(",")
    rows = []
    for line in lines[1:]:
        row = []
        for cell in line.split(","):
            if cell == "":
                row.append(math.nan)
            else:
                try:
                    row.append(float(cell))
                except ValueError:
                    row.append(cell)
        rows.append(row)
    return _sha256_text(render_csv(header, rows))


def write_output(
    out_path: str,
    fmt: str,
    header: list[str],
    rows: list[list],
    cfg: RunConfig,
    command: str,
    wall_time: float,
) -> None:
    text = render_csv(header, rows) if fmt == "csv" else render_json_columns(header, rows)
    Path(out_path).write_text(text)
    meta = {
        "tool": "qinv",
        "version": __version__,
        "command": command,
        "format": fmt,
        "config_sha256": _sha256_text(json.dumps(cfg.raw, sort_keys=True, separators=(",", ":"))),
        "data_checksum": _sha256_text(text),
        "wall_time_s": wall_time,
    }
    Path(out_path + ".meta.json").write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")


# ---------------------------------------------------------------------------
# verify


def _verify_checks(cfg: RunConfig) -> dict:
    rep = cfg.representation()
    p = cfg.params
    checks = []

    def add(name: str, value: float, tolerance: float, passed=None):
        ok = bool(value <= tolerance) if passed is None else bool(passed)
        checks.append({
            "name": name,
            "value": float(value),
            "tolerance": float(tolerance),
            "passed": ok,
        })

    com = check_commutation(rep)
    add("commutation_k0_kplus", com.residual_k0_kplus, com.tolerance)
    add("commutation_k0_kminus", com.residual_k0_kminus, com.tolerance)
    add("commutation_ladder_interior", com.residual_ladder, com.tolerance)

    eps = solve_epsilon(rep.kind, p)  # raises RegimeError when broken
    add("auxiliary_condition", auxiliary_residual(rep.kind, p, eps), TOL.aux_condition)

    period = p.period if p.phase_rate != 0.0 else cfg.t_final
    t_samples = [0.0, 0.37 * period, 0.71 * period]

    inv_eq_h = 1e-5 if rep.kind is AlgebraKind.SU2 else 5e-4
    worst = {
        "r_hermitian": 0.0, "r_inverse_roundtrip": 0.0, "pseudo_hermiticity": 0.0,
        "dyson_reduction": 0.0, "invariant_equation": 0.0, "eigenframe_residual": 0.0,
        "eta_orthonormality": 0.0, "similarity_kplus": 0.0, "similarity_kminus": 0.0,
        "similarity_k0": 0.0, "similarity_time_derivative": 0.0,
    }
    eta_min = math.inf
    for t in t_samples:
        frame = build_frame(rep, p, t, eps=eps)
        worst["r_hermitian"] = max(
            worst["r_hermitian"], max_abs(frame.r_matrix - adjoint(frame.r_matrix)))
        worst["r_inverse_roundtrip"] = max(
            worst["r_inverse_roundtrip"],
            max_abs(frame.r_matrix @ frame.r_inverse - np.eye(rep.dim)))
        ph = check_pseudo_hermiticity(rep, frame)
        worst["pseudo_hermiticity"] = max(worst["pseudo_hermiticity"], ph.pseudo_residual)
        worst["dyson_reduction"] = max(worst["dyson_reduction"], ph.dyson_residual)
        worst["invariant_equation"] = max(
            worst["invariant_equation"],
            check_invariant_equation(rep, p, eps, t, inv_eq_h).residual)
        sim = similarity_identities_residual(rep, p, eps, t)
        for key, val in zip(
            ("similarity_kplus", "similarity_kminus", "similarity_k0",
             "similarity_time_derivative"), sim):
            worst[key] = max(worst[key], float(val))
        ef = invariant_eigenframe(rep, p, eps, t)
        worst["eigenframe_residual"] = max(
            worst["eigenframe_residual"], float(ef.eigen_residuals.max()))
        worst["eta_orthonormality"] = max(worst["eta_orthonormality"], ef.gram_residual)
        eta_min = min(eta_min, float(herm_eig(frame.metric_eta)[0][0]))

    add("r_hermitian", worst["r_hermitian"], TOL.r_hermitian)
    add("r_inverse_roundtrip", worst["r_inverse_roundtrip"], TOL.r_inverse)
    add("pseudo_hermiticity", worst["pseudo_hermiticity"], TOL.pseudo_hermiticity)
    add("dyson_reduction", worst["dyson_reduction"], TOL.dyson_reduction)
    add("invariant_equation", worst["invariant_equation"], TOL.invariant_equation)
    for key in ("similarity_kplus", "similarity_kminus", "similarity_k0",
                "similarity_time_derivative"):
        add(key, worst[key], TOL.similarity)
    add("eigenframe_residual", worst["eigenframe_residual"], TOL.eigen_residual)
    add("eta_orthonormality", worst["eta_orthonormality"], TOL.gram)
    add("metric_positive_definite", -eta_min, 0.0, passed=eta_min > 0.0)

    pt_times = np.linspace(0.0, period, 8)
    pt = check_pt_symmetry(rep, p, pt_times)
    if rep.kind is AlgebraKind.SU11:
        # the boson realization must pass the parity-conjugation test
        add("pt_symmetric", pt.max_residual, 1e-12)
    elif p.omega_drive == 0.0:
        add("pt_symmetric", pt.max_residual, TOL.pt_verdict)
    else:
        # expected broken: residual must sit at the 2|Omega| ||K0|| scale
        scale = 2.0 * abs(p.omega_drive) * max_abs(rep.k0)
        add("pt_asymmetry_scale", pt.max_residual, scale,
            passed=pt.max_residual > 0.5 * scale)

    report = {
        "algebra": rep.kind.value,
        "params": {"Omega": p.omega_drive, "G": p.coupling, "omega": p.phase_rate},
        "dimension": rep.dim,
        "regime": "unbroken",
        "epsilon": eps,
        "sinh_sq_half": sinh_sq_half(rep.kind, p),
        "pt_checker": pt.checker,
        "pt_max_residual": pt.max_residual,
        "checks": checks,
        "all_passed": all(c["passed"] for c in checks),
    }
    if rep.kind is AlgebraKind.SU11:
        report["sin_sq_half"] = sin_sq_half(p)
    return report


def run_verify(cfg: RunConfig, out_path: str | None = None) -> int:
    try:
        report = _verify_checks(cfg)
    except RegimeError as exc:
        failure = {
            "algebra": cfg.algebra.value,
            "params": {"Omega": cfg.omega_drive, "G": cfg.coupling, "omega": cfg.phase_rate},
            "regime": "broken",
            "error": str(exc),
            "all_passed": False,
        }
        text = json.dumps(failure, indent=2, sort_keys=True) + "\n"
        if out_path:
            Path(out_path).write_text(text)
        sys.stdout.write(text)
        return EXIT_REGIME
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if out_path:
        Path(out_path).write_text(text)
    sys.stdout.write(text)
    return EXIT_OK if report["all_passed"] else EXIT_NUMERIC


# ---------------------------------------------------------------------------
# solve


def run_solve(cfg: RunConfig, out_path: str, fmt: str) -> int:
    start = time.perf_counter()
    rep = cfg.representation()
    p = cfg.params
    eps = solve_epsilon(rep.kind, p)
    lam = float(k0_eigenbasis(rep)[cfg.initial_n][0])
    t_grid = np.linspace(0.0, cfg.t_final, cfg.steps + 1)
    psi0 = build_R(rep, p, eps, 0.0)[:, cfg.initial_n]
    traj = propagate(rep, p, psi0, t_grid, method=cfg.integrator, track_n=cfg.initial_n)
    phase_numeric = extract_phase(traj, rep, p, eps, cfg.initial_n)
    traj = traj.with_phase(phase_numeric)

    header = ["t"]
    for i in range(rep.dim):
        header += [f"re_psi_{i}", f"im_psi_{i}"]
    header += ["eta_norm", "invariant_residual", "phase_numeric", "phase_analytic"]

    rows = []
    for k, t in enumerate(traj.times):
        row = [t]
        for i in range(rep.dim):
            row += [traj.states[k, i].real, traj.states[k, i].imag]
        row += [
            traj.eta_norms[k],
            traj.invariant_eigen_residuals[k],
            phase_numeric[k],
            lr_phase(rep.kind, p, eps, lam, float(t)),
        ]
        rows.append(row)

    write_output(out_path, fmt, header, rows, cfg, "solve", time.perf_counter() - start)
    return EXIT_OK


# ---------------------------------------------------------------------------
# phases


def _arbitration_winner(record) -> str:
    if record.generic_matches_numeric is None:
        return "none"
    if record.generic_matches_numeric and not record.specialized_matches_numeric:
        return "generic"
    if record.specialized_matches_numeric and not record.generic_matches_numeric:
        return "single_coupling"
    if record.generic_matches_numeric and record.specialized_matches_numeric:
        return "both"
    return "neither"


def run_phases(cfg: RunConfig, out_path: str, fmt: str) -> int:
    start = time.perf_counter()
    rep = cfg.representation()
    p = cfg.params
    eps = solve_epsilon(rep.kind, p)
    t_table = p.period if p.phase_rate != 0.0 else cfg.t_final

    # one numeric arbitration run, within the truncation's stability horizon
    t_arb = min(t_table, stability_horizon(rep, p))
    t_grid = np.linspace(0.0, t_arb, cfg.steps + 1)
    psi0 = build_R(rep, p, eps, 0.0)[:, cfg.initial_n]
    traj = propagate(rep, p, psi0, t_grid, method=cfg.integrator)
    numeric_phase = float(extract_phase(traj, rep, p, eps, cfg.initial_n)[-1])
    arb_report = phase_decompose(rep, p, eps, cfg.initial_n, t_arb, numeric_phase=numeric_phase)
    winner = _arbitration_winner(arb_report.arbitration)

    frame = invariant_eigenframe(rep, p, eps, 0.0)
    header = ["n", "lambda_n", "lr_total", "dynamic", "geometric",
              "berry_exact", "berry_adiabatic", "arbitration_winner"]
    rows = []
    for idx in frame.indices:
        rpt = phase_decompose(rep, p, eps, int(idx), t_table)
        rows.append([
            int(idx), rpt.lambda_n, rpt.lr_total, rpt.dynamic_part, rpt.geometric_part,
            rpt.berry_exact, rpt.berry_adiabatic, winner,
        ])

    write_output(out_path, fmt, header, rows, cfg, "phases", time.perf_counter() - start)
    return EXIT_OK


# ---------------------------------------------------------------------------
# sweep


def _axis_values(cfg: RunConfig, axis: str) -> list[float]:
    base = {"Omega": cfg.omega_drive, "G": cfg.coupling, "omega": cfg.phase_rate}
    if cfg.grid and axis in cfg.grid:
        axis_range = cfg.grid[axis]
        return [float(v) for v in
                np.linspace(axis_range["min"], axis_range["max"], axis_range["count"])]
    return [base[axis]]


def run_sweep(cfg: RunConfig, out_path: str, fmt: str, threads: int) -> int:
    start = time.perf_counter()
    if cfg.grid is None:
        raise ConfigError("grid", "missing (required by the sweep command)")
    rep = cfg.representation()
    lam = float(k0_eigenbasis(rep)[cfg.initial_n][0])
    omegas = _axis_values(cfg, "Omega")
    couplings = _axis_values(cfg, "G")
    rates = _axis_values(cfg, "omega")

    tuples = [(o, g, w) for o in omegas for g in couplings for w in rates]

    def point(args):
        o, g, w = args
        return breaking_diagram(cfg.algebra, [o], [g], [w], lambda_n=lam)[0]

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            points = list(pool.map(point, tuples))
    else:
        points = [point(t) for t in tuples]

    header = ["Omega", "G", "omega", "regime", "epsilon", "sinh_sq_half", "berry_exact"]
    rows = [
        [pt.omega_drive, pt.coupling, pt.phase_rate, pt.regime,
         pt.epsilon, pt.sinh_sq_half, pt.berry_exact]
        for pt in points
    ]
    write_output(out_path, fmt, header, rows, cfg, "sweep", time.perf_counter() - start)
    return EXIT_OK


# ---------------------------------------------------------------------------
# entry points


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError("argv", message)


def main(argv=None) -> int:
    parser = _Parser(prog="qinv", description=__doc__)
    parser.add_argument("--version", action="version", version=f"qinv {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("verify", "solve", "phases", "sweep"):
        s = sub.add_parser(name)
        s.add_argument("--config", required=True, help="path to the JSON run configuration")
        s.add_argument("--out", default=None, help="output data file path")
        s.add_argument("--format", default=None, choices=("csv", "json"))
        s.add_argument("--threads", type=int, default=1)

    try:
        args = parser.parse_args(argv)
        cfg = load_config(args.config)
        fmt = args.format or cfg.format
        out = args.out or cfg.output_path
        if args.command == "verify":
            return run_verify(cfg, out)
        if out is None:
            raise ConfigError("output_path", "missing (set output_path or pass --out)")
        if args.command == "solve":
            return run_solve(cfg, out, fmt)
        if args.command == "phases":
            return run_phases(cfg, out, fmt)
        return run_sweep(cfg, out, fmt, max(1, args.threads))
    except ConfigError as exc:
        sys.stderr.write(f"qinv: {exc}\n")
        return EXIT_CONFIG
    except RegimeError as exc:
        sys.stderr.write(json.dumps({"regime": "broken", "error": str(exc)}) + "\n")
        return EXIT_REGIME
    except QinvError as exc:
        sys.stderr.write(f"qinv: numeric failure: {exc}\n")
        return EXIT_NUMERIC


def console_main() -> None:
    sys.exit(main())
