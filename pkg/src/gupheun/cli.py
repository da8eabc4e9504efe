"""Command-line front end: scans, spectra, wavefunctions, CSV/JSON emission.

Commands
--------
scan          sample the spectral function over an omega window
roots         refine scan brackets into exact eigenvalues
spectrum      closed-form low-energy tower
wavefunction  sample R(xi) at a trial energy
compare       exact eigenvalues vs the closed-form tower
critical      bisect for the critical coupling

Exit codes: 0 success, 2 invalid configuration, 3 numerical failure.  The
last stdout line is a machine-parsable `key=value` summary.  The default
tolerance 1e-8 can be overridden by the GUP_HEUN_TOL environment variable,
by a JSON config file (--config), or by --tol (highest precedence).
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from dataclasses import dataclass, fields

from .heun import CouplingConfig, EnergyPoint, HeunEvaluationError
from . import radial
from .radial import default_xi_grid, wavefunction
from .specfun import GammaPoleError, NonConvergenceError
from . import spectral
from .spectral import (
    NoTransitionError,
    SpectrumResult,
    UnitSystem,
    closed_form_spectrum,
    compare_spectra,
    critical_coupling,
    energy_from_omega,
    find_roots,
    natural_units_for,
    spectral_scan,
    to_physical_energy,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
DEFAULT_TOL = 1e-8

COMMANDS = ("scan", "roots", "spectrum", "wavefunction", "compare", "critical")


@dataclass
class RunConfig:
    """One resolved invocation; field defaults are the documented CLI defaults."""

    command: str
    kappa: float = 1.0
    ell: int = 0
    omega_min: float = spectral.DEFAULT_OMEGA_MIN
    omega_max: float = spectral.DEFAULT_OMEGA_MAX
    points: int = spectral.DEFAULT_SCAN_POINTS
    tol: float = DEFAULT_TOL
    validity: float = spectral.DEFAULT_VALIDITY
    output_path: str | None = None
    format: str = "csv"
    omega: float | None = None
    n_max: int = 20
    kappa_lo: float = 0.05
    kappa_hi: float = 0.08
    omega_floor: float = spectral.CRITICAL_OMEGA_FLOOR
    units_file: str | None = None
    gnuplot: bool = False
    point_scale: float = 1.0

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if self.format not in ("csv", "json"):
            raise ValueError(f"format must be csv or json, got {self.format!r}")
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if self.points < 2:
            raise ValueError("points must be at least 2")


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _load_units(path: str) -> UnitSystem:
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    try:
        return UnitSystem(mass=raw["mass"], hbar=raw["hbar"], beta=raw["beta"],
                          alpha_coupling=raw["alpha_coupling"])
    except KeyError as exc:
        raise ValueError(f"units file {path} missing key {exc}") from exc


def _write_text(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _write_csv(path: str, header: list[str], rows: list[list[str]]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _write_json(path: str, payload: dict) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def spectrum_result_to_payload(result: SpectrumResult) -> dict:
    units = natural_units_for(result.kappa)
    return {
        "method": result.method,
        "kappa": result.kappa,
        "ell": result.ell,
        "omegas": list(result.omegas),
        "energy_natural_units": [energy_from_omega(w, units) for w in result.omegas],
    }


def spectrum_result_from_json(text: str) -> SpectrumResult:
    raw = json.loads(text)
    return SpectrumResult(method=raw["method"], omegas=tuple(raw["omegas"]),
                          kappa=raw["kappa"], ell=raw["ell"])


def _spectrum_rows(result: SpectrumResult, units: UnitSystem | None) -> tuple[list[str], list[list[str]]]:
    natural = natural_units_for(result.kappa)
    header = ["n", "omega", "energy_natural_units", "method"]
    si = None
    if units is not None:
        si = to_physical_energy(result, units)
        header.append("energy_si")
    rows = []
    for i, w in enumerate(result.omegas):
        row = [str(i + 1), _fmt(w), _fmt(energy_from_omega(w, natural)), result.method]
        if si is not None:
            row.append(_fmt(si[i]))
        rows.append(row)
    return header, rows


_GNUPLOT_BODY = {
    "scan": ('set logscale x\nset xlabel "omega"\nset ylabel "Hc"\n'
             'plot DATA using 1:2 with lines title "spectral function"\n'),
    "wavefunction": ('set xlabel "xi"\nset ylabel "R"\n'
                     'plot DATA using 1:2 with lines title "R(xi)"\n'),
    "roots": ('set logscale y\nset xlabel "n"\nset ylabel "omega"\n'
              'plot DATA using 1:2 with points pt 7 title "eigenvalues"\n'),
    "spectrum": ('set logscale y\nset xlabel "n"\nset ylabel "omega"\n'
                 'plot DATA using 1:2 with points pt 7 title "closed form"\n'),
    "compare": ('set logscale y\nset xlabel "n"\nset ylabel "omega"\n'
                'plot DATA using 1:2 with points pt 7 title "exact", '
                'DATA using 1:3 with points pt 5 title "closed form"\n'),
}


def _write_gnuplot(cfg: RunConfig) -> str | None:
    if not (cfg.gnuplot and cfg.output_path and cfg.format == "csv"):
        return None
    body = _GNUPLOT_BODY.get(cfg.command)
    if body is None:
        return None
    script = cfg.output_path + ".gp"
    text = (f'DATA = "{cfg.output_path}"\n'
            "set datafile separator \",\"\nset key autotitle columnhead\n" + body)
    _write_text(script, text)
    return script


def _summary(pairs: list[tuple[str, str]]) -> str:
    return " ".join(f"{k}={v}" for k, v in pairs)


def _quote(text: str) -> str:
    return '"' + text + '"'


def _run_scan(cfg: RunConfig) -> str:
    coupling = CouplingConfig(kappa=cfg.kappa, ell=cfg.ell)
    scan = spectral_scan(coupling, cfg.omega_min, cfg.omega_max, cfg.points,
                         tol=cfg.tol, point_scale=cfg.point_scale)
    left_endpoints = {i for i, _ in scan.brackets}
    if cfg.output_path:
        if cfg.format == "csv":
            rows = [[_fmt(w), _fmt(v), str(int(i in left_endpoints))]
                    for i, (w, v) in enumerate(zip(scan.omegas, scan.values))]
            _write_csv(cfg.output_path, ["omega", "hc_value", "bracket_flag"], rows)
        else:
            _write_json(cfg.output_path, {
                "command": "scan", "kappa": cfg.kappa, "ell": cfg.ell,
                "omegas": [float(w) for w in scan.omegas],
                "values": [float(v) for v in scan.values],
                "brackets": [[int(i), int(j)] for i, j in scan.brackets],
            })
    n = len(scan.brackets)
    note = "no bound states" if n == 0 else f"{n} sign-change bracket(s)"
    return _summary([("command", "scan"), ("kappa", _fmt(cfg.kappa)),
                     ("ell", str(cfg.ell)), ("points", str(cfg.points)),
                     ("brackets", str(n)), ("summary", _quote(note))])


def _run_roots(cfg: RunConfig) -> str:
    coupling = CouplingConfig(kappa=cfg.kappa, ell=cfg.ell)
    scan = spectral_scan(coupling, cfg.omega_min, cfg.omega_max, cfg.points,
                         tol=cfg.tol, point_scale=cfg.point_scale)
    result = find_roots(scan, tol=min(cfg.tol, spectral.DEFAULT_ROOT_TOL))
    units = _load_units(cfg.units_file) if cfg.units_file else None
    if cfg.output_path:
        if cfg.format == "csv":
            header, rows = _spectrum_rows(result, units)
            _write_csv(cfg.output_path, header, rows)
        else:
            _write_json(cfg.output_path, spectrum_result_to_payload(result))
    n = len(result)
    pairs = [("command", "roots"), ("kappa", _fmt(cfg.kappa)), ("ell", str(cfg.ell)),
             ("roots", str(n))]
    if n:
        pairs.append(("omega_1", _fmt(result.omegas[0])))
    note = "no bound states" if n == 0 else f"{n} bound state(s)"
    pairs.append(("summary", _quote(note)))
    return _summary(pairs)


def _run_spectrum(cfg: RunConfig) -> str:
    coupling = CouplingConfig(kappa=cfg.kappa, ell=cfg.ell)
    result = closed_form_spectrum(coupling, n_max=cfg.n_max, validity=cfg.validity)
    units = _load_units(cfg.units_file) if cfg.units_file else None
    if cfg.output_path:
        if cfg.format == "csv":
            header, rows = _spectrum_rows(result, units)
            _write_csv(cfg.output_path, header, rows)
        else:
            _write_json(cfg.output_path, spectrum_result_to_payload(result))
    n = len(result)
    note = "no bound states" if n == 0 else f"{n} closed-form level(s)"
    return _summary([("command", "spectrum"), ("kappa", _fmt(cfg.kappa)),
                     ("ell", str(cfg.ell)), ("levels", str(n)),
                     ("summary", _quote(note))])


def _run_wavefunction(cfg: RunConfig) -> str:
    if cfg.omega is None:
        raise ValueError("wavefunction requires --omega")
    coupling = CouplingConfig(kappa=cfg.kappa, ell=cfg.ell)
    ep = EnergyPoint.from_omega(cfg.omega)
    grid = default_xi_grid(coupling, ep, n=cfg.points)
    profile = wavefunction(coupling, ep, grid)
    flag = profile.non_decaying
    if cfg.output_path:
        if cfg.format == "csv":
            rows = [[_fmt(x), _fmt(v)] for x, v in zip(profile.xi, profile.values)]
            _write_csv(cfg.output_path, ["xi", "R"], rows)
        else:
            _write_json(cfg.output_path, {
                "command": "wavefunction", "kappa": cfg.kappa, "ell": cfg.ell,
                "omega": cfg.omega, "xi": [float(x) for x in profile.xi],
                "R": [float(v) for v in profile.values], "non_decaying": flag,
            })
    note = "does not decay toward xi*" if flag else "decays toward xi*"
    return _summary([("command", "wavefunction"), ("kappa", _fmt(cfg.kappa)),
                     ("ell", str(cfg.ell)), ("omega", _fmt(cfg.omega)),
                     ("points", str(cfg.points)),
                     ("non_decaying", "true" if flag else "false"),
                     ("summary", _quote(note))])


def _run_compare(cfg: RunConfig) -> str:
    coupling = CouplingConfig(kappa=cfg.kappa, ell=cfg.ell)
    scan = spectral_scan(coupling, cfg.omega_min, cfg.omega_max, cfg.points,
                         tol=cfg.tol, point_scale=cfg.point_scale)
    exact = find_roots(scan, tol=min(cfg.tol, spectral.DEFAULT_ROOT_TOL))
    approx = closed_form_spectrum(coupling, n_max=cfg.n_max, validity=cfg.validity)
    comparison = compare_spectra(exact, approx)
    if cfg.output_path:
        if cfg.format == "csv":
            rows = [[str(r.n), _fmt(r.omega_exact), _fmt(r.omega_closed_form),
                     _fmt(r.rel_dev)] for r in comparison.rows]
            _write_csv(cfg.output_path,
                       ["n", "omega_exact", "omega_closed_form", "rel_dev"], rows)
        else:
            _write_json(cfg.output_path, {
                "command": "compare", "kappa": cfg.kappa, "ell": cfg.ell,
                "rows": [{"n": r.n, "omega_exact": r.omega_exact,
                          "omega_closed_form": r.omega_closed_form,
                          "rel_dev": r.rel_dev} for r in comparison.rows],
                "ratio_reference": comparison.ratio_reference,
                "ratios_exact": list(comparison.ratios_exact),
                "both_empty": comparison.both_empty,
            })
    note = ("both spectra empty" if comparison.both_empty
            else f"{len(comparison.rows)} matched pair(s)")
    return _summary([("command", "compare"), ("kappa", _fmt(cfg.kappa)),
                     ("ell", str(cfg.ell)), ("pairs", str(len(comparison.rows))),
                     ("agreement_empty", "true" if comparison.both_empty else "false"),
                     ("summary", _quote(note))])


def _run_critical(cfg: RunConfig) -> str:
    kappa_star = critical_coupling(cfg.ell, cfg.kappa_lo, cfg.kappa_hi,
                                   omega_floor=cfg.omega_floor)
    if cfg.output_path:
        if cfg.format == "csv":
            _write_csv(cfg.output_path, ["ell", "kappa_star"],
                       [[str(cfg.ell), _fmt(kappa_star)]])
        else:
            _write_json(cfg.output_path, {"command": "critical", "ell": cfg.ell,
                                          "kappa_star": kappa_star})
    return _summary([("command", "critical"), ("ell", str(cfg.ell)),
                     ("kappa_star", _fmt(kappa_star)),
                     ("summary", _quote("critical coupling located"))])


_RUNNERS = {
    "scan": _run_scan,
    "roots": _run_roots,
    "spectrum": _run_spectrum,
    "wavefunction": _run_wavefunction,
    "compare": _run_compare,
    "critical": _run_critical,
}


def run(cfg: RunConfig) -> int:
    """Execute one command; prints the summary line and returns the exit code."""
    try:
        summary = _RUNNERS[cfg.command](cfg)
    except (HeunEvaluationError, NonConvergenceError, GammaPoleError,
            NoTransitionError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ValueError, OSError) as exc:
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    _write_gnuplot(cfg)
    print(summary)
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gupheun",
        description="Bound states of the inverse-square potential with a minimal length",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, *, needs_window=False):
        p.add_argument("--kappa", type=float, default=None,
                       help="dimensionless coupling m*alpha/(2*hbar^2)")
        p.add_argument("--ell", type=int, default=None, help="orbital quantum number")
        if needs_window:
            p.add_argument("--omega-min", type=float, default=None)
            p.add_argument("--omega-max", type=float, default=None)
            p.add_argument("--points", type=int, default=None)
        p.add_argument("--tol", type=float, default=None,
                       help="evaluation tolerance (default 1e-8, env GUP_HEUN_TOL)")
        p.add_argument("--point-scale", type=float, default=None,
                       help="cutoff radius factor c in r = c*sqrt(-alpha/E)")
        p.add_argument("--output", "-o", dest="output_path", default=None)
        p.add_argument("--format", choices=("csv", "json"), default=None)
        p.add_argument("--units-file", default=None,
                       help="JSON with mass, hbar, beta, alpha_coupling")
        p.add_argument("--gnuplot", action="store_true", default=None)
        p.add_argument("--config", default=None,
                       help="JSON config mirroring the run configuration")

    p_scan = sub.add_parser("scan", help="sample the spectral function")
    add_common(p_scan, needs_window=True)

    p_roots = sub.add_parser("roots", help="refined exact eigenvalues")
    add_common(p_roots, needs_window=True)

    p_spec = sub.add_parser("spectrum", help="closed-form low-energy tower")
    add_common(p_spec)
    p_spec.add_argument("--n-max", type=int, default=None)
    p_spec.add_argument("--validity", type=float, default=None,
                        help="discard closed-form levels at or above this omega")

    p_wf = sub.add_parser("wavefunction", help="sample R(xi) at one omega")
    add_common(p_wf)
    p_wf.add_argument("--omega", type=float, default=None)
    p_wf.add_argument("--points", type=int, default=None)

    p_cmp = sub.add_parser("compare", help="exact roots vs closed form")
    add_common(p_cmp, needs_window=True)
    p_cmp.add_argument("--n-max", type=int, default=None)
    p_cmp.add_argument("--validity", type=float, default=None)

    p_crit = sub.add_parser("critical", help="locate the critical coupling")
    add_common(p_crit)
    p_crit.add_argument("--kappa-lo", type=float, default=None)
    p_crit.add_argument("--kappa-hi", type=float, default=None)
    p_crit.add_argument("--omega-floor", type=float, default=None,
                        help="shallow end of the detection window (default 1e-45)")

    return parser


def build_config(argv: list[str] | None = None) -> RunConfig:
    """Resolve CLI flags, optional JSON config, env var and defaults."""
    args = vars(_build_parser().parse_args(argv))
    command = args.pop("command")
    config_path = args.pop("config", None)

    merged: dict = {}
    env_tol = os.environ.get("GUP_HEUN_TOL")
    if env_tol is not None:
        merged["tol"] = float(env_tol)
    if config_path:
        with open(config_path, encoding="utf-8") as fh:
            file_cfg = json.load(fh)
        known = {f.name for f in fields(RunConfig)}
        unknown = set(file_cfg) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        file_cfg.pop("command", None)
        merged.update(file_cfg)
    merged.update({k: v for k, v in args.items() if v is not None})
    if command == "wavefunction" and "points" not in merged:
        merged["points"] = radial.DEFAULT_GRID_POINTS
    return RunConfig(command=command, **merged)


def main(argv: list[str] | None = None) -> int:
    try:
        cfg = build_config(argv)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
