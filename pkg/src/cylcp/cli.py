"""Command-line front end.

Exit codes: 0 success, 2 bad configuration or arguments, 3 numeric failure.

Configuration files are INI-style with the sections ``atom``, ``material``,
``geometry``, ``scan``, ``settings`` and ``output``.  Command-line flags
override file values.
"""
from __future__ import annotations

import argparse
import configparser
import csv
import io
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields, replace

import mpmath
import numpy as np

from . import asymptotics, materials, quadrature
from .free_energy import (EvalSettings, Strategy, free_energy, green_tensor_diagonal,
                          green_tensor_partial_sums)
from .materials import AtomModel, Kind, PermittivityModel
from .scattering import ShellGeometry
from .special_functions import log_bessel_i_scaled, log_bessel_k_scaled

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3

SCAN_COLUMNS = ("L_nm", "L_over_R0", "s", "F_over_F0", "F_joules", "method_m", "method_n",
                "n_evals", "err_est")


class ConfigError(ValueError):
    """Invalid or inconsistent run configuration."""


class NumericFailure(RuntimeError):
    """Nothing usable could be computed."""


# --- configuration -------------------------------------------------------------------

@dataclass(frozen=True)
class ScanSpec:
    L_min: float
    L_max: float
    points: int = 1
    spacing: str = "log"

    def __post_init__(self):
        if not self.L_min > 0:
            raise ConfigError("L_min must be positive")
        if self.L_max < self.L_min:
            raise ConfigError("L_max must be >= L_min")
        if int(self.points) < 1:
            raise ConfigError("points must be >= 1")
        if self.spacing not in ("log", "linear"):
            raise ConfigError("spacing must be 'log' or 'linear'")

    def distances(self) -> np.ndarray:
        if self.points == 1:
            return np.array([self.L_min])
        if self.spacing == "log":
            return np.geomspace(self.L_min, self.L_max, self.points)
        return np.linspace(self.L_min, self.L_max, self.points)


@dataclass(frozen=True)
class OutputSpec:
    path: str | None = None
    format: str = "csv"

    def __post_init__(self):
        if self.format not in ("csv", "json"):
            raise ConfigError("format must be 'csv' or 'json'")


@dataclass(frozen=True)
class RunConfig:
    atom: AtomModel
    material: PermittivityModel
    geometry: ShellGeometry
    scan: ScanSpec | None
    temperature: float = 0.0
    settings: EvalSettings = field(default_factory=EvalSettings)
    output: OutputSpec = field(default_factory=OutputSpec)

    def __post_init__(self):
        if not self.temperature >= 0:
            raise ConfigError("temperature must be >= 0")


def _canonical_chi(chi: float) -> float:
    # drop round-off so that chi, Ri and d describing one shell give one geometry
    return float(f"{chi:.15g}")


def make_geometry(R0: float, Ri: float | None = None, chi: float | None = None,
                  d: float | None = None) -> ShellGeometry:
    """Shell from ``R0`` and exactly one of ``Ri``, ``chi``, ``d``."""
    given = [k for k, v in (("Ri", Ri), ("chi", chi), ("d", d)) if v is not None]
    if len(given) != 1:
        raise ConfigError(f"give exactly one of Ri, chi, d (got {given or 'none'})")
    if not R0 > 0:
        raise ConfigError("R0 must be positive")
    if Ri is not None:
        chi = Ri / R0
    elif d is not None:
        chi = 1.0 - d / R0
    chi = _canonical_chi(chi)
    if not 0.0 <= chi < 1.0:
        raise ConfigError(f"inner radius ratio chi = {chi} outside [0, 1)")
    return ShellGeometry(R0, chi * R0)


def _get_float(sec, key, default=None):
    if key not in sec:
        return default
    try:
        return float(sec[key])
    except ValueError:
        raise ConfigError(f"[{sec.name}] {key} = {sec[key]!r} is not a number") from None


def _get_int(sec, key, default):
    if key not in sec:
        return default
    try:
        return int(sec[key])
    except ValueError:
        raise ConfigError(f"[{sec.name}] {key} = {sec[key]!r} is not an integer") from None


def _section(parser, name):
    return parser[name] if parser.has_section(name) else parser[parser.default_section]


def _parse_atom(sec) -> AtomModel:
    if "preset" in sec:
        try:
            base = materials.atom_preset(sec["preset"])
        except KeyError as exc:
            raise ConfigError(str(exc)) from None
    else:
        if "omega_a" not in sec:
            raise ConfigError("[atom] needs a preset or omega_a")
        base = AtomModel(omega_a=_get_float(sec, "omega_a"))
    omega_a = _get_float(sec, "omega_a", base.omega_a)
    alpha0 = _get_float(sec, "alpha0_volume", base.alpha0_volume)
    return AtomModel(omega_a=omega_a, alpha0_volume=alpha0, name=sec.get("name", base.name))


def _parse_material(sec) -> PermittivityModel:
    if "preset" in sec:
        try:
            base = materials.material_preset(sec["preset"])
        except KeyError as exc:
            raise ConfigError(str(exc)) from None
    else:
        if "kind" not in sec:
            raise ConfigError("[material] needs a preset or a kind")
        base = None
    try:
        kind = Kind(sec.get("kind", base.kind.value if base else None))
    except ValueError:
        raise ConfigError(f"unknown material kind {sec.get('kind')!r}") from None
    values = {}
    for key in ("eps_inf", "omega_p", "omega_0", "gamma"):
        default = getattr(base, key) if base else None
        v = _get_float(sec, key, default)
        if v is not None:
            values[key] = v
    try:
        return PermittivityModel(kind, name=sec.get("name", base.name if base else ""), **values)
    except ValueError as exc:
        raise ConfigError(f"[material] {exc}") from None


def _parse_geometry(sec, atom: AtomModel) -> ShellGeometry:
    R0 = _get_float(sec, "R0")
    ratio = _get_float(sec, "R0_over_lambda_a")
    if (R0 is None) == (ratio is None):
        raise ConfigError("[geometry] give exactly one of R0, R0_over_lambda_a")
    if R0 is None:
        R0 = ratio * atom.lambda_a
    return make_geometry(R0, _get_float(sec, "Ri"), _get_float(sec, "chi"), _get_float(sec, "d"))


def _parse_scan(sec, R0: float) -> ScanSpec:
    unit = sec.get("unit", "nm")
    if unit not in ("nm", "R0"):
        raise ConfigError("[scan] unit must be 'nm' or 'R0'")
    factor = R0 if unit == "R0" else 1.0
    lo = _get_float(sec, "L_min")
    if lo is None:
        raise ConfigError("[scan] L_min is required")
    hi = _get_float(sec, "L_max", lo)
    return ScanSpec(lo * factor, hi * factor, _get_int(sec, "points", 1), sec.get("spacing", "log"))


def _parse_settings(sec) -> EvalSettings:
    base = EvalSettings()
    kw = {}
    for f in fields(EvalSettings):
        if f.name not in sec:
            continue
        raw = sec[f.name]
        default = getattr(base, f.name)
        if isinstance(default, bool):
            kw[f.name] = sec.getboolean(f.name)
        elif isinstance(default, Strategy):
            kw[f.name] = raw
        elif isinstance(default, int):
            kw[f.name] = _get_int(sec, f.name, default)
        else:
            kw[f.name] = _get_float(sec, f.name)
    try:
        return EvalSettings(**kw)
    except ValueError as exc:
        raise ConfigError(f"[settings] {exc}") from None


def parse_config(text: str) -> RunConfig:
    """Build a :class:`RunConfig` from INI text."""
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse configuration: {exc}") from None
    atom = materials.atom_preset("rubidium")
    if parser.has_section("atom"):
        try:
            atom = _parse_atom(parser["atom"])
        except ValueError as exc:
            raise ConfigError(f"[atom] {exc}") from None
    if not parser.has_section("material"):
        raise ConfigError("missing [material] section")
    if not parser.has_section("geometry"):
        raise ConfigError("missing [geometry] section")
    material = _parse_material(parser["material"])
    geometry = _parse_geometry(parser["geometry"], atom)
    if not parser.has_section("scan"):
        raise ConfigError("missing [scan] section")
    scan = _parse_scan(parser["scan"], geometry.R0)
    run = _section(parser, "run")
    temperature = _get_float(run, "temperature", 0.0)
    settings = _parse_settings(_section(parser, "settings"))
    out = _section(parser, "output")
    output = OutputSpec(out.get("path") or None, out.get("format", "csv"))
    return RunConfig(atom, material, geometry, scan, temperature, settings, output)


def serialize_config(cfg: RunConfig) -> str:
    """INI text that :func:`parse_config` maps back to ``cfg``."""
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str
    parser["run"] = {"temperature": repr(cfg.temperature)}
    atom = {"omega_a": repr(cfg.atom.omega_a)}
    if cfg.atom.alpha0_volume is not None:
        atom["alpha0_volume"] = repr(cfg.atom.alpha0_volume)
    if cfg.atom.name:
        atom["name"] = cfg.atom.name
    parser["atom"] = atom
    mat = {"kind": cfg.material.kind.value}
    for key in ("eps_inf", "omega_p", "omega_0", "gamma"):
        mat[key] = repr(getattr(cfg.material, key))
    if cfg.material.name:
        mat["name"] = cfg.material.name
    parser["material"] = mat
    parser["geometry"] = {"R0": repr(cfg.geometry.R0), "chi": repr(cfg.geometry.chi)}
    parser["scan"] = {"L_min": repr(cfg.scan.L_min), "L_max": repr(cfg.scan.L_max),
                      "points": str(cfg.scan.points), "spacing": cfg.scan.spacing}
    settings = {}
    for f in fields(EvalSettings):
        v = getattr(cfg.settings, f.name)
        settings[f.name] = v.value if isinstance(v, Strategy) else repr(v) if isinstance(v, float) \
            else str(v)
    parser["settings"] = settings
    out = {"format": cfg.output.format}
    if cfg.output.path:
        out["path"] = cfg.output.path
    parser["output"] = out
    buf = io.StringIO()
    parser.write(buf)
    return buf.getvalue()


def _apply_overrides(cfg: RunConfig | None, args, need_scan: bool = True) -> RunConfig:
    """Merge command-line flags into the file configuration; flags win."""
    atom = cfg.atom if cfg else materials.atom_preset("rubidium")
    if args.atom:
        try:
            atom = materials.atom_preset(args.atom)
        except KeyError as exc:
            raise ConfigError(str(exc)) from None
    material = cfg.material if cfg else None
    if args.material:
        try:
            material = materials.material_preset(args.material)
        except KeyError as exc:
            raise ConfigError(str(exc)) from None
    if material is None:
        raise ConfigError("no material: give --material or a [material] section")

    geometry = cfg.geometry if cfg else None
    shape = {"Ri": args.Ri, "chi": args.chi, "d": args.d}
    R0 = args.R0
    if args.R0_over_lambda_a is not None:
        if R0 is not None:
            raise ConfigError("give only one of --R0, --R0-over-lambda-a")
        R0 = args.R0_over_lambda_a * atom.lambda_a
    if R0 is not None or any(v is not None for v in shape.values()):
        base_R0 = R0 if R0 is not None else (geometry.R0 if geometry else None)
        if base_R0 is None:
            raise ConfigError("no outer radius: give --R0 or --R0-over-lambda-a")
        if all(v is None for v in shape.values()):
            shape["chi"] = geometry.chi if geometry else 0.0
        geometry = make_geometry(base_R0, **shape)
    if geometry is None:
        raise ConfigError("no geometry: give --R0 and one of --chi/--Ri/--d")

    scan = cfg.scan if cfg else None
    factor = geometry.R0 if args.unit == "R0" else 1.0
    if args.L_min is not None or args.L_max is not None or args.points is not None \
            or args.spacing is not None:
        lo = args.L_min * factor if args.L_min is not None else (scan.L_min if scan else None)
        if lo is None:
            raise ConfigError("no distance: give --L-min")
        hi = args.L_max * factor if args.L_max is not None else (scan.L_max if scan else lo)
        points = args.points if args.points is not None else (scan.points if scan else 1)
        spacing = args.spacing or (scan.spacing if scan else "log")
        scan = ScanSpec(lo, max(hi, lo) if args.L_max is None else hi, points, spacing)
    if scan is None and need_scan:
        raise ConfigError("no distances: give --L-min (and --L-max, --points) or a [scan] section")

    temperature = cfg.temperature if cfg else 0.0
    if args.temperature is not None:
        temperature = args.temperature
    settings = cfg.settings if cfg else EvalSettings()
    changes = {}
    if args.rel_tol is not None:
        changes["rel_tol"] = args.rel_tol
    for name in ("n_eta", "n_zeta", "n_m", "n_matsubara"):
        v = getattr(args, name)
        if v is not None:
            changes[name] = v
    if args.strategy_m:
        changes["strategy_m"] = args.strategy_m
    if args.strategy_n:
        changes["strategy_n"] = args.strategy_n
    if args.adaptive:
        changes["small_s_adaptive"] = True
    try:
        settings = replace(settings, **changes)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    output = cfg.output if cfg else OutputSpec()
    output = OutputSpec(args.output or output.path, args.format or output.format)
    return RunConfig(atom, material, geometry, scan, temperature, settings, output)


# --- output --------------------------------------------------------------------------

def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def render(columns, rows, fmt: str) -> str:
    if fmt == "json":
        return json.dumps([dict(zip(columns, r)) for r in rows], indent=2, allow_nan=True) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_fmt(v) for v in r])
    return buf.getvalue()


def _emit(text: str, path: str | None):
    if path:
        with open(path, "w", newline="\n", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# --- commands ------------------------------------------------------------------------

def _scan_row(cfg: RunConfig, L: float):
    s = cfg.geometry.R0 / L
    try:
        res = free_energy(cfg.atom, cfg.material, cfg.geometry, L, cfg.temperature, cfg.settings)
    except (ArithmeticError, ValueError) as exc:
        return (L, L / cfg.geometry.R0, s, math.nan, None, "failed", "failed", 0,
                math.nan), f"L = {L:.6g} nm: {exc}"
    ratio = -res.f_signed
    return (L, L / cfg.geometry.R0, s, ratio, res.f_absolute, res.strategy_used["m"],
            res.strategy_used["n"] or "", res.budget_report["evaluations"],
            res.budget_report["error_estimate"]), None


def _map_rows(fn, cfg, distances, jobs):
    if jobs > 1 and len(distances) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(fn, [cfg] * len(distances), distances))
    return [fn(cfg, L) for L in distances]


def cmd_scan(cfg: RunConfig, jobs: int = 1) -> int:
    results = _map_rows(_scan_row, cfg, [float(L) for L in cfg.scan.distances()], jobs)
    rows = [r for r, _ in results]
    failures = [msg for _, msg in results if msg]
    for msg in failures:
        print(f"warning: {msg}", file=sys.stderr)
    if failures and len(failures) == len(rows):
        raise NumericFailure("every row of the scan failed")
    _emit(render(SCAN_COLUMNS, rows, cfg.output.format), cfg.output.path)
    return EXIT_OK


def _regime_text(cfg: RunConfig, report: asymptotics.RegimeReport) -> str:
    def num(v):
        return "absent" if v is None else f"{v:.6g}"

    lines = [
        f"material        {cfg.material.name or cfg.material.kind.value} ({cfg.material.kind.value})",
        f"R0              {cfg.geometry.R0:.6g} nm   chi = {cfg.geometry.chi:.6g}",
        f"lambda_a        {report.lambda_a:.6g} nm",
        f"lambda_T        {num(report.lambda_T)} nm",
        f"s0              {num(report.s0)}",
        f"s_p             {num(report.s_p)}",
        f"s_D             {num(report.s_D)}",
        f"xi_L            {num(report.xi_L)} eV",
    ]
    lines += [f"eta_[{j}]          {v:.6g}" for j, v in report.eta_peaks.items()]
    lines += [f"{k:<22}{v}" for k, v in report.conditions.items()]
    for note in report.applicable_limits:
        state = {True: "holds", False: "violated", None: "unchecked"}[note.valid]
        lines.append(f"limit {note.name:<22} {state:<10} {note.note}")
    return "\n".join(lines) + "\n"


def cmd_regimes(cfg: RunConfig, L: float | None = None) -> int:
    report = asymptotics.regime_parameters(cfg.atom, cfg.material, cfg.geometry,
                                           cfg.temperature, L)
    if cfg.output.format == "json" or cfg.output.path:
        text = json.dumps(report.as_dict(), indent=2) + "\n"
        if cfg.output.format != "json":
            sys.stdout.write(_regime_text(cfg, report))
        _emit(text, cfg.output.path)
    else:
        sys.stdout.write(_regime_text(cfg, report))
    return EXIT_OK


def _compare_row(cfg: RunConfig, L: float, limits):
    res = free_energy(cfg.atom, cfg.material, cfg.geometry, L, cfg.temperature, cfg.settings)
    numeric = -res.f_signed
    row = [L, L / cfg.geometry.R0, cfg.geometry.R0 / L, numeric]
    for name in limits:
        asym = -float(asymptotics.evaluate_limit(name, cfg.atom, cfg.material, cfg.geometry, L,
                                                 cfg.temperature))
        row += [asym, numeric / asym]
    return row


def cmd_compare(cfg: RunConfig, limits) -> int:
    unknown = [n for n in limits if n not in asymptotics.LIMITS]
    if unknown or not limits:
        raise ConfigError(f"unknown or missing limit names {unknown}; known: "
                          f"{sorted(asymptotics.LIMITS)}")
    columns = ["L_nm", "L_over_R0", "s", "F_over_F0"]
    for name in limits:
        columns += [name, f"{name}_ratio"]
    try:
        rows = [_compare_row(cfg, float(L), limits) for L in cfg.scan.distances()]
    except asymptotics.KindMismatch as exc:
        raise ConfigError(str(exc)) from None
    except ArithmeticError as exc:
        raise NumericFailure(str(exc)) from None
    _emit(render(columns, rows, cfg.output.format), cfg.output.path)
    return EXIT_OK


def cmd_green(cfg: RunConfig, xi: float, m_resolved: bool = False, m_max: int = 10) -> int:
    if not xi >= 0:
        raise ConfigError("xi must be non-negative")
    rows = []
    if m_resolved:
        columns = ("L_nm", "m", "g_rr", "g_pp", "g_zz")
        for L in cfg.scan.distances():
            sums = green_tensor_partial_sums(cfg.material, cfg.geometry, float(L), xi, m_max,
                                             cfg.settings)
            rows += [(float(L), m, *map(float, sums[m])) for m in range(m_max + 1)]
    else:
        columns = ("L_nm", "g_rr", "g_pp", "g_zz", "trace")
        for L in cfg.scan.distances():
            g = green_tensor_diagonal(cfg.material, cfg.geometry, float(L), xi, cfg.settings)
            rows.append((float(L), *g, math.fsum(g)))
    _emit(render(columns, rows, cfg.output.format), cfg.output.path)
    return EXIT_OK


def cmd_quadrature(kind: str, N: int, alpha: float = 0.0, beta: float = 0.0, mu: float = 1.0,
                   h: float = 1.0, fmt: str = "csv", path: str | None = None) -> int:
    try:
        if kind == "laguerre":
            rule = quadrature.gauss_laguerre(N, alpha)
        elif kind == "jacobi":
            rule = quadrature.gauss_jacobi(N, alpha, beta)
        elif kind == "mdl":
            rule = quadrature.mdl_rule(N, mu, h)
        else:
            raise ConfigError(f"unknown rule kind {kind!r}")
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    rows = [(i, x, w) for i, (x, w) in enumerate(zip(rule.nodes.tolist(), rule.weights.tolist()))]
    _emit(render(("index", "node", "weight"), rows, fmt), path)
    print(f"sum of weights: {math.fsum(rule.weights):.17g}", file=sys.stderr)
    return EXIT_OK


_PROBE_ORDERS = (0.0, 0.5, 1.0, 2.5, 10.0, 50.0, 200.0, 1000.0)
_PROBE_ARGS = (1e-6, 1e-3, 0.1, 1.0, 10.0, 100.0, 700.0)


def cmd_selftest_bessel(samples: int = 0, seed: int = 0, tol: float = 1e-10, fmt: str = "csv",
                        path: str | None = None) -> int:
    """Dump scaled log-Bessel values on a probe grid next to 40-digit mpmath references.

    ``samples`` random ``(ν, x)`` points drawn with ``seed`` are appended to the
    fixed grid.  Exit status 3 if any relative deviation exceeds ``tol``.
    """
    nu = [n for n in _PROBE_ORDERS for _ in _PROBE_ARGS]
    x = [v for _ in _PROBE_ORDERS for v in _PROBE_ARGS]
    if samples > 0:
        rng = np.random.default_rng(seed)
        nu += rng.uniform(0.0, 500.0, samples).tolist()
        x += np.exp(rng.uniform(math.log(1e-6), math.log(1e3), samples)).tolist()
    nu, x = np.array(nu), np.array(x)
    li = log_bessel_i_scaled(nu, x)
    lk = log_bessel_k_scaled(nu, x)
    rows = []
    worst = 0.0
    with mpmath.workdps(40):
        for n, xv, a, b in zip(nu.tolist(), x.tolist(), li.tolist(), lk.tolist()):
            ref_i = float(mpmath.log(mpmath.besseli(n, xv)) - xv)
            ref_k = float(mpmath.log(mpmath.besselk(n, xv)) + xv)
            dev = max(abs(a - ref_i) / max(1.0, abs(ref_i)), abs(b - ref_k) / max(1.0, abs(ref_k)))
            worst = max(worst, dev)
            rows.append((n, xv, a, ref_i, b, ref_k, dev))
    columns = ("nu", "x", "log_I_scaled", "log_I_scaled_ref", "log_K_scaled", "log_K_scaled_ref",
               "deviation")
    _emit(render(columns, rows, fmt), path)
    ok = worst <= tol
    print(f"{'PASS' if ok else 'FAIL'} log-Bessel self-test: {len(rows)} points, "
          f"max deviation {worst:.3e} (tolerance {tol:.1e})", file=sys.stderr)
    return EXIT_OK if ok else EXIT_NUMERIC


# --- argument parsing ----------------------------------------------------------------

def _common_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("global options")
    g.add_argument("--config", help="INI configuration file")
    g.add_argument("--output", help="output file (default: stdout)")
    g.add_argument("--format", choices=("csv", "json"))
    g.add_argument("--jobs", type=int, default=1, help="parallel scan rows")
    g.add_argument("--rel-tol", type=float, dest="rel_tol")
    g.add_argument("--seed", type=int, default=0, help="seed for randomized self-tests")
    return p


def _physics_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("system")
    g.add_argument("--atom", help=f"atom preset {sorted(materials.ATOM_PRESETS)}")
    g.add_argument("--material", help=f"material preset {sorted(materials.MATERIAL_PRESETS)}")
    g.add_argument("--R0", type=float, help="outer radius in nm")
    g.add_argument("--R0-over-lambda-a", type=float, dest="R0_over_lambda_a")
    g.add_argument("--chi", type=float)
    g.add_argument("--Ri", type=float, help="inner radius in nm")
    g.add_argument("--d", type=float, help="shell thickness in nm")
    g.add_argument("--temperature", "-T", type=float)
    s = p.add_argument_group("distances")
    s.add_argument("--L-min", type=float, dest="L_min")
    s.add_argument("--L-max", type=float, dest="L_max")
    s.add_argument("--points", type=int)
    s.add_argument("--spacing", choices=("log", "linear"))
    s.add_argument("--unit", choices=("nm", "R0"), default="nm",
                   help="unit of --L-min/--L-max")
    q = p.add_argument_group("numerics")
    q.add_argument("--n-eta", type=int, dest="n_eta")
    q.add_argument("--n-zeta", type=int, dest="n_zeta")
    q.add_argument("--n-m", type=int, dest="n_m")
    q.add_argument("--n-matsubara", type=int, dest="n_matsubara")
    q.add_argument("--strategy-m", choices=[x.value for x in Strategy], dest="strategy_m")
    q.add_argument("--strategy-n", choices=[x.value for x in Strategy], dest="strategy_n")
    q.add_argument("--adaptive", action="store_true", help="adaptive 2D cubature for s <= 1")
    return p


def build_parser() -> argparse.ArgumentParser:
    common, physics = _common_parser(), _physics_parser()
    parser = argparse.ArgumentParser(prog="cylcp", description=__doc__.split("\n")[0],
                                     parents=[common])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("scan", parents=[common, physics], help="free energy over a range of L")
    p = sub.add_parser("regimes", parents=[common, physics], help="regime parameters")
    p.add_argument("--at-L", type=float, dest="at_L", help="separation for s-dependent checks (nm)")
    p = sub.add_parser("compare", parents=[common, physics], help="numeric vs closed-form limits")
    p.add_argument("--limits", required=True,
                   help=f"comma-separated names from {sorted(asymptotics.LIMITS)}")
    p = sub.add_parser("green", parents=[common, physics], help="Green tensor diagonal")
    p.add_argument("--xi", type=float, required=True, help="imaginary frequency in eV")
    p.add_argument("--m-resolved", action="store_true", help="per-m partial sums")
    p.add_argument("--m-max", type=int, default=10)
    p = sub.add_parser("quadrature", parents=[common], help="dump a Gaussian rule")
    p.add_argument("--kind", choices=("laguerre", "jacobi", "mdl"), required=True)
    p.add_argument("--n", "-N", type=int, required=True, dest="N", help="number of nodes")
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--beta", type=float, default=0.0)
    p.add_argument("--mu", type=float, default=1.0)
    p.add_argument("--h", type=float, default=1.0)
    p = sub.add_parser("selftest-bessel", parents=[common], help="Bessel backend self-test")
    p.add_argument("--samples", type=int, default=0, help="extra random points (uses --seed)")
    return parser


def _load(args) -> RunConfig:
    cfg = None
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError(f"cannot read {args.config}: {exc}") from None
        cfg = parse_config(text)
    return _apply_overrides(cfg, args, need_scan=args.command != "regimes")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "quadrature":
            return cmd_quadrature(args.kind, args.N, args.alpha, args.beta, args.mu, args.h,
                                  args.format or "csv", args.output)
        if args.command == "selftest-bessel":
            return cmd_selftest_bessel(args.samples, args.seed, fmt=args.format or "csv",
                                       path=args.output)
        cfg = _load(args)
        if args.command == "scan":
            return cmd_scan(cfg, max(1, args.jobs))
        if args.command == "regimes":
            return cmd_regimes(cfg, args.at_L)
        if args.command == "compare":
            return cmd_compare(cfg, [n.strip() for n in args.limits.split(",") if n.strip()])
        return cmd_green(cfg, args.xi, args.m_resolved, args.m_max)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NumericFailure, ArithmeticError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
