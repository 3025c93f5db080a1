"""Scenario configuration: TOML files, bundled presets, unit conversion.

Config values use human units: frequencies as omega/2pi in GHz
(`omega_c_ghz = 4.827`), couplings and rates as value/2pi in MHz, the drive
phase in units of pi, times in ns. Conversion to the internal angular
(rad/ns) system happens once at ingestion; unknown keys are errors.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from typing import Optional

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib

from .errors import ConfigError
from .params import TWO_PI, SystemParams

SCENARIOS = ("fig2_wigner", "fig3_dissipation_scan", "fig4_fidelity_trace",
             "fig5_fullmodel_wigner", "custom")

PRESETS = {
    "paper-set-1": {
        "omega_f_ghz": 5.0023, "drive_ratio": 0.92, "omega_c_ghz": 4.827,
        "omega_m_ghz": 5.0, "omega_q1_ghz": 0.0, "omega_q2_ghz": 0.0,
        "g1_mhz": 120.0, "g2_mhz": 120.0, "g3_mhz": 20.0, "phi_pi": 0.5,
    },
    "paper-set-2": {
        "omega_f_ghz": 8.0023, "drive_ratio": 0.92, "omega_c_ghz": 7.827,
        "omega_m_ghz": 8.0, "omega_q1_ghz": 0.0, "omega_q2_ghz": 0.0,
        "g1_mhz": 120.0, "g2_mhz": 120.0, "g3_mhz": 20.0, "phi_pi": 0.5,
    },
}

_PARAM_KEYS = {
    "omega_f_ghz", "omega_f1_ghz", "omega_f2_ghz", "drive_ratio",
    "Omega_f1_ghz", "Omega_f2_ghz", "omega_c_ghz", "omega_m_ghz",
    "omega_q1_ghz", "omega_q2_ghz", "g1_mhz", "g2_mhz", "g3_mhz", "phi_pi",
    "gamma_q1_mhz", "gamma_q2_mhz", "kappa_m_mhz", "kappa_c_mhz",
    "n_cavity", "n_magnon",
}

_TIME_KEYS = {"t_final_ns", "dt_out_ns"}
_WIGNER_KEYS = {"extent", "points"}
_SCAN_KEYS = {"rates_mhz", "fixed_rate_mhz"}
_OUTPUT_KEYS = {"directory"}
_TOP_KEYS = {"scenario", "preset", "params", "time", "wigner", "scan", "output"}


@dataclass
class ScenarioConfig:
    scenario: str
    params: SystemParams
    t_final_ns: Optional[float] = None
    dt_out_ns: Optional[float] = None
    wigner_extent: Optional[float] = None
    wigner_points: int = 101
    rates_mhz: tuple = (0.0, 0.25, 0.5, 0.75, 1.0)
    fixed_rate_mhz: float = 0.5
    outdir: str = "out"
    raw: dict = field(default_factory=dict)


def _check_keys(section: dict, allowed: set, where: str):
    unknown = set(section) - allowed
    if unknown:
        raise ConfigError(f"unknown key(s) in {where}: {', '.join(sorted(unknown))}")


def _build_system_params(p: dict) -> SystemParams:
    _check_keys(p, _PARAM_KEYS, "[params]")
    ghz = lambda v: TWO_PI * float(v)
    mhz = lambda v: TWO_PI * 1e-3 * float(v)

    omega_f1 = p.get("omega_f1_ghz", p.get("omega_f_ghz"))
    omega_f2 = p.get("omega_f2_ghz", p.get("omega_f_ghz"))
    if omega_f1 is None or omega_f2 is None:
        raise ConfigError("missing drive frequency (omega_f_ghz or omega_f{1,2}_ghz)")
    ratio = p.get("drive_ratio")
    Of1 = p.get("Omega_f1_ghz", ratio * omega_f1 if ratio is not None else None)
    Of2 = p.get("Omega_f2_ghz", ratio * omega_f2 if ratio is not None else None)
    if Of1 is None or Of2 is None:
        raise ConfigError("missing drive strength (drive_ratio or Omega_f{1,2}_ghz)")

    required = ("omega_c_ghz", "omega_m_ghz", "g1_mhz", "g2_mhz", "g3_mhz", "phi_pi")
    for key in required:
        if key not in p:
            raise ConfigError(f"missing required key [params].{key}")
    for key in ("omega_c_ghz", "omega_m_ghz"):
        if not (0.0 <= float(p[key]) < 1e3):
            raise ConfigError(f"[params].{key} = {p[key]} out of sane range (GHz)")
    for key in ("g1_mhz", "g2_mhz", "g3_mhz", "gamma_q1_mhz", "gamma_q2_mhz",
                "kappa_m_mhz", "kappa_c_mhz"):
        if key in p and not (0.0 <= float(p[key]) < 1e5):
            raise ConfigError(f"[params].{key} = {p[key]} out of sane range (MHz)")

    try:
        return SystemParams(
            omega_q1=ghz(p.get("omega_q1_ghz", 0.0)),
            omega_q2=ghz(p.get("omega_q2_ghz", 0.0)),
            omega_c=ghz(p["omega_c_ghz"]), omega_m=ghz(p["omega_m_ghz"]),
            g1=mhz(p["g1_mhz"]), g2=mhz(p["g2_mhz"]), g3=mhz(p["g3_mhz"]),
            Omega_f1=ghz(Of1), Omega_f2=ghz(Of2),
            omega_f1=ghz(omega_f1), omega_f2=ghz(omega_f2),
            phi=math.pi * float(p["phi_pi"]),
            gamma_q1=mhz(p.get("gamma_q1_mhz", 0.0)),
            gamma_q2=mhz(p.get("gamma_q2_mhz", 0.0)),
            kappa_m=mhz(p.get("kappa_m_mhz", 0.0)),
            kappa_a=mhz(p.get("kappa_c_mhz", 0.0)),
            n_cavity=int(p.get("n_cavity", 8)),
            n_magnon=int(p.get("n_magnon", 25)))
    except Exception as exc:
        raise ConfigError(f"invalid parameter values: {exc}") from exc


def parse_config(path: Optional[str] = None, preset: Optional[str] = None,
                 scenario: Optional[str] = None,
                 outdir: Optional[str] = None) -> ScenarioConfig:
    """Load, validate and unit-convert a scenario configuration.

    Precedence: preset values < config file < explicit arguments.
    """
    data: dict = {}
    if path is not None:
        if not os.path.exists(path):
            raise ConfigError(f"config file not found: {path}")
        try:
            with open(path, "rb") as fh:
                data = tomllib.load(fh)
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"config parse error in {path}: {exc}") from exc

    _check_keys(data, _TOP_KEYS, "top level")
    preset = data.get("preset", preset)
    pvals = dict(PRESETS.get(preset, {})) if preset else {}
    if preset and preset not in PRESETS:
        raise ConfigError(f"unknown preset {preset!r}; available: {sorted(PRESETS)}")
    pvals.update(data.get("params", {}))
    if not pvals:
        raise ConfigError("no parameters given (use --preset or a [params] section)")

    scen = scenario or data.get("scenario")
    if not scen:
        raise ConfigError("no scenario given")
    if scen not in SCENARIOS:
        raise ConfigError(f"unknown scenario {scen!r}; available: {SCENARIOS}")

    time_sec = data.get("time", {})
    _check_keys(time_sec, _TIME_KEYS, "[time]")
    wig = data.get("wigner", {})
    _check_keys(wig, _WIGNER_KEYS, "[wigner]")
    scan = data.get("scan", {})
    _check_keys(scan, _SCAN_KEYS, "[scan]")
    out = data.get("output", {})
    _check_keys(out, _OUTPUT_KEYS, "[output]")

    params = _build_system_params(pvals)
    raw = {"scenario": scen, "preset": preset, "params": pvals,
           "time": time_sec, "wigner": wig, "scan": scan, "output": out}
    return ScenarioConfig(
        scenario=scen, params=params,
        t_final_ns=time_sec.get("t_final_ns"),
        dt_out_ns=time_sec.get("dt_out_ns"),
        wigner_extent=wig.get("extent"),
        wigner_points=int(wig.get("points", 101)),
        rates_mhz=tuple(scan.get("rates_mhz", (0.0, 0.25, 0.5, 0.75, 1.0))),
        fixed_rate_mhz=float(scan.get("fixed_rate_mhz", 0.5)),
        outdir=outdir or out.get("directory", "out"),
        raw=raw)
