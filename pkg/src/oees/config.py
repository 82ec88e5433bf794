"""Run-configuration schema: TOML files and preset dictionaries.

Schema (version 1), all keys optional unless noted:

    schema_version = 1              # required
    [model]
    normal_state = "qwz"            # "qwz" | "sticlet" | "custom"
    mu = 0.5                        # qwz: mu, t_q, beta
    t_q = 1.0
    beta = 1.0
    alpha = 1.0                     # sticlet: alpha, t_s
    t_s = 1.0
    delta0 = 1.0
    d_vector = "perp_inplane"       # "zero" | "equal_to_h" | "perp_inplane" | "custom"
    h0 = 0.0
    d0 = 0.0
    hprime_enabled = false
    normal_fourier = [ { offset = [0, 0], coeff = [[0,0],[0,0],[1,0]] }, ... ]
    d_fourier = [ ... ]             # same layout; coeff entries are [re, im]

    [geometry]
    nx = 200
    ny = 40
    cut_geometry = "cylinder"       # "cylinder" | "torus"
    cut_start = 0                   # optional explicit layer range [start, stop)
    cut_stop = 100

    [numerics]
    texture_grid = 101
    invariant_grid = 256
    ky_points = 201
    filling = 2
    mu_min / mu_max / mu_points     # phase-diagram sweep axes
    delta0_min / delta0_max / delta0_points

    [output]
    directory = "out"

Unknown keys anywhere are rejected.
"""
from __future__ import annotations

import sys
from typing import Optional

import numpy as np

from .bulk import BZGrid
from .entanglement import CutSpec
from .errors import ConfigError
from .models import FourierField, ModelSpec, Qwz, Sticlet
from .presets import preset

if sys.version_info >= (3, 11):
    import tomllib as _toml
else:
    import tomli as _toml

_SCHEMA = {
    "model": {
        "normal_state",
        "mu",
        "t_q",
        "beta",
        "alpha",
        "t_s",
        "delta0",
        "d_vector",
        "h0",
        "d0",
        "hprime_enabled",
        "normal_fourier",
        "d_fourier",
    },
    "geometry": {"nx", "ny", "cut_geometry", "cut_start", "cut_stop"},
    "numerics": {
        "texture_grid",
        "invariant_grid",
        "ky_points",
        "filling",
        "mu_min",
        "mu_max",
        "mu_points",
        "delta0_min",
        "delta0_max",
        "delta0_points",
    },
    "output": {"directory"},
}

_DEFAULTS = {
    "model": {"normal_state": "qwz", "mu": 0.5, "t_q": 1.0, "beta": 1.0, "alpha": 1.0,
              "t_s": 1.0, "delta0": 0.0, "d_vector": "zero", "h0": 0.0, "d0": 0.0,
              "hprime_enabled": False},
    "geometry": {"nx": 200, "ny": 40, "cut_geometry": "cylinder"},
    "numerics": {"texture_grid": 101, "invariant_grid": 256, "ky_points": 201, "filling": 2},
    "output": {"directory": "out"},
}


def validate(config: dict) -> dict:
    """Check schema version and reject unknown keys; returns a filled config."""
    if not isinstance(config, dict):
        raise ConfigError("configuration must be a table")
    if config.get("schema_version") != 1:
        raise ConfigError("missing or unsupported schema_version (expected 1)")
    unknown_top = set(config) - set(_SCHEMA) - {"schema_version"}
    if unknown_top:
        raise ConfigError(f"unknown top-level keys: {sorted(unknown_top)}")
    out = {"schema_version": 1}
    for section, allowed in _SCHEMA.items():
        table = config.get(section, {})
        if not isinstance(table, dict):
            raise ConfigError(f"[{section}] must be a table")
        unknown = set(table) - allowed
        if unknown:
            raise ConfigError(f"unknown keys in [{section}]: {sorted(unknown)}")
        merged = dict(_DEFAULTS.get(section, {}))
        merged.update(table)
        out[section] = merged
    _check_positive(out)
    return out


def _check_positive(config: dict):
    num = config["numerics"]
    for key in ("texture_grid", "invariant_grid", "ky_points", "filling"):
        if key in num and (not isinstance(num[key], int) or num[key] <= 0):
            raise ConfigError(f"numerics.{key} must be a positive integer")
    geo = config["geometry"]
    for key in ("nx", "ny"):
        if key in geo and (not isinstance(geo[key], int) or geo[key] <= 0):
            raise ConfigError(f"geometry.{key} must be a positive integer")


def load_config(path: Optional[str] = None, preset_name: Optional[str] = None,
                overrides: Optional[dict] = None) -> dict:
    """Assemble a validated config from a preset, a TOML file, and overrides.

    Later sources win key-by-key: preset < file < overrides.
    """
    base: dict = {"schema_version": 1}
    if preset_name:
        try:
            base = preset(preset_name)
        except KeyError as err:
            raise ConfigError(str(err))
    if path:
        try:
            with open(path, "rb") as fh:
                loaded = _toml.load(fh)
        except FileNotFoundError:
            raise ConfigError(f"config file not found: {path}")
        except _toml.TOMLDecodeError as err:
            raise ConfigError(f"invalid TOML in {path}: {err}")
        loaded.setdefault("schema_version", base.get("schema_version", 1))
        base = _merge(base, loaded)
    if overrides:
        base = _merge(base, overrides)
    return validate(base)


def _merge(base: dict, update: dict) -> dict:
    out = dict(base)
    for key, val in update.items():
        if isinstance(val, dict) and isinstance(out.get(key), dict):
            out[key] = _merge(out[key], val)
        else:
            out[key] = val
    return out


def _fourier_field(entries) -> FourierField:
    coeffs = {}
    try:
        for entry in entries:
            dx, dy = entry["offset"]
            coeff = [complex(c[0], c[1]) for c in entry["coeff"]]
            coeffs[(int(dx), int(dy))] = coeff
    except (KeyError, TypeError, IndexError) as err:
        raise ConfigError(f"malformed fourier table: {err}")
    try:
        return FourierField(coeffs)
    except ValueError as err:
        raise ConfigError(str(err))


def build_model(config: dict) -> ModelSpec:
    m = config["model"]
    kind = m["normal_state"]
    if kind == "qwz":
        normal = Qwz(mu=float(m["mu"]), t_q=float(m["t_q"]), beta=float(m["beta"]))
    elif kind == "sticlet":
        normal = Sticlet(alpha=float(m["alpha"]), t_s=float(m["t_s"]))
    elif kind == "custom":
        if "normal_fourier" not in m:
            raise ConfigError("normal_state = 'custom' requires model.normal_fourier")
        normal = _fourier_field(m["normal_fourier"])
    else:
        raise ConfigError(f"unknown normal_state {kind!r}")
    d_vector = m["d_vector"]
    if d_vector == "custom":
        if "d_fourier" not in m:
            raise ConfigError("d_vector = 'custom' requires model.d_fourier")
        d_vector = _fourier_field(m["d_fourier"])
    elif d_vector not in ("zero", "equal_to_h", "perp_inplane"):
        raise ConfigError(f"unknown d_vector {m['d_vector']!r}")
    try:
        return ModelSpec(
            normal_state=normal,
            delta0=float(m["delta0"]),
            d_vector=d_vector,
            h0=float(m["h0"]),
            d0=float(m["d0"]),
            hprime_enabled=bool(m["hprime_enabled"]),
        )
    except ValueError as err:
        raise ConfigError(str(err))


def build_cut(config: dict) -> CutSpec:
    geo = config["geometry"]
    layers = None
    if "cut_start" in geo or "cut_stop" in geo:
        if not ("cut_start" in geo and "cut_stop" in geo):
            raise ConfigError("cut_start and cut_stop must be given together")
        layers = (int(geo["cut_start"]), int(geo["cut_stop"]))
    try:
        return CutSpec(geometry=geo["cut_geometry"], layers=layers)
    except ValueError as err:
        raise ConfigError(str(err))


def texture_grid(config: dict) -> BZGrid:
    n = config["numerics"]["texture_grid"]
    return BZGrid(n, n)


def invariant_grid(config: dict) -> BZGrid:
    n = config["numerics"]["invariant_grid"]
    return BZGrid(n, n)


def sweep_axes(config: dict):
    """Phase-diagram axes from the numerics table."""
    num = config["numerics"]
    try:
        mu = np.linspace(float(num["mu_min"]), float(num["mu_max"]), int(num["mu_points"]))
        d0 = np.linspace(
            float(num["delta0_min"]), float(num["delta0_max"]), int(num["delta0_points"])
        )
    except KeyError as err:
        raise ConfigError(f"phase-diagram sweep needs numerics.{err.args[0]}")
    return mu, d0
