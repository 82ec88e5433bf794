"""Bundled parameter presets.

Each preset is a complete run configuration (model + geometry + numerics)
for one of the canonical demonstration setups: the two block-decomposable
superconducting models (qwz / sticlet families) and the symmetry-broken
pairing model in its two skyrmion sectors, plus the phase-diagram sweep and
the fully periodic suite.
"""
from __future__ import annotations

import copy

_QWZ_MODEL = {
    "normal_state": "qwz",
    "mu": 0.5,
    "t_q": 1.0,
    "beta": 1.0,
    "delta0": 1.0,
    "d_vector": "perp_inplane",
    "hprime_enabled": False,
}

# alpha/t_s = 1 with the sign choice that realizes the (C, Q) = (-4, 2) sector
_STICLET_MODEL = {
    "normal_state": "sticlet",
    "alpha": -1.0,
    "t_s": -1.0,
    "delta0": 0.1,
    "d_vector": "perp_inplane",
    "hprime_enabled": False,
}

# complex-pairing model: the only pairing is the constant tau_x block
_HPRIME_MODEL = {
    "normal_state": "qwz",
    "mu": 0.2,
    "t_q": 1.0,
    "beta": 1.0,
    "delta0": 1.0,
    "d_vector": "zero",
    "hprime_enabled": True,
}

_GEOMETRY = {"nx": 200, "ny": 40, "cut_geometry": "cylinder"}
_NUMERICS = {"texture_grid": 101, "invariant_grid": 256, "ky_points": 201, "filling": 2}


def _preset(model, geometry=None, numerics=None):
    cfg = {
        "schema_version": 1,
        "model": copy.deepcopy(model),
        "geometry": {**_GEOMETRY, **(geometry or {})},
        "numerics": {**_NUMERICS, **(numerics or {})},
        "output": {"directory": "out"},
    }
    return cfg


def _mirror(model):
    out = copy.deepcopy(model)
    out["mu"] = -out["mu"]
    return out


PRESETS = {
    # bulk texture comparisons (full ground state vs reduced state)
    "fig1_qwz": _preset(_QWZ_MODEL),
    "fig1_sticlet": _preset(_STICLET_MODEL),
    # slab + entanglement spectra, cylinder cut
    "fig2_qwz": _preset(_QWZ_MODEL),
    "fig2_sticlet": _preset(_STICLET_MODEL),
    # symmetry-broken pairing, skyrmion sector Q = -1
    "fig3": _preset(_HPRIME_MODEL),
    # mirrored sector Q = +1
    "figS7": _preset(_mirror(_HPRIME_MODEL)),
    # fully open flake textures (Q = -1 sector; mirror with figS7's model)
    "fig4": _preset(_HPRIME_MODEL, geometry={"nx": 40, "ny": 40}),
    # phase-diagram sweep over (mu, Delta0)
    "figS8": _preset(
        _HPRIME_MODEL,
        numerics={
            "invariant_grid": 96,
            "mu_min": -3.0,
            "mu_max": 3.0,
            "mu_points": 25,
            "delta0_min": 0.0,
            "delta0_max": 1.2,
            "delta0_points": 7,
        },
    ),
    # full periodic-boundary suite (traces the mu = -0.2 sector)
    "figS9": _preset(_mirror(_HPRIME_MODEL), geometry={"cut_geometry": "torus"}),
}


def preset(name: str) -> dict:
    try:
        return copy.deepcopy(PRESETS[name])
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; available: {', '.join(sorted(PRESETS))}")
