"""Deterministic CSV/JSON exports, their readers, and run manifests.

Floats are written with repr-exact precision (%.17g) so every file parses
back losslessly and identical configurations produce byte-identical files.
"""
from __future__ import annotations

import hashlib
import json
import time
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np

from .bulk import BZGrid, SpinTexture
from .entanglement import CutSpec
from .realspace import LocalizationProfile
from .series import SpectrumSeries
from .topology import PhaseDiagram

FLOAT_FMT = "%.17g"

#: two eigenvalues within this distance count as one degenerate multiplet
DEGENERACY_TOL = 1e-6


def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return FLOAT_FMT % float(x)
    return str(x)


def write_csv(path, header: Sequence[str], rows) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(x) for x in row) + "\n")
    return path


def read_csv(path) -> Dict[str, np.ndarray]:
    """Columns keyed by header name; numeric columns become float arrays."""
    with open(path) as fh:
        header = fh.readline().strip().split(",")
        cols: List[list] = [[] for _ in header]
        for line in fh:
            for col, item in zip(cols, line.strip().split(",")):
                col.append(item)
    out = {}
    for name, col in zip(header, cols):
        try:
            out[name] = np.array([float(x) for x in col])
        except ValueError:
            out[name] = np.array(col, dtype=object)
    return out


def write_bulk_texture_csv(path, texture: SpinTexture, grid: BZGrid) -> Path:
    KX, KY = grid.mesh()
    rows = []
    v = texture.vectors
    for i in range(grid.nx):
        for j in range(grid.ny):
            rows.append(
                (KX[i, j], KY[i, j], v[i, j, 0], v[i, j, 1], v[i, j, 2], texture.norms[i, j])
            )
    return write_csv(path, ["kx", "ky", "Sx", "Sy", "Sz", "S_norm"], rows)


def write_site_texture_csv(path, texture: SpinTexture) -> Path:
    v = texture.vectors
    rows = []
    for x in range(v.shape[0]):
        for y in range(v.shape[1]):
            rows.append((x, y, v[x, y, 0], v[x, y, 1], v[x, y, 2]))
    return write_csv(path, ["x", "y", "Sx", "Sy", "Sz"], rows)


def write_energy_spectrum_csv(path, series: SpectrumSeries) -> Path:
    rows = []
    for i, ky in enumerate(series.momenta):
        for n, e in enumerate(series.values[i]):
            rows.append((ky, n, e))
    return write_csv(path, ["ky", "band_index", "energy"], rows)


def _degeneracies(values: np.ndarray) -> np.ndarray:
    """Multiplicity of each sorted eigenvalue within DEGENERACY_TOL."""
    out = np.ones(len(values), dtype=int)
    start = 0
    for i in range(1, len(values) + 1):
        if i == len(values) or values[i] - values[i - 1] > DEGENERACY_TOL:
            out[start:i] = i - start
            start = i
    return out


def write_entanglement_csv(
    path,
    series: SpectrumSeries,
    cut: Optional[CutSpec] = None,
    nx: Optional[int] = None,
) -> Path:
    """ES/OEES rows: ky, index, xi, degeneracy, edge_tag (real|virtual|bulk|none)."""
    end_types = cut.end_types(nx) if (cut is not None and nx is not None) else None
    rows = []
    for i, ky in enumerate(series.momenta):
        vals = series.values[i]
        degs = _degeneracies(vals)
        for n, xi in enumerate(vals):
            tag = "none"
            if series.weights and end_types is not None:
                if series.weights["left_quarter"][i, n] > 0.5:
                    tag = end_types["left"]
                elif series.weights["right_quarter"][i, n] > 0.5:
                    tag = end_types["right"]
                else:
                    tag = "bulk"
            rows.append((ky, n, xi, degs[n], tag))
    return write_csv(path, ["ky", "index", "xi", "degeneracy", "edge_tag"], rows)


def write_localization_csv(path, profile: LocalizationProfile) -> Path:
    rows = list(zip(profile.layer_index, profile.probability))
    return write_csv(path, ["layer", "probability"], rows)


def write_phase_diagram_csv(path, diagram: PhaseDiagram) -> Path:
    rows = []
    for i, mu in enumerate(diagram.mu_values):
        for j, d0 in enumerate(diagram.delta0_values):
            rows.append(
                (
                    mu,
                    d0,
                    diagram.chern[i, j],
                    diagram.skyrmion[i, j],
                    diagram.min_spin_norm[i, j],
                    diagram.status[i, j],
                )
            )
    return write_csv(path, ["mu", "delta0", "chern", "skyrmion", "min_spin_norm", "status"], rows)


def write_json(path, payload: dict) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True, default=_json_default)
        fh.write("\n")
    return path


def _json_default(obj):
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON serializable: {type(obj)}")


def config_hash(config: dict) -> str:
    return hashlib.sha256(json.dumps(config, sort_keys=True, default=_json_default).encode()).hexdigest()


def file_sha256(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()


def write_manifest(out_dir, config: dict, outputs: Sequence[Path], version: str) -> Path:
    """Record the config hash and per-output checksums; identical configs must
    reproduce identical checksums (timestamps are informational only).

    The hash covers the computational task, so the output destination is
    excluded from it."""
    task = {k: v for k, v in config.items() if k != "output"}
    manifest = {
        "artifact_version": version,
        "config_hash": config_hash(task),
        "created_unix": time.time(),
        "outputs": {Path(p).name: file_sha256(p) for p in outputs},
    }
    return write_json(Path(out_dir) / "manifest.json", manifest)
