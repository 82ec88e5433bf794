"""Command-line interface.

Subcommands: texture | invariants | spectra | phasediagram.
Exit codes: 0 success, 2 numerical/physical failure, 3 configuration error.
The TOML configuration schema is documented in :mod:`oees.config`.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .bulk import bulk_texture
from .config import (
    build_cut,
    build_model,
    invariant_grid,
    load_config,
    sweep_axes,
    texture_grid,
)
from .entanglement import (
    TORUS,
    CutSpec,
    count_chiral_modes,
    count_with_refinement,
    entanglement_spectrum,
    real_edge_anomaly_detect,
    torus_suite,
)
from .errors import (
    ConfigError,
    GapClosure,
    OeesError,
    SingularSpin,
    SingularTriangle,
    TrackingAmbiguous,
)
from .output import (
    write_bulk_texture_csv,
    write_energy_spectrum_csv,
    write_entanglement_csv,
    write_json,
    write_manifest,
    write_phase_diagram_csv,
)
from .realspace import slab_spectrum
from .topology import compute_invariants, phase_diagram

EXIT_OK = 0
EXIT_NUMERICAL = 2
EXIT_CONFIG = 3


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="oees", description=__doc__)
    p.add_argument("--version", action="version", version=f"oees {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="TOML run configuration")
    common.add_argument("--preset", metavar="NAME", help="bundled preset name")
    common.add_argument("--out", metavar="DIR", help="output directory")
    common.add_argument("--grid", type=int, metavar="N", help="override invariant grid size")
    common.add_argument("--threads", type=int, default=1, metavar="N",
                        help="worker threads for momentum sweeps")
    sub.add_parser("texture", parents=[common], help="bulk spin textures, both computation routes")
    sub.add_parser("invariants", parents=[common], help="Chern and skyrmion numbers")
    sp = sub.add_parser("spectra", parents=[common], help="slab / entanglement spectra")
    sp.add_argument("--which", choices=["slab", "es", "oees", "torus-suite"], default="es")
    sub.add_parser("phasediagram", parents=[common], help="(mu, Delta0) invariant sweep")
    return p


def _load(args) -> dict:
    overrides = {}
    if args.out:
        overrides["output"] = {"directory": args.out}
    if args.grid:
        overrides["numerics"] = {"invariant_grid": args.grid}
    if not args.config and not args.preset:
        raise ConfigError("either --config or --preset is required")
    return load_config(args.config, args.preset, overrides)


def cmd_texture(config: dict, threads: int = 1) -> int:
    spec = build_model(config)
    grid = texture_grid(config)
    out = Path(config["output"]["directory"])
    full = bulk_texture(spec, grid, config["numerics"]["filling"], source="projector")
    reduced = bulk_texture(spec, grid, config["numerics"]["filling"], source="oept")
    diff = float(np.abs(full.vectors - reduced.vectors).max())
    files = [
        write_bulk_texture_csv(out / "texture_full.csv", full, grid),
        write_bulk_texture_csv(out / "texture_oept.csv", reduced, grid),
        write_json(
            out / "texture_report.json",
            {
                "max_elementwise_difference": diff,
                "routes_agree_1e-12": diff < 1e-12,
                "min_spin_norm": full.min_norm,
                "grid": [grid.nx, grid.ny],
            },
        ),
    ]
    write_manifest(out, config, files, __version__)
    print(f"texture routes agree to {diff:.3e}; outputs in {out}/")
    return EXIT_OK


def cmd_invariants(config: dict, threads: int = 1) -> int:
    spec = build_model(config)
    grid = invariant_grid(config)
    report = compute_invariants(spec, grid, config["numerics"]["filling"])
    out = Path(config["output"]["directory"])
    files = [write_json(out / "invariants.json", report)]
    write_manifest(out, config, files, __version__)
    print(
        f"chern = {report['chern']} (residual {report['chern_residual']:.2e}), "
        f"skyrmion = {report['skyrmion']} (residual {report['skyrmion_residual']:.2e})"
    )
    if not report["quantized"]:
        print("quantization failure: residual exceeds threshold", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


def cmd_spectra(config: dict, which: str, threads: int = 1) -> int:
    spec = build_model(config)
    cut = build_cut(config)
    nx = config["geometry"]["nx"]
    nky = config["numerics"]["ky_points"]
    out = Path(config["output"]["directory"])
    files = []

    if which == "slab":
        series = slab_spectrum(spec, nx, nky, cut.boundary, keep_weights=True, threads=threads)
        files.append(write_energy_spectrum_csv(out / "slab_spectrum.csv", series))
        counts = count_chiral_modes(series, level=0.0)
        summary = {
            "level": 0.0,
            "net_crossings": counts.net_crossings,
            "total_crossings": counts.total_crossings,
            "by_end": counts.by_end,
            "max_energy_asymmetry": float(
                np.abs(series.values + series.values[:, ::-1]).max()
            ),
        }
        files.append(write_json(out / "slab_summary.json", summary))
    elif which in ("es", "oees"):
        enriched = which == "oees"

        def make(n):
            return entanglement_spectrum(spec, nx, n, cut, enriched=enriched, threads=threads)

        counts, series = count_with_refinement(
            make, nky, level=None, ends=cut.virtual_ends(nx)
        )
        files.append(write_entanglement_csv(out / f"{which}.csv", series, cut, nx))
        report = real_edge_anomaly_detect(series, cut, nx)
        summary = {
            "level": counts.level,
            "net_crossings": counts.net_crossings,
            "total_crossings": counts.total_crossings,
            "by_end": counts.by_end,
            "crossing_momenta": counts.crossing_momenta,
            "edge_bands": report["bands"],
        }
        files.append(write_json(out / f"{which}_summary.json", summary))
    else:  # torus-suite
        suite = torus_suite(spec, nx, nky, cut.layers, threads=threads)
        torus_cut = cut if cut.geometry == TORUS else CutSpec(geometry=TORUS, layers=cut.layers)
        purity = float(np.abs(suite["xi"].values - np.rint(suite["xi"].values)).max())
        summary = {"purity_deviation": purity}
        for name in ("xi_A", "xi_SA"):
            counts = count_chiral_modes(suite[name], level=None, ends=("left", "right"))
            summary[name] = {
                "net_crossings": counts.net_crossings,
                "total_crossings": counts.total_crossings,
                "by_end": counts.by_end,
            }
        counts_s = count_chiral_modes(suite["xi_S"], level=None, ends=None)
        summary["xi_S"] = {
            "net_crossings": counts_s.net_crossings,
            "total_crossings": counts_s.total_crossings,
        }
        for name, series in suite.items():
            files.append(write_entanglement_csv(out / f"torus_{name}.csv", series, torus_cut, nx))
        files.append(write_json(out / "torus_summary.json", summary))

    write_manifest(out, config, files, __version__)
    print(f"wrote {len(files)} file(s) to {out}/")
    return EXIT_OK


def cmd_phasediagram(config: dict, threads: int = 1) -> int:
    spec = build_model(config)
    mu_values, delta0_values = sweep_axes(config)
    grid = invariant_grid(config)
    diagram = phase_diagram(spec, mu_values, delta0_values, grid, config["numerics"]["filling"])
    out = Path(config["output"]["directory"])
    files = [write_phase_diagram_csv(out / "phase_diagram.csv", diagram)]

    ok = diagram.status == "ok"
    q_const = []
    for i in range(len(mu_values)):
        vals = set(diagram.skyrmion[i, ok[i]])
        q_const.append(len(vals) <= 1)
    widths = []
    dmu = mu_values[1] - mu_values[0] if len(mu_values) > 1 else 0.0
    for j in range(len(delta0_values)):
        widths.append(float((diagram.chern[:, j] != 0).sum() * dmu))
    narrowing = all(widths[j + 1] <= widths[j] + 1e-12 for j in range(len(widths) - 1))
    singular_mu = sorted({round(m, 9) for m, _ in diagram.singular_points})
    summary = {
        "skyrmion_independent_of_delta0": bool(all(q_const)),
        "chern_region_widths_by_delta0": widths,
        "chern_regions_narrow_with_delta0": bool(narrowing),
        "singular_mu_lines": singular_mu,
        "n_singular_points": len(diagram.singular_points),
    }
    files.append(write_json(out / "phase_diagram_summary.json", summary))
    write_manifest(out, config, files, __version__)
    print(f"phase diagram on {len(mu_values)}x{len(delta0_values)} points; outputs in {out}/")
    return EXIT_OK


_COMMANDS = {
    "texture": cmd_texture,
    "invariants": cmd_invariants,
    "phasediagram": cmd_phasediagram,
}


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        config = _load(args)
    except ConfigError as err:
        print(f"configuration error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        if args.command == "spectra":
            return cmd_spectra(config, args.which, args.threads)
        return _COMMANDS[args.command](config, args.threads)
    except (GapClosure, SingularSpin, SingularTriangle, TrackingAmbiguous) as err:
        print(f"numerical failure: {err}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ConfigError as err:
        print(f"configuration error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    except OeesError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
