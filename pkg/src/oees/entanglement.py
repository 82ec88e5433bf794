"""Free-fermion entanglement spectra from restricted correlation matrices,
and observable-enriched entanglement spectra (OEES) from their per-site
reduction.

The ground-state projector of a slab at fixed ky doubles as the equal-time
one-body correlator; restricting it to a contiguous block of layers A gives
the entanglement spectrum (eigenvalues in [0, 1]).  Applying the per-site
partial trace Tr_{Sbar}[U! rho_{r,r'} U] to every 4x4 site-pair block turns
the restricted correlator into the OEES matrix on A's spin space.  Its
diagonal blocks inherit the local particle content, so the OEES eigenvalues
live in [0, 2] with the spectral gap centered at 1.

Mode counting tracks in-gap states between adjacent momenta after
classifying each state by its weight near the two ends of A (real edge,
virtual cut, or bulk); opposite-chirality modes on different edges would
otherwise be untrackable where they pass through each other.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .errors import TrackingAmbiguous
from .models import ModelSpec
from .pauli import SPIN
from .realspace import (
    OPEN,
    PERIODIC,
    build_slab,
    extract_hoppings,
    slab_ground_state_projector,
)
from .series import SpectrumSeries, ordered_map, uniform_momenta

__all__ = [
    "CutSpec",
    "ChiralModeCount",
    "restricted_correlation",
    "oept_blocks",
    "entanglement_spectrum",
    "es_and_oees",
    "torus_suite",
    "count_chiral_modes",
    "real_edge_anomaly_detect",
]

CYLINDER = "cylinder"
TORUS = "torus"

#: a state belongs to an end of A when this fraction of its weight sits in the
#: quarter of layers nearest that end
EDGE_WEIGHT_THRESHOLD = 0.5


@dataclass(frozen=True)
class CutSpec:
    """Subsystem geometry: cylinder (open slab) or torus (periodic), with a
    contiguous layer range [start, stop) for subsystem A.

    ``layers=None`` selects the default partition: the first half of the slab
    for a cylinder, the second half of the torus for a virtual-only cut.
    """

    geometry: str = CYLINDER
    layers: Optional[Tuple[int, int]] = None

    def __post_init__(self):
        if self.geometry not in (CYLINDER, TORUS):
            raise ValueError(f"geometry must be {CYLINDER!r} or {TORUS!r}")

    @property
    def boundary(self) -> str:
        return OPEN if self.geometry == CYLINDER else PERIODIC

    def resolve(self, nx: int) -> Tuple[int, int]:
        if self.layers is None:
            return (0, nx // 2) if self.geometry == CYLINDER else (nx // 2, nx)
        start, stop = self.layers
        if not (0 <= start < stop <= nx) or stop - start >= nx:
            raise ValueError(f"subsystem range {self.layers} invalid for nx={nx}")
        return (start, stop)

    def end_types(self, nx: int) -> Dict[str, str]:
        """Physical meaning of A's two ends: 'real' edge or 'virtual' cut."""
        start, stop = self.resolve(nx)
        if self.geometry == TORUS:
            return {"left": "virtual", "right": "virtual"}
        return {
            "left": "real" if start == 0 else "virtual",
            "right": "real" if stop == nx else "virtual",
        }

    def virtual_ends(self, nx: int) -> Tuple[str, ...]:
        return tuple(end for end, typ in self.end_types(nx).items() if typ == "virtual")


def restricted_correlation(projector: np.ndarray, cut: CutSpec, nx: int) -> np.ndarray:
    """Sub-block of the ground-state projector on subsystem A's layers."""
    start, stop = cut.resolve(nx)
    sl = slice(4 * start, 4 * stop)
    return np.ascontiguousarray(projector[sl, sl])


def oept_blocks(matrix: np.ndarray, U: Optional[np.ndarray] = None) -> np.ndarray:
    """Per-site observable-enriched reduction of a site-blocked matrix.

    Every 4x4 site-pair block rho_{r,r'} is replaced by the 2x2 partial trace
    Tr_{Sbar}[U! rho_{r,r'} U]; no identity offsets are added anywhere, the
    diagonal contribution comes from the rotated blocks themselves.
    """
    if U is None:
        U = SPIN.U
    n4 = matrix.shape[0]
    if n4 % 4:
        raise ValueError("matrix size must be a multiple of 4")
    n = n4 // 4
    blocks = matrix.reshape(n, 4, n, 4)
    rotated = np.einsum("ax,ixjy,yb->iajb", U.conj().T, blocks, U)
    reduced = rotated.reshape(n, 2, 2, n, 2, 2)
    reduced = np.einsum("raisaj->risj", reduced)
    return np.ascontiguousarray(reduced.reshape(2 * n, 2 * n))


def _layer_weights(vectors: np.ndarray, n_layers: int, per_site: int) -> Dict[str, np.ndarray]:
    """End-localization fractions of eigenvector columns on an n_layers block."""
    w = (np.abs(vectors) ** 2).reshape(n_layers, per_site, -1).sum(axis=1)
    q = max(1, n_layers // 4)
    ten = min(10, n_layers)
    return {
        "left_quarter": w[:q].sum(axis=0),
        "right_quarter": w[-q:].sum(axis=0),
        "left10": w[:ten].sum(axis=0),
        "right10": w[-ten:].sum(axis=0),
    }


def _sweep_series(momenta, rows, label) -> SpectrumSeries:
    values = np.array([r[0] for r in rows])
    weights = {}
    if rows and rows[0][1] is not None:
        for key in rows[0][1]:
            weights[key] = np.array([r[1][key] for r in rows])
    return SpectrumSeries(momenta=np.asarray(momenta), values=values, weights=weights, label=label)


def entanglement_spectrum(
    spec: ModelSpec,
    nx: int = 200,
    ky_samples=201,
    cut: CutSpec = CutSpec(),
    enriched: bool = False,
    max_range: int = 2,
    threads: int = 1,
) -> SpectrumSeries:
    """ES (``enriched=False``) or OEES (``enriched=True``) over a ky sweep."""
    which = ("oees",) if enriched else ("es",)
    out = _entanglement_sweep(spec, nx, ky_samples, cut, which, max_range, threads)
    return out["oees" if enriched else "es"]


def es_and_oees(
    spec: ModelSpec,
    nx: int = 200,
    ky_samples=201,
    cut: CutSpec = CutSpec(),
    max_range: int = 2,
    threads: int = 1,
) -> Tuple[SpectrumSeries, SpectrumSeries]:
    """Both spectra from a single diagonalization sweep."""
    out = _entanglement_sweep(spec, nx, ky_samples, cut, ("es", "oees"), max_range, threads)
    return out["es"], out["oees"]


def _entanglement_sweep(spec, nx, ky_samples, cut, which, max_range, threads=1):
    hops = extract_hoppings(spec, max_range)
    kys = uniform_momenta(ky_samples) if np.isscalar(ky_samples) else np.asarray(ky_samples, float)
    start, stop = cut.resolve(nx)
    n_a = stop - start

    def one(ky):
        slab = build_slab(hops, ky, nx, cut.boundary)
        P = slab_ground_state_projector(slab)
        CA = restricted_correlation(P, cut, nx)
        row = {}
        if "es" in which:
            xi, vec = np.linalg.eigh(CA)
            row["es"] = (xi, _layer_weights(vec, n_a, 4))
        if "oees" in which:
            xi, vec = np.linalg.eigh(oept_blocks(CA))
            row["oees"] = (xi, _layer_weights(vec, n_a, 2))
        return row

    rows = ordered_map(one, kys, threads)
    return {name: _sweep_series(kys, [r[name] for r in rows], name) for name in which}


def torus_suite(
    spec: ModelSpec,
    nx: int = 200,
    ky_samples=201,
    cut_range: Optional[Tuple[int, int]] = None,
    max_range: int = 2,
    threads: int = 1,
) -> Dict[str, SpectrumSeries]:
    """Four spectra in full periodic boundary conditions.

    ``xi``: eigenvalues of the full ground-state projector (pure {0, 1});
    ``xi_A``: after a virtual cut; ``xi_S``: after the OEPT with no cut;
    ``xi_SA``: after both, which hosts one chiral crossing per virtual edge.
    """
    cut = CutSpec(geometry=TORUS, layers=cut_range)
    hops = extract_hoppings(spec, max_range)
    kys = uniform_momenta(ky_samples) if np.isscalar(ky_samples) else np.asarray(ky_samples, float)
    start, stop = cut.resolve(nx)
    n_a = stop - start

    def one(ky):
        slab = build_slab(hops, ky, nx, PERIODIC)
        P = slab_ground_state_projector(slab)
        CA = restricted_correlation(P, cut, nx)
        xi_a, vec_a = np.linalg.eigh(CA)
        xi_sa, vec_sa = np.linalg.eigh(oept_blocks(CA))
        return {
            "xi": (np.linalg.eigvalsh(P), None),
            "xi_A": (xi_a, _layer_weights(vec_a, n_a, 4)),
            "xi_S": (np.linalg.eigvalsh(oept_blocks(P)), None),
            "xi_SA": (xi_sa, _layer_weights(vec_sa, n_a, 2)),
        }

    rows = ordered_map(one, kys, threads)
    return {
        name: _sweep_series(kys, [r[name] for r in rows], name)
        for name in ("xi", "xi_A", "xi_S", "xi_SA")
    }


@dataclass
class ChiralModeCount:
    """Net and total spectral-flow crossings through a level over one ky period."""

    net_crossings: int
    total_crossings: int
    crossing_momenta: List[float]
    level: float
    by_end: Dict[str, int] = field(default_factory=dict)
    events: List[dict] = field(default_factory=list)


def _classify(weights, idx, col):
    if not weights:
        return "any"
    if weights["left_quarter"][col, idx] > EDGE_WEIGHT_THRESHOLD:
        return "left"
    if weights["right_quarter"][col, idx] > EDGE_WEIGHT_THRESHOLD:
        return "right"
    return "bulk"


def _count_by_set_flow(series: SpectrumSeries, level: float) -> ChiralModeCount:
    """Crossing count for unclassifiable spectra: the number of eigenvalues
    above the level changes between columns exactly when states cross it."""
    above = (series.values > level).sum(axis=1)
    n = series.n_momenta
    flows = np.roll(above, -1) - above
    momenta = [float(series.momenta[i]) for i in range(n) if flows[i] != 0]
    events = [
        {"ky": float(series.momenta[i]), "sign": int(np.sign(flows[i])), "end": "any"}
        for i in range(n)
        if flows[i] != 0
    ]
    return ChiralModeCount(
        net_crossings=int(flows.sum()),
        total_crossings=int(np.abs(flows).sum()),
        crossing_momenta=momenta,
        level=float(level),
        by_end={"any": int(flows.sum())},
        events=events,
    )


def count_chiral_modes(
    series: SpectrumSeries,
    level: Optional[float] = 0.5,
    ends: Optional[Sequence[str]] = None,
    window: Optional[float] = None,
    jump_tol: Optional[float] = None,
    max_bridge: int = 2,
) -> ChiralModeCount:
    """Count chiral modes as signed level crossings of tracked in-gap states.

    ``level=None`` uses the spectral midpoint.  When the series carries edge
    weights, states are classified to the ends of A and only the classes in
    ``ends`` are counted (default: left and right, excluding bulk); matching
    is done per class so that counter-propagating modes on opposite edges do
    not shadow each other.  Isolated sample dropouts (a state that briefly
    fails classification, e.g. at an exact level-crossing degeneracy) are
    bridged over up to ``max_bridge`` columns.  A matched pair that crosses
    the level with a jump larger than ``jump_tol`` raises
    :class:`TrackingAmbiguous` (resample more densely).
    """
    if level is None:
        level = series.midpoint()
    span = series.span()
    if window is None:
        window = 0.45 * span
    if jump_tol is None:
        jump_tol = 0.25 * window
    if not series.weights:
        return _count_by_set_flow(series, level)
    if ends is None:
        ends = ("left", "right")
    values = series.values
    n = series.n_momenta
    net = 0
    momenta = []
    events = []
    by_end: Dict[str, int] = {e: 0 for e in ends}
    for end in ends:
        columns = []
        for i in range(n):
            col = sorted(
                values[i, idx]
                for idx in range(values.shape[1])
                if abs(values[i, idx] - level) < window
                and _classify(series.weights, idx, i) == end
            )
            columns.append(col)
        filled = [i for i in range(n) if columns[i]]
        if len(filled) < 2:
            continue
        deep = window - jump_tol
        for t, i in enumerate(filled):
            j = filled[(t + 1) % len(filled)]
            gap = (j - i) % n
            if gap == 0 or gap > max_bridge:
                continue
            remaining = list(columns[j])
            orphans = []
            for x in columns[i]:
                if remaining:
                    # prefer a same-side partner: in dense regions nearest-value
                    # matching across the level is relabeling noise, not flow
                    dists = [abs(y - x) for y in remaining]
                    same = [
                        k
                        for k, y in enumerate(remaining)
                        if (x - level) * (y - level) >= 0 and dists[k] <= jump_tol
                    ]
                    if same:
                        k_best = min(same, key=lambda k: dists[k])
                    else:
                        k_best = int(np.argmin(dists))
                    if dists[k_best] <= jump_tol:
                        y = remaining.pop(k_best)
                        if (x - level) * (y - level) < 0:
                            sgn = 1 if y > x else -1
                            net += sgn
                            by_end[end] += sgn
                            step = gap * 2 * np.pi / n
                            ky_cross = float(
                                series.momenta[i] + step * (level - x) / (y - x)
                            )
                            momenta.append(ky_cross)
                            events.append({"ky": ky_cross, "sign": sgn, "end": end})
                        continue
                orphans.append(x)
            # an unmatched state deep inside the window facing an opposite-side
            # deep orphan is an untrackable crossing, not a band endpoint
            for x in orphans:
                if abs(x - level) >= deep:
                    continue
                for y in remaining:
                    if abs(y - level) < deep and (x - level) * (y - level) < 0:
                        raise TrackingAmbiguous(
                            f"untrackable level crossing (jump {abs(y - x):.3g} > "
                            f"{jump_tol:.3g}) near ky = {series.momenta[i]:+.4f}; "
                            "increase the ky resolution"
                        )
    return ChiralModeCount(
        net_crossings=net,
        total_crossings=len(events),
        crossing_momenta=momenta,
        level=float(level),
        by_end=by_end,
        events=events,
    )


def count_with_refinement(
    make_series,
    ky_samples: int,
    max_refinements: int = 4,
    **count_kwargs,
) -> Tuple[ChiralModeCount, SpectrumSeries]:
    """Re-run a sweep with doubled ky resolution while tracking stays ambiguous.

    ``make_series(n)`` must build the spectrum series at n momenta.
    """
    n = int(ky_samples)
    last_err = None
    for _ in range(max_refinements + 1):
        series = make_series(n)
        try:
            return count_chiral_modes(series, **count_kwargs), series
        except TrackingAmbiguous as err:
            last_err = err
            n *= 2
    raise last_err


def _contiguous_runs(flags: np.ndarray) -> List[np.ndarray]:
    """Index runs of True in a circular array, longest first."""
    n = len(flags)
    if flags.all():
        return [np.arange(n)]
    runs = []
    if not flags.any():
        return runs
    # rotate so the scan starts at a False entry, then split
    start = int(np.where(~flags)[0][0])
    order = (np.arange(n) + start) % n
    current = []
    for pos in order:
        if flags[pos]:
            current.append(pos)
        elif current:
            runs.append(np.array(current))
            current = []
    if current:
        runs.append(np.array(current))
    return sorted(runs, key=len, reverse=True)


def real_edge_anomaly_detect(
    series: SpectrumSeries,
    cut: CutSpec,
    nx: int,
    level: Optional[float] = None,
    window: Optional[float] = None,
) -> dict:
    """Identify in-gap bands by edge, with localization and chirality.

    For each end of A, the in-gap state nearest the level is tracked over its
    contiguous existence range; the band's chirality is the sign of its net
    spectral drift along that run.  Real-edge bands are the anomalous states
    absent in full periodic geometry.
    """
    if level is None:
        level = series.midpoint()
    if window is None:
        window = 0.45 * series.span()
    end_types = cut.end_types(nx)
    ten_key = {"left": "left10", "right": "right10"}
    quarter_key = {"left": "left_quarter", "right": "right_quarter"}
    bands = []
    n = series.n_momenta
    for end, end_type in end_types.items():
        present = np.zeros(n, dtype=bool)
        value = np.full(n, np.nan)
        w10 = np.zeros(n)
        wq = np.zeros(n)
        for i in range(n):
            cand = [
                idx
                for idx in range(series.n_bands)
                if abs(series.values[i, idx] - level) < window
                and _classify(series.weights, idx, i) == end
            ]
            if not cand:
                continue
            idx = min(cand, key=lambda t: abs(series.values[i, t] - level))
            present[i] = True
            value[i] = series.values[i, idx]
            w10[i] = series.weights[ten_key[end]][i, idx]
            wq[i] = series.weights[quarter_key[end]][i, idx]
        runs = _contiguous_runs(present)
        if not runs:
            continue
        run = runs[0]
        drift = float(value[run[-1]] - value[run[0]])
        bands.append(
            {
                "end": end,
                "edge_type": end_type,
                "existence_fraction": float(present.mean()),
                "max_w10": float(w10[present].max()),
                "max_quarter_weight": float(wq[present].max()),
                "chirality": int(np.sign(drift)) if drift != 0 else 0,
                "drift": drift,
                "ky_range": [float(series.momenta[run[0]]), float(series.momenta[run[-1]])],
            }
        )
    return {
        "level": float(level),
        "bands": bands,
        "real_edge_bands": [b for b in bands if b["edge_type"] == "real"],
        "virtual_edge_bands": [b for b in bands if b["edge_type"] == "virtual"],
    }
