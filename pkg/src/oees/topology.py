"""Topological invariants: skyrmion number, total Chern number, and the
block-decomposition relations between them.

Orientation convention
----------------------
``winding_number`` accumulates signed solid angles with the plaquette
circulation fixed once for the whole package.  The Chern number uses the
standard link-variable (plaquette field strength) construction.  The relative
orientation of the two sums is chosen so that the block-decomposable family
satisfies C = -2 Q exactly; with that choice the closed-form relations

    C      =  wind(h + Delta0 d) + wind(h - Delta0 d)
    Q      = -wind( (h+Delta0 d)^ + (h-Delta0 d)^ )
    Q(a)   =  wind( (h+Delta0 d)^ + a (h-Delta0 d)^ )   constant over a in [0,1]

hold verbatim, where ^ denotes pointwise normalization.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Union

import numpy as np

from .bulk import BZGrid, SPIN_NORM_TOL, bulk_texture, occupied_frames, SpinTexture
from .errors import GapClosure, SingularSpin, SingularTriangle
from .models import ModelSpec, Qwz, block_decompose
from dataclasses import replace as _replace

__all__ = [
    "InvariantResult",
    "PhaseDiagram",
    "winding_number",
    "skyrmion_number",
    "chern_number",
    "analytic_chern",
    "analytic_skyrmion",
    "homotopy_interpolation_check",
    "phase_diagram",
    "compute_invariants",
]

#: a quantized invariant must sit within this distance of an integer
RESIDUAL_TOL = 1e-2
#: degenerate spherical-triangle detector
TRIANGLE_TOL = 1e-12


@dataclass(frozen=True)
class InvariantResult:
    """Integer invariant with its raw accumulator and quantization residual."""

    value: int
    raw: float
    residual: float
    grid: Optional[BZGrid] = None

    @property
    def quantized(self) -> bool:
        return self.residual < RESIDUAL_TOL

    def __int__(self) -> int:
        return self.value


def _result(raw: float, grid: Optional[BZGrid]) -> InvariantResult:
    value = int(np.rint(raw))
    return InvariantResult(value=value, raw=float(raw), residual=abs(raw - value), grid=grid)


def _solid_angles(a, b, c):
    """Berg-Luscher signed solid angle of unit-vector triangles (vectorized)."""
    num = np.einsum("...i,...i->...", a, np.cross(b, c))
    den = (
        1.0
        + np.einsum("...i,...i->...", a, b)
        + np.einsum("...i,...i->...", b, c)
        + np.einsum("...i,...i->...", c, a)
    )
    bad = (np.abs(den) < TRIANGLE_TOL) & (np.abs(num) < TRIANGLE_TOL)
    if bad.any():
        raise SingularTriangle(
            f"{int(bad.sum())} degenerate spherical triangle(s); "
            "the texture passes through antipodal or vanishing configurations"
        )
    return 2.0 * np.arctan2(num, den)


def winding_number(vectors: np.ndarray, grid: Optional[BZGrid] = None) -> InvariantResult:
    """Degree of a periodic unit-vector field sampled on an (nx, ny) torus grid.

    Each plaquette is split into two spherical triangles whose solid angles
    are summed exactly (compensated), so the result is an exact integer for
    any texture that stays away from degenerate triangles.
    """
    v = np.asarray(vectors, dtype=float)
    norms = np.linalg.norm(v, axis=-1)
    if norms.min() < SPIN_NORM_TOL:
        raise SingularTriangle("vector field passes through zero; winding undefined")
    v = v / norms[..., None]
    a = v
    b = np.roll(v, -1, axis=0)
    c = np.roll(np.roll(v, -1, axis=0), -1, axis=1)
    d = np.roll(v, -1, axis=1)
    # package-wide circulation: (a, c, b) and (a, d, c)
    omega = _solid_angles(a, c, b) + _solid_angles(a, d, c)
    raw = math.fsum(omega.ravel().tolist()) / (4.0 * np.pi)
    return _result(raw, grid)


def skyrmion_number(texture: SpinTexture) -> InvariantResult:
    """Topological charge of the winding in a normalized spin texture."""
    if not texture.normalized:
        if texture.norms.min() < SPIN_NORM_TOL:
            raise SingularSpin(
                f"texture has |<S>| = {texture.norms.min():.3e}; cannot normalize"
            )
    return winding_number(texture.vectors, grid=texture.grid)


def chern_number(spec: ModelSpec, grid: BZGrid = BZGrid(256, 256), filling: int = 2) -> InvariantResult:
    """Total Chern number of the occupied manifold via link variables.

    Uses unit-modulus determinants of neighbouring occupied-frame overlaps;
    the plaquette field strength is gauge invariant and integer-quantized on
    any grid fine enough to keep each plaquette flux within (-pi, pi).
    """
    frames = occupied_frames(spec, grid, filling)

    def link(axis):
        shifted = np.roll(frames, -1, axis=axis)
        overlap = np.einsum("xyai,xyaj->xyij", frames.conj(), shifted)
        det = np.linalg.det(overlap)
        mod = np.abs(det)
        if mod.min() < 1e-12:
            raise GapClosure("vanishing link variable; occupied frame is discontinuous")
        return det / mod

    ux, uy = link(0), link(1)
    flux = np.angle(ux * np.roll(uy, -1, axis=0) * np.conj(np.roll(ux, -1, axis=1)) * np.conj(uy))
    raw = math.fsum(flux.ravel().tolist()) / (2.0 * np.pi)
    return _result(raw, grid)


def _block_vectors(spec: ModelSpec, grid: BZGrid):
    """(h + Delta0 d, h - Delta0 d) on the grid; errors mirror block_decompose."""
    # trigger the availability check once with scalars
    block_decompose(spec, 0.0, 0.0)
    KX, KY = grid.mesh()
    h = spec.h(KX, KY)
    d = spec.delta0 * spec.d(KX, KY)
    return h + d, h - d


def _normalized(v: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(v, axis=-1)
    if norms.min() < SPIN_NORM_TOL:
        raise SingularTriangle("block vector vanishes on the grid")
    return v / norms[..., None]


def analytic_chern(spec: ModelSpec, grid: BZGrid = BZGrid(256, 256)) -> InvariantResult:
    """Closed-form total Chern number wind(h + Delta0 d) + wind(h - Delta0 d)."""
    vp, vm = _block_vectors(spec, grid)
    wp = winding_number(vp, grid)
    wm = winding_number(vm, grid)
    raw = wp.raw + wm.raw
    return _result(raw, grid)


def analytic_skyrmion(spec: ModelSpec, grid: BZGrid = BZGrid(256, 256)) -> InvariantResult:
    """Closed-form skyrmion number -wind((h+Delta0 d)^ + (h-Delta0 d)^)."""
    vp, vm = _block_vectors(spec, grid)
    s = _normalized(vp) + _normalized(vm)
    w = winding_number(s, grid)
    return _result(-w.raw, grid)


def homotopy_interpolation_check(
    spec: ModelSpec,
    grid: BZGrid = BZGrid(256, 256),
    alphas: Sequence[float] = (0.0, 0.25, 0.5, 0.75, 1.0),
) -> List[InvariantResult]:
    """Winding of (h+Delta0 d)^ + alpha (h-Delta0 d)^ for each alpha.

    The interpolated field cannot vanish for alpha < 1, so the winding is
    constant along the list whenever the alpha = 1 endpoint is regular.
    """
    vp, vm = _block_vectors(spec, grid)
    np_, nm_ = _normalized(vp), _normalized(vm)
    return [winding_number(np_ + float(a) * nm_, grid) for a in alphas]


@dataclass
class PhaseDiagram:
    """Invariants on a (mu, Delta0) parameter grid with per-point status."""

    mu_values: np.ndarray
    delta0_values: np.ndarray
    chern: np.ndarray
    skyrmion: np.ndarray
    min_spin_norm: np.ndarray
    status: np.ndarray
    singular_points: List[tuple] = field(default_factory=list)


def phase_diagram(
    spec_template: Union[ModelSpec, Callable[[float, float], ModelSpec]],
    mu_values: Sequence[float],
    delta0_values: Sequence[float],
    grid: BZGrid = BZGrid(96, 96),
    filling: int = 2,
) -> PhaseDiagram:
    """Sweep (mu, Delta0); transition points are recorded, never fabricated.

    ``spec_template`` is either a ModelSpec with a Qwz normal state (mu and
    delta0 are replaced per point) or a factory ``(mu, delta0) -> ModelSpec``.
    """
    if isinstance(spec_template, ModelSpec):
        if not isinstance(spec_template.normal_state, Qwz):
            raise ValueError("ModelSpec template sweeps require a Qwz normal state")

        def factory(mu, delta0):
            return _replace(
                spec_template,
                normal_state=_replace(spec_template.normal_state, mu=mu),
                delta0=delta0,
            )

    else:
        factory = spec_template

    mu_values = np.asarray(list(mu_values), dtype=float)
    delta0_values = np.asarray(list(delta0_values), dtype=float)
    shape = (len(mu_values), len(delta0_values))
    chern = np.zeros(shape, dtype=int)
    skyrm = np.zeros(shape, dtype=int)
    min_norm = np.full(shape, np.nan)
    status = np.full(shape, "ok", dtype=object)
    singular = []

    for i, mu in enumerate(mu_values):
        for j, d0 in enumerate(delta0_values):
            spec = factory(float(mu), float(d0))
            try:
                tex = bulk_texture(spec, grid, filling, normalize=True)
                min_norm[i, j] = tex.min_norm
                q = skyrmion_number(tex)
                c = chern_number(spec, grid, filling)
            except (GapClosure, SingularSpin, SingularTriangle) as err:
                status[i, j] = type(err).__name__
                singular.append((float(mu), float(d0)))
                continue
            if not (q.quantized and c.quantized):
                status[i, j] = "unquantized"
                singular.append((float(mu), float(d0)))
                continue
            chern[i, j] = c.value
            skyrm[i, j] = q.value
    return PhaseDiagram(
        mu_values=mu_values,
        delta0_values=delta0_values,
        chern=chern,
        skyrmion=skyrm,
        min_spin_norm=min_norm,
        status=status,
        singular_points=singular,
    )


def compute_invariants(spec: ModelSpec, grid: BZGrid = BZGrid(256, 256), filling: int = 2) -> dict:
    """Chern and skyrmion numbers with raw values, residuals and cross-checks."""
    tex = bulk_texture(spec, grid, filling, normalize=True)
    q = skyrmion_number(tex)
    c = chern_number(spec, grid, filling)
    report = {
        "chern": c.value,
        "skyrmion": q.value,
        "chern_raw": c.raw,
        "skyrmion_raw": q.raw,
        "chern_residual": c.residual,
        "skyrmion_residual": q.residual,
        "min_spin_norm": tex.min_norm,
        "grid": [grid.nx, grid.ny],
        "quantized": bool(c.quantized and q.quantized),
    }
    if spec.block_diagonalizable and spec.delta0 != 0.0:
        try:
            report["chern_analytic"] = analytic_chern(spec, grid).value
            report["skyrmion_analytic"] = analytic_skyrmion(spec, grid).value
            report["cross_checks_agree"] = bool(
                report["chern_analytic"] == c.value and report["skyrmion_analytic"] == q.value
            )
        except SingularTriangle:
            report["cross_checks_agree"] = None
    return report
