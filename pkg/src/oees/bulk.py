"""Brillouin-zone sampling, ground-state projectors, and the momentum-space
observable-enriched partial trace (OEPT).

The OEPT maps the occupied-band density matrix rho_GS = P / Tr P onto the
two-level state

    rho_s = (I_2 + <S>.sigma) / 2,      <S_mu> = Tr[rho_GS S_mu],

which preserves every spin expectation value by construction.  When the spin
sector is separated with the rotation U, the same object is an ordinary
partial trace, rho_s ~ Tr_{Sbar}[U! P U]; both routes are implemented and
agree to machine precision.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import GapClosure, SingularSpin
from .models import ModelSpec, bloch_hamiltonian
from .pauli import PAULI, SPIN, SpinRepresentation

__all__ = [
    "BZGrid",
    "GroundStateProjector",
    "ReducedSpinState",
    "SpinTexture",
    "ground_state_projector",
    "spin_expectation",
    "oept_bulk",
    "oept_rotated",
    "occupied_frames",
    "bulk_texture",
]

#: occupied-manifold degeneracy tolerance (relative to bandwidth)
GAP_TOL = 1e-10
#: below this norm a spin vector cannot be normalized
SPIN_NORM_TOL = 1e-8


@dataclass(frozen=True)
class BZGrid:
    """Uniform nx x ny sampling of [-pi, pi)^2 (endpoint excluded, spacing 2*pi/n)."""

    nx: int = 101
    ny: int = 101

    def __post_init__(self):
        if self.nx < 4 or self.ny < 4:
            raise ValueError("BZGrid needs at least 4 samples per axis")

    @property
    def kx(self) -> np.ndarray:
        return -np.pi + 2 * np.pi * np.arange(self.nx) / self.nx

    @property
    def ky(self) -> np.ndarray:
        return -np.pi + 2 * np.pi * np.arange(self.ny) / self.ny

    def mesh(self):
        """(KX, KY) arrays of shape (nx, ny), axis 0 along kx."""
        return np.meshgrid(self.kx, self.ky, indexing="ij")

    def doubled(self) -> "BZGrid":
        return BZGrid(2 * self.nx, 2 * self.ny)


@dataclass(frozen=True)
class GroundStateProjector:
    """Gauge-independent projector onto the lowest ``n_occ`` bands at one momentum."""

    P: np.ndarray
    n_occ: int
    k: Optional[tuple] = None


@dataclass(frozen=True)
class ReducedSpinState:
    """Unit-trace 2x2 state carrying the per-particle spin expectation of the ground state."""

    rho_s: np.ndarray
    s_expect: np.ndarray
    k: Optional[tuple] = None


@dataclass(frozen=True)
class SpinTexture:
    """Spin expectation vectors on a BZ grid (or an arbitrary site list).

    ``vectors`` has shape grid + (3,).  ``norms`` keeps the unnormalized
    magnitudes |<S>| even when ``normalized`` is True; their minimum is the
    type-II transition diagnostic.
    """

    vectors: np.ndarray
    normalized: bool
    norms: np.ndarray
    grid: Optional[BZGrid] = None

    @property
    def min_norm(self) -> float:
        return float(self.norms.min())


def ground_state_projector(H: np.ndarray, filling: int = 2, k=None) -> GroundStateProjector:
    """Projector onto the ``filling`` lowest bands of a Hermitian H.

    Raises :class:`GapClosure` when the gap between bands ``filling`` and
    ``filling + 1`` is below the degeneracy tolerance, which signals a
    phase-transition point rather than a numerical problem.
    """
    H = np.asarray(H)
    n = H.shape[-1]
    if not 1 <= filling <= n - 1:
        raise ValueError(f"filling must lie in [1, {n - 1}]")
    w, v = np.linalg.eigh(H)
    bandwidth = max(float(w[-1] - w[0]), 1.0)
    if w[filling] - w[filling - 1] < GAP_TOL * bandwidth:
        raise GapClosure(
            f"bands {filling} and {filling + 1} are degenerate"
            + (f" at k = {k}" if k is not None else ""),
            k=k,
        )
    occ = v[:, :filling]
    return GroundStateProjector(P=occ @ occ.conj().T, n_occ=filling, k=k)


def spin_expectation(P: GroundStateProjector, S: SpinRepresentation = SPIN) -> np.ndarray:
    """Occupied-state spin sum (Tr[P S_1], Tr[P S_2], Tr[P S_3]) as a real 3-vector."""
    s = np.einsum("ab,mba->m", P.P, S.S)
    return s.real


def oept_bulk(P: GroundStateProjector, S: SpinRepresentation = SPIN) -> ReducedSpinState:
    """Observable-enriched partial trace of the ground state at one momentum.

    The reduced state is built from the per-particle spin expectation
    <S> = Tr[P S] / n_occ, so rho_s = (I_2 + <S>.sigma)/2 is a valid density
    matrix (eigenvalues (1 +- |<S>|)/2) regardless of separability, and
    Tr[rho_s sigma_mu] = Tr[(P / n_occ) S_mu] exactly.
    """
    s = spin_expectation(P, S) / P.n_occ
    rho = 0.5 * (np.eye(2, dtype=complex) + np.einsum("i,ijk->jk", s, PAULI))
    return ReducedSpinState(rho_s=rho, s_expect=s, k=P.k)


def oept_rotated(P: GroundStateProjector, U: Optional[np.ndarray] = None) -> np.ndarray:
    """Partial trace over the non-spin factor of the rotated projector.

    Returns Tr_{Sbar}[U! P U], a 2x2 Hermitian matrix with trace n_occ that
    satisfies Tr[result sigma_mu] = Tr[P S_mu] identically.  Dividing by
    n_occ reproduces :func:`oept_bulk`.
    """
    if U is None:
        U = SPIN.U
    rotated = U.conj().T @ P.P @ U
    # factor layout after U: (Sbar, S); trace out the slow factor
    blocks = rotated.reshape(2, 2, 2, 2)
    return np.einsum("aiaj->ij", blocks)


def occupied_frames(spec: ModelSpec, grid: BZGrid, filling: int = 2) -> np.ndarray:
    """Occupied eigenvector frames on the grid, shape (nx, ny, 4, filling).

    Raises :class:`GapClosure` (with the offending momentum) when the gap
    between bands ``filling`` and ``filling + 1`` closes anywhere on the grid.
    """
    KX, KY = grid.mesh()
    H = bloch_hamiltonian(spec, KX, KY)
    w, v = np.linalg.eigh(H)
    gaps = w[..., filling] - w[..., filling - 1]
    bandwidth = max(float(w.max() - w.min()), 1.0)
    if gaps.min() < GAP_TOL * bandwidth:
        i, j = np.unravel_index(np.argmin(gaps), gaps.shape)
        raise GapClosure(
            f"gap closes at k = ({KX[i, j]:+.6f}, {KY[i, j]:+.6f})",
            k=(float(KX[i, j]), float(KY[i, j])),
        )
    return v[..., :, :filling]


def _batched_projectors(spec: ModelSpec, grid: BZGrid, filling: int):
    occ = occupied_frames(spec, grid, filling)
    return occ @ np.conj(np.swapaxes(occ, -1, -2))


def _texture_from_projectors(P: np.ndarray, source: str) -> np.ndarray:
    if source == "projector":
        return np.einsum("xyab,mba->xym", P, SPIN.S).real
    if source == "oept":
        U = SPIN.U
        rotated = np.einsum("ab,xybc,cd->xyad", U.conj().T, P, U)
        reduced = np.einsum("xyaiaj->xyij", rotated.reshape(P.shape[:2] + (2, 2, 2, 2)))
        return np.einsum("xyab,mba->xym", reduced, PAULI).real
    raise ValueError(f"unknown texture source {source!r}")


def bulk_texture(
    spec: ModelSpec,
    grid: BZGrid = BZGrid(),
    filling: int = 2,
    normalize: bool = False,
    source: str = "projector",
) -> SpinTexture:
    """Ground-state spin texture <S(k)> over the Brillouin zone.

    ``source`` selects the computation route: ``"projector"`` evaluates
    Tr[P(k) S_mu] directly, ``"oept"`` goes through the rotated partial
    trace.  The two agree to machine precision, which is itself a tested
    invariant of the reduction.

    With ``normalize=True`` the vectors are scaled to unit length and a
    :class:`SingularSpin` error marks textures that pass through zero
    (type-II transition points).
    """
    P = _batched_projectors(spec, grid, filling)
    s = _texture_from_projectors(P, source)
    norms = np.linalg.norm(s, axis=-1)
    if normalize:
        if norms.min() < SPIN_NORM_TOL:
            i, j = np.unravel_index(np.argmin(norms), norms.shape)
            KX, KY = grid.mesh()
            raise SingularSpin(
                f"|<S>| = {norms[i, j]:.3e} at k = ({KX[i, j]:+.6f}, {KY[i, j]:+.6f})",
                k=(float(KX[i, j]), float(KY[i, j])),
            )
        s = s / norms[..., None]
    return SpinTexture(vectors=s, normalized=normalize, norms=norms, grid=grid)
