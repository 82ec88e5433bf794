"""Real-space geometries: hopping extraction from Bloch data, slab and torus
Hamiltonians with one good momentum, full-open-boundary textures.

Layer/orbital layout everywhere: site-major, ``index = 4*x + orbital`` for
slabs and ``index = 4*(x*Ny + y) + orbital`` for open flakes.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Tuple

import numpy as np

from .bulk import SpinTexture
from .errors import GapClosure, RangeTooSmall
from .models import ModelSpec, bloch_hamiltonian
from .pauli import SPIN
from .series import SpectrumSeries, ordered_map, uniform_momenta

__all__ = [
    "HoppingSet",
    "SlabHamiltonian",
    "LocalizationProfile",
    "extract_hoppings",
    "build_slab",
    "slab_spectrum",
    "slab_ground_state_projector",
    "localization_profile",
    "realspace_texture",
    "boundary_circulation",
]

OPEN = "open"
PERIODIC = "periodic"

#: hopping blocks below this magnitude are dropped
HOPPING_CUTOFF = 1e-12
#: Fourier round-trip reconstruction must be at least this accurate
ROUNDTRIP_TOL = 1e-10


@dataclass(frozen=True)
class HoppingSet:
    """Finite map from integer offsets (dx, dy) to 4x4 hopping blocks.

    Hermiticity requires t(-delta) = t(delta)!; violated tables are rejected.
    """

    entries: Dict[Tuple[int, int], np.ndarray]

    def __post_init__(self):
        for (dx, dy), t in self.entries.items():
            partner = self.entries.get((-dx, -dy))
            if partner is None or np.abs(partner - t.conj().T).max() > 1e-10:
                raise ValueError(f"hopping table violates t(-d) = t(d)! at offset {(dx, dy)}")

    @property
    def range_x(self) -> int:
        return max(abs(dx) for dx, _ in self.entries)

    def bloch(self, kx, ky) -> np.ndarray:
        """Reassemble H(k) = sum_delta t_delta e^{i k.delta}."""
        kx = np.asarray(kx, dtype=float)
        ky = np.asarray(ky, dtype=float)
        out = np.zeros(np.broadcast(kx, ky).shape + (4, 4), dtype=complex)
        for (dx, dy), t in self.entries.items():
            out += np.exp(1j * (kx * dx + ky * dy))[..., None, None] * t
        return out


def extract_hoppings(spec: ModelSpec, max_range: int = 2, n_check: int = 100, seed: int = 0) -> HoppingSet:
    """Inverse Fourier transform of the Bloch matrix onto a finite hopping set.

    Samples H(k) on a grid fine enough for offsets up to ``max_range`` and
    verifies the reconstruction at random momenta; failure (aliasing from
    longer-ranged terms) raises :class:`RangeTooSmall`.
    """
    n = 4 * (max_range + 1)
    k = 2.0 * np.pi * np.arange(n) / n
    KX, KY = np.meshgrid(k, k, indexing="ij")
    Hk = bloch_hamiltonian(spec, KX, KY)
    entries = {}
    for dx in range(-max_range, max_range + 1):
        for dy in range(-max_range, max_range + 1):
            phase = np.exp(-1j * (KX * dx + KY * dy))
            t = np.einsum("xy,xyab->ab", phase, Hk) / n**2
            if np.abs(t).max() > HOPPING_CUTOFF:
                entries[(dx, dy)] = t
    hops = HoppingSet(entries)
    rng = np.random.default_rng(seed)
    kx = rng.uniform(-np.pi, np.pi, n_check)
    ky = rng.uniform(-np.pi, np.pi, n_check)
    err = np.abs(hops.bloch(kx, ky) - bloch_hamiltonian(spec, kx, ky)).max()
    if err > ROUNDTRIP_TOL:
        raise RangeTooSmall(
            f"reconstruction error {err:.2e} at max_range={max_range}; "
            "the model has longer-ranged hoppings"
        )
    return hops


@dataclass(frozen=True)
class SlabHamiltonian:
    """4*Nx x 4*Nx Hamiltonian at fixed ky, open or periodic in x."""

    ky: float
    nx: int
    matrix: np.ndarray
    boundary: str


_MIX_CACHE: Dict[int, np.ndarray] = {}
#: below this size the plain solver is never the bottleneck
_MIX_MIN_SIZE = 256


def _mixing_unitary(n: int) -> np.ndarray:
    if n not in _MIX_CACHE:
        rng = np.random.default_rng(0x5EED + n)
        a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        q, _ = np.linalg.qr(a)
        _MIX_CACHE.clear()  # keep at most one size resident
        _MIX_CACHE[n] = q
    return _MIX_CACHE[n]


def slab_eigh(matrix: np.ndarray, vectors: bool = True):
    """Eigendecomposition of a slab Hamiltonian.

    The raw slab matrices (mostly exact zeros with repeated blocks) can hit a
    pathologically slow path in the dense eigensolver; conjugating by a fixed
    random unitary first restores generic-case speed without changing any
    eigenvalue, and the eigenvectors are rotated back exactly.
    """
    n = matrix.shape[0]
    if n < _MIX_MIN_SIZE:
        return np.linalg.eigh(matrix) if vectors else np.linalg.eigvalsh(matrix)
    q = _mixing_unitary(n)
    mixed = q @ matrix @ q.conj().T
    if not vectors:
        return np.linalg.eigvalsh(mixed)
    w, v = np.linalg.eigh(mixed)
    return w, q.conj().T @ v


def build_slab(hoppings: HoppingSet, ky: float, nx: int, boundary: str = OPEN) -> SlabHamiltonian:
    """Slab Hamiltonian H[x, x + dx] += t_(dx, dy) e^{i ky dy}.

    Open boundaries drop out-of-range blocks; periodic boundaries wrap them
    modulo nx (any nx >= 1: a single-ring slab reduces to the summed Bloch
    matrix).
    """
    if boundary not in (OPEN, PERIODIC):
        raise ValueError(f"boundary must be {OPEN!r} or {PERIODIC!r}")
    if boundary == OPEN and nx < 2 * hoppings.range_x + 1:
        raise ValueError(f"open slab needs nx >= {2 * hoppings.range_x + 1}")
    H = np.zeros((4 * nx, 4 * nx), dtype=complex)
    for (dx, dy), t in hoppings.entries.items():
        blk = t * np.exp(1j * ky * dy)
        for x in range(nx):
            xp = x + dx
            if boundary == PERIODIC:
                xp %= nx
            elif not 0 <= xp < nx:
                continue
            H[4 * x : 4 * x + 4, 4 * xp : 4 * xp + 4] += blk
    return SlabHamiltonian(ky=float(ky), nx=nx, matrix=H, boundary=boundary)


def slab_spectrum(
    spec: ModelSpec,
    nx: int = 200,
    ky_samples=201,
    boundary: str = OPEN,
    max_range: int = 2,
    keep_weights: bool = False,
    threads: int = 1,
) -> SpectrumSeries:
    """Energy spectrum over a ky sweep; optionally attach edge-weight data.

    ``ky_samples`` is either a count (uniform [-pi, pi) sweep) or an explicit
    array of momenta.
    """
    hops = extract_hoppings(spec, max_range)
    kys = uniform_momenta(ky_samples) if np.isscalar(ky_samples) else np.asarray(ky_samples, float)

    def one(ky):
        H = build_slab(hops, ky, nx, boundary).matrix
        if not keep_weights:
            return slab_eigh(H, vectors=False), None
        w, v = slab_eigh(H)
        layer_w = (np.abs(v) ** 2).reshape(nx, 4, -1).sum(axis=1)
        q = max(1, nx // 4)
        ten = min(10, nx)
        return w, {
            "left_quarter": layer_w[:q].sum(axis=0),
            "right_quarter": layer_w[-q:].sum(axis=0),
            "left10": layer_w[:ten].sum(axis=0),
            "right10": layer_w[-ten:].sum(axis=0),
        }

    rows = ordered_map(one, kys, threads)
    values = np.array([r[0] for r in rows])
    weights = {}
    if keep_weights:
        for key in rows[0][1]:
            weights[key] = np.array([r[1][key] for r in rows])
    return SpectrumSeries(momenta=kys, values=values, weights=weights, label="energy")


def slab_ground_state_projector(slab: SlabHamiltonian) -> np.ndarray:
    """Projector onto all negative-energy states (exactly half by BdG symmetry).

    Degenerate zero-energy ties are resolved by filling exactly 2*nx lowest
    states in ascending (energy, index) order, which keeps the sweep
    deterministic through in-gap crossings.
    """
    w, v = slab_eigh(slab.matrix)
    occ = v[:, : 2 * slab.nx]
    return occ @ occ.conj().T


@dataclass(frozen=True)
class LocalizationProfile:
    """Per-layer probability of one slab eigenstate (orbitals summed)."""

    layer_index: np.ndarray
    probability: np.ndarray
    energy: float


def localization_profile(slab: SlabHamiltonian, state_index: int) -> LocalizationProfile:
    w, v = slab_eigh(slab.matrix)
    if not 0 <= state_index < len(w):
        raise IndexError(f"state index {state_index} outside spectrum of size {len(w)}")
    psi = v[:, state_index]
    prob = (np.abs(psi) ** 2).reshape(slab.nx, 4).sum(axis=1)
    return LocalizationProfile(
        layer_index=np.arange(slab.nx), probability=prob, energy=float(w[state_index])
    )


def _flake_hamiltonian(hops: HoppingSet, nx: int, ny: int) -> np.ndarray:
    nsite = nx * ny
    H = np.zeros((4 * nsite, 4 * nsite), dtype=complex)
    for (dx, dy), t in hops.entries.items():
        for x in range(nx):
            xp = x + dx
            if not 0 <= xp < nx:
                continue
            for y in range(ny):
                yp = y + dy
                if not 0 <= yp < ny:
                    continue
                i = x * ny + y
                j = xp * ny + yp
                H[4 * i : 4 * i + 4, 4 * j : 4 * j + 4] += t
    return H


def realspace_texture(
    spec: ModelSpec,
    nx: int = 40,
    ny: int = 40,
    filling_fraction: float = 0.5,
    max_range: int = 2,
) -> SpinTexture:
    """Per-site ground-state spin expectation on a fully open nx x ny flake.

    The many-body ground state fills the lowest ``filling_fraction`` of all
    single-particle states; per-site vectors come from the on-site 4x4 blocks
    of the projector.  Vectors are reported unnormalized (boundary textures
    carry meaningful magnitude variation).
    """
    hops = extract_hoppings(spec, max_range)
    H = _flake_hamiltonian(hops, nx, ny)
    w, v = np.linalg.eigh(H)
    n_fill = int(round(filling_fraction * len(w)))
    if not 0 < n_fill < len(w):
        raise ValueError("filling_fraction leaves no occupied or no empty states")
    if w[n_fill] - w[n_fill - 1] < 1e-10:
        raise GapClosure("degenerate states at the filling level of the open flake")
    occ = v[:, :n_fill]
    vectors = np.zeros((nx, ny, 3))
    for x in range(nx):
        for y in range(ny):
            i = 4 * (x * ny + y)
            block = occ[i : i + 4, :] @ occ[i : i + 4, :].conj().T
            vectors[x, y] = np.einsum("ab,mba->m", block, SPIN.S).real
    norms = np.linalg.norm(vectors, axis=-1)
    return SpinTexture(vectors=vectors, normalized=False, norms=norms, grid=None)


def boundary_circulation(texture: SpinTexture) -> float:
    """Signed circulation of the in-plane spin components around the flake.

    Walks the boundary counterclockwise and accumulates S . t, the projection
    of the in-plane expectation onto the walking direction.  Positive values
    mean counterclockwise spin flow; the sign flips with the handedness of
    the boundary texture.
    """
    v = texture.vectors
    nx, ny = v.shape[:2]
    path = (
        [(x, 0) for x in range(nx)]
        + [(nx - 1, y) for y in range(1, ny)]
        + [(x, ny - 1) for x in range(nx - 2, -1, -1)]
        + [(0, y) for y in range(ny - 2, 0, -1)]
    )
    total = 0.0
    for i, (x, y) in enumerate(path):
        xn, yn = path[(i + 1) % len(path)]
        tx, ty = xn - x, yn - y
        total += v[x, y, 0] * tx + v[x, y, 1] * ty
    return float(total)
