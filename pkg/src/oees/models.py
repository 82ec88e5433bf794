"""Four-band generalized-BdG lattice models on the square lattice.

A model is built from a two-band normal state H_N(k) = h0 I + h(k).sigma
and a pairing block Delta(k) = i Delta0 (d0 + d(k).sigma) sigma_y,
assembled as

    H(k) = [[ H_N(k),  Delta(k)   ],
            [ Delta(k)!, -H_N(k)^T ]]

in the particle-hole doubled basis (c_+, c_-, c!_-, c!_+).  An optional
constant term Delta0 tau_x (x) I_2 breaks the tau_y (x) sigma_y symmetry
while preserving the generalized charge conjugation C'.

All momenta are in radians; every field is 2*pi-periodic, so momenta wrap
modulo 2*pi automatically.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence, Tuple, Union

import numpy as np

from .errors import BlockDecompositionUnavailable
from .pauli import PAULI

__all__ = [
    "Qwz",
    "Sticlet",
    "FourierField",
    "ModelSpec",
    "h_qwz",
    "h_sticlet",
    "assemble_bdg",
    "bloch_hamiltonian",
    "block_decompose",
    "wrap_momentum",
]


def wrap_momentum(k):
    """Wrap momenta into [-pi, pi)."""
    return np.mod(np.asarray(k, dtype=float) + np.pi, 2 * np.pi) - np.pi


def h_qwz(kx, ky, mu: float, t_q: float = 1.0, beta: float = 1.0) -> np.ndarray:
    """Two-band Chern-insulator vector (beta sin kx, beta sin ky, mu - t_q cos kx - t_q cos ky).

    Returns an array of shape broadcast(kx, ky) + (3,).
    """
    kx, ky = np.broadcast_arrays(np.asarray(kx, float), np.asarray(ky, float))
    return np.stack(
        [beta * np.sin(kx), beta * np.sin(ky), mu - t_q * np.cos(kx) - t_q * np.cos(ky)],
        axis=-1,
    )


def h_sticlet(kx, ky, alpha: float = 1.0, t_s: float = 1.0) -> np.ndarray:
    """Two-band vector (alpha cos kx, alpha cos ky, t_s cos(kx + ky)) with a diagonal hopping."""
    kx, ky = np.broadcast_arrays(np.asarray(kx, float), np.asarray(ky, float))
    return np.stack(
        [alpha * np.cos(kx), alpha * np.cos(ky), t_s * np.cos(kx + ky)],
        axis=-1,
    )


@dataclass(frozen=True)
class Qwz:
    mu: float
    t_q: float = 1.0
    beta: float = 1.0

    def h(self, kx, ky) -> np.ndarray:
        return h_qwz(kx, ky, self.mu, self.t_q, self.beta)


@dataclass(frozen=True)
class Sticlet:
    alpha: float = 1.0
    t_s: float = 1.0

    def h(self, kx, ky) -> np.ndarray:
        return h_sticlet(kx, ky, self.alpha, self.t_s)


class FourierField:
    """Real 3-vector field h(k) = sum_delta c(delta) e^{i k.delta} from a hopping table.

    ``coeffs`` maps integer offsets (dx, dy) to length-3 complex coefficient
    vectors.  Reality of the field requires c(-delta) = conj(c(delta)); tables
    violating that (beyond ``tol``) are rejected, because they cannot come
    from a Hermitian hopping problem.
    """

    def __init__(self, coeffs: Mapping[Tuple[int, int], Sequence[complex]], tol: float = 1e-12):
        table = {}
        for delta, c in coeffs.items():
            dx, dy = int(delta[0]), int(delta[1])
            vec = np.asarray(c, dtype=complex)
            if vec.shape != (3,):
                raise ValueError(f"coefficient for offset {delta} must be a 3-vector")
            table[(dx, dy)] = vec
        for (dx, dy), vec in table.items():
            partner = table.get((-dx, -dy))
            if partner is None or np.abs(partner - vec.conj()).max() > tol:
                raise ValueError(
                    f"coefficients violate c(-delta) = conj(c(delta)) at offset {(dx, dy)}; "
                    "the resulting field would not be real"
                )
        self.coeffs = table

    def h(self, kx, ky) -> np.ndarray:
        kx, ky = np.broadcast_arrays(np.asarray(kx, float), np.asarray(ky, float))
        out = np.zeros(kx.shape + (3,), dtype=complex)
        for (dx, dy), vec in self.coeffs.items():
            out += np.exp(1j * (kx * dx + ky * dy))[..., None] * vec
        return out.real

    def __repr__(self):
        return f"FourierField({len(self.coeffs)} offsets)"


NormalState = Union[Qwz, Sticlet, FourierField]

#: builtin pairing-vector choices
D_VECTOR_KINDS = ("zero", "equal_to_h", "perp_inplane")


@dataclass(frozen=True)
class ModelSpec:
    """Full parameterization of a four-band generalized-BdG model.

    ``d_vector`` selects the real pairing vector d(k):

    * ``"zero"``          -- no sigma-structured pairing,
    * ``"equal_to_h"``    -- d = h (note: gapless whenever Delta0 = 1),
    * ``"perp_inplane"``  -- d = (h_y, -h_x, 0), orthogonal to h pointwise,
      which leaves the two tau_y(x)sigma_y blocks exactly degenerate and
      keeps the model gapped for every Delta0,
    * a :class:`FourierField` for anything else.

    ``h0`` and ``d0`` are constant scalar offsets (both default 0).
    ``hprime_enabled`` adds the constant Delta0 tau_x (x) I_2 term.
    """

    normal_state: NormalState
    delta0: float = 0.0
    d_vector: Union[str, FourierField] = "zero"
    h0: float = 0.0
    d0: float = 0.0
    hprime_enabled: bool = False

    def __post_init__(self):
        if isinstance(self.d_vector, str) and self.d_vector not in D_VECTOR_KINDS:
            raise ValueError(
                f"unknown d_vector {self.d_vector!r}; expected one of {D_VECTOR_KINDS} "
                "or a FourierField"
            )
        for name in ("delta0", "h0", "d0"):
            if not np.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be a finite real number")

    def h(self, kx, ky) -> np.ndarray:
        return self.normal_state.h(kx, ky)

    def d(self, kx, ky) -> np.ndarray:
        if isinstance(self.d_vector, FourierField):
            return self.d_vector.h(kx, ky)
        h = self.h(kx, ky)
        if self.d_vector == "zero":
            return np.zeros_like(h)
        if self.d_vector == "equal_to_h":
            return h
        # perp_inplane: rotate the in-plane components by -90 degrees
        d = np.zeros_like(h)
        d[..., 0] = h[..., 1]
        d[..., 1] = -h[..., 0]
        return d

    @property
    def block_diagonalizable(self) -> bool:
        """True when the model commutes with tau_y (x) sigma_y (real d, no H', d0 = 0)."""
        return not self.hprime_enabled and self.d0 == 0.0


def _dot_sigma(v: np.ndarray) -> np.ndarray:
    """(..., 3) real or complex vector -> (..., 2, 2) matrix v.sigma."""
    return np.einsum("...i,ijk->...jk", v, PAULI)


def bloch_hamiltonian(spec: ModelSpec, kx, ky) -> np.ndarray:
    """Assemble H(k) for scalar or array momenta; shape broadcast(kx, ky) + (4, 4)."""
    h = spec.h(kx, ky)
    hN = _dot_sigma(h)
    if spec.h0 != 0.0:
        hN = hN + spec.h0 * np.eye(2)
    shape = h.shape[:-1]
    out = np.zeros(shape + (4, 4), dtype=complex)
    out[..., :2, :2] = hN
    out[..., 2:, 2:] = -np.swapaxes(hN, -1, -2)
    if spec.delta0 != 0.0:
        d = spec.d(kx, ky)
        pair = _dot_sigma(d)
        if spec.d0 != 0.0:
            pair = pair + spec.d0 * np.eye(2)
        delta = 1j * spec.delta0 * pair @ PAULI[1]
        out[..., :2, 2:] = delta
        out[..., 2:, :2] = np.conj(np.swapaxes(delta, -1, -2))
        if spec.hprime_enabled:
            out[..., :2, 2:] += spec.delta0 * np.eye(2)
            out[..., 2:, :2] += spec.delta0 * np.eye(2)
    return out


def assemble_bdg(spec: ModelSpec, kx, ky) -> np.ndarray:
    """The 4x4 Hermitian Bloch matrix at momentum (kx, ky)."""
    return bloch_hamiltonian(spec, kx, ky)


def block_decompose(spec: ModelSpec, kx, ky) -> Tuple[np.ndarray, np.ndarray]:
    """Decompose into the two commuting blocks ((h + Delta0 d).sigma, (h - Delta0 d).sigma).

    Available only when the model commutes with tau_y (x) sigma_y, i.e. for a
    real pairing vector with no H' term and d0 = 0.  The joint spectrum of the
    two blocks equals the spectrum of :func:`assemble_bdg`.
    """
    if not spec.block_diagonalizable:
        raise BlockDecompositionUnavailable(
            "block decomposition needs a real d-vector, d0 = 0 and hprime_enabled = False"
        )
    h = spec.h(kx, ky)
    d = spec.delta0 * spec.d(kx, ky)
    return _dot_sigma(h + d), _dot_sigma(h - d)
