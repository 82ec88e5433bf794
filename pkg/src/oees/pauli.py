"""Pauli matrices and the four-band spin representation.

The particle-hole doubled basis is (c_+, c_-, c!_-, c!_+), so the spin
operators take the block form S_mu = diag(sigma_mu, -sigma_mu*).  The
unitary U = I_2 (+) sigma_y rotates every S_mu onto I_2 (x) sigma_mu,
which is what makes the observable-enriched partial trace an ordinary
partial trace in the rotated frame.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

s0 = np.eye(2, dtype=complex)
sx = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
sy = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
sz = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)

#: (3, 2, 2) stack of sigma_x, sigma_y, sigma_z
PAULI = np.stack([sx, sy, sz])


def _spin_matrices() -> np.ndarray:
    out = np.zeros((3, 4, 4), dtype=complex)
    for mu, s in enumerate(PAULI):
        out[mu, :2, :2] = s
        out[mu, 2:, 2:] = -s.conj()
    return out


def _rotation() -> np.ndarray:
    u = np.zeros((4, 4), dtype=complex)
    u[:2, :2] = s0
    u[2:, 2:] = sy
    return u


@dataclass(frozen=True)
class SpinRepresentation:
    """Spin operators S_1, S_2, S_3 on the doubled space and the rotation U.

    Invariants (enforced by the test suite):
      * [S_mu, S_nu] = 2i eps_{mu nu lam} S_lam,
      * U! S_mu U = I_2 (x) sigma_mu.
    """

    S: np.ndarray = field(default_factory=_spin_matrices)
    U: np.ndarray = field(default_factory=_rotation)

    @property
    def S1(self) -> np.ndarray:
        return self.S[0]

    @property
    def S2(self) -> np.ndarray:
        return self.S[1]

    @property
    def S3(self) -> np.ndarray:
        return self.S[2]


#: module-level default; all operators are immutable
SPIN = SpinRepresentation()
