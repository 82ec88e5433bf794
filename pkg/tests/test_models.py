import numpy as np
import pytest

from oees import (
    BlockDecompositionUnavailable,
    FourierField,
    ModelSpec,
    PAULI,
    Qwz,
    SPIN,
    assemble_bdg,
    block_decompose,
    h_qwz,
    h_sticlet,
    wrap_momentum,
)

s0 = np.eye(2)
TAU_Y_SIGMA_Y = np.kron(np.array([[0, -1j], [1j, 0]]), PAULI[1])
TAU_Y_I = np.kron(np.array([[0, -1j], [1j, 0]]), s0)


def test_h_qwz_values():
    np.testing.assert_allclose(h_qwz(0.0, 0.0, mu=0.5), [0.0, 0.0, -1.5], atol=1e-15)
    np.testing.assert_allclose(h_qwz(np.pi / 2, 0.0, mu=0.5), [1.0, 0.0, -0.5], atol=1e-15)
    np.testing.assert_allclose(h_qwz(np.pi, np.pi, mu=0.5), [0.0, 0.0, 2.5], atol=1e-12)


def test_h_sticlet_values():
    np.testing.assert_allclose(h_sticlet(0.0, 0.0), [1.0, 1.0, 1.0], atol=1e-15)
    np.testing.assert_allclose(h_sticlet(np.pi / 2, np.pi / 2), [0.0, 0.0, -1.0], atol=1e-15)
    np.testing.assert_allclose(h_sticlet(np.pi, 0.0), [-1.0, 1.0, -1.0], atol=1e-12)


def test_wrap_momentum():
    np.testing.assert_allclose(wrap_momentum(3 * np.pi), -np.pi, atol=1e-12)
    np.testing.assert_allclose(wrap_momentum(-np.pi), -np.pi, atol=1e-15)
    np.testing.assert_allclose(wrap_momentum(0.3), 0.3, atol=1e-15)


def test_assemble_hermitian_everywhere(fig2_qwz_spec, fig2_sticlet_spec, fig3_spec, rng):
    for spec in (fig2_qwz_spec, fig2_sticlet_spec, fig3_spec):
        kx = rng.uniform(-np.pi, np.pi, 50)
        ky = rng.uniform(-np.pi, np.pi, 50)
        H = assemble_bdg(spec, kx, ky)
        assert np.abs(H - np.conj(np.swapaxes(H, -1, -2))).max() < 1e-14


def test_periodicity(fig2_sticlet_spec, rng):
    kx = rng.uniform(-np.pi, np.pi, 20)
    ky = rng.uniform(-np.pi, np.pi, 20)
    H1 = assemble_bdg(fig2_sticlet_spec, kx, ky)
    H2 = assemble_bdg(fig2_sticlet_spec, kx + 2 * np.pi, ky - 2 * np.pi)
    np.testing.assert_allclose(H1, H2, atol=1e-12)


def test_zero_pairing_decouples():
    spec = ModelSpec(normal_state=Qwz(mu=0.5), delta0=0.0, d_vector="equal_to_h")
    H = assemble_bdg(spec, 0.7, -0.3)
    h = h_qwz(0.7, -0.3, mu=0.5)
    hN = np.einsum("i,ijk->jk", h, PAULI)
    assert np.abs(H[:2, 2:]).max() == 0.0
    np.testing.assert_allclose(H[:2, :2], hN, atol=1e-15)
    np.testing.assert_allclose(H[2:, 2:], -hN.T, atol=1e-15)


def test_tau_y_sigma_y_commutes_for_real_d(rng):
    for kind in ("zero", "equal_to_h", "perp_inplane"):
        spec = ModelSpec(normal_state=Qwz(mu=0.5), delta0=1.0, d_vector=kind)
        for _ in range(100):
            kx, ky = rng.uniform(-np.pi, np.pi, 2)
            H = assemble_bdg(spec, kx, ky)
            comm = H @ TAU_Y_SIGMA_Y - TAU_Y_SIGMA_Y @ H
            assert np.abs(comm).max() < 1e-12


def test_charge_conjugation_with_hprime(rng):
    # C'^-1 H C' = -H^T survives the symmetry-breaking constant block
    spec = ModelSpec(
        normal_state=Qwz(mu=0.5), delta0=1.0, d_vector="equal_to_h", hprime_enabled=True
    )
    for _ in range(50):
        kx, ky = rng.uniform(-np.pi, np.pi, 2)
        H = assemble_bdg(spec, kx, ky)
        lhs = np.linalg.inv(TAU_Y_I) @ H @ TAU_Y_I
        np.testing.assert_allclose(lhs, -H.T, atol=1e-13)


def test_spectrum_symmetric_about_zero(fig2_qwz_spec, fig2_sticlet_spec, fig3_spec, rng):
    for spec in (fig2_qwz_spec, fig2_sticlet_spec, fig3_spec):
        kx = rng.uniform(-np.pi, np.pi, 30)
        ky = rng.uniform(-np.pi, np.pi, 30)
        w = np.linalg.eigvalsh(assemble_bdg(spec, kx, ky))
        np.testing.assert_allclose(w, -w[..., ::-1], atol=1e-12)


def test_block_decompose_special_cases():
    h = h_qwz(0.4, 1.1, mu=0.5)
    eq = ModelSpec(normal_state=Qwz(mu=0.5), delta0=1.0, d_vector="equal_to_h")
    plus, minus = block_decompose(eq, 0.4, 1.1)
    np.testing.assert_allclose(plus, 2 * np.einsum("i,ijk->jk", h, PAULI), atol=1e-14)
    np.testing.assert_allclose(minus, np.zeros((2, 2)), atol=1e-14)

    zero = ModelSpec(normal_state=Qwz(mu=0.5), delta0=1.0, d_vector="zero")
    plus, minus = block_decompose(zero, 0.4, 1.1)
    np.testing.assert_allclose(plus, minus, atol=1e-15)


def test_block_spectra_match_full(fig2_qwz_spec, rng):
    # joint eigenvalues of the two blocks = spectrum of the 4x4 matrix
    for _ in range(50):
        kx, ky = rng.uniform(-np.pi, np.pi, 2)
        plus, minus = block_decompose(fig2_qwz_spec, kx, ky)
        joint = np.sort(np.concatenate([np.linalg.eigvalsh(plus), np.linalg.eigvalsh(minus)]))
        full = np.linalg.eigvalsh(assemble_bdg(fig2_qwz_spec, kx, ky))
        np.testing.assert_allclose(joint, full, atol=1e-12)


def test_block_decompose_unavailable(fig3_spec):
    with pytest.raises(BlockDecompositionUnavailable):
        block_decompose(fig3_spec, 0.0, 0.0)
    d0_spec = ModelSpec(normal_state=Qwz(mu=0.5), delta0=1.0, d_vector="zero", d0=1.0)
    with pytest.raises(BlockDecompositionUnavailable):
        block_decompose(d0_spec, 0.0, 0.0)


def test_spin_representation_block_form():
    for mu, sigma in enumerate(PAULI):
        np.testing.assert_allclose(SPIN.S[mu][:2, :2], sigma, atol=1e-15)
        np.testing.assert_allclose(SPIN.S[mu][2:, 2:], -sigma.conj(), atol=1e-15)
        assert np.abs(SPIN.S[mu][:2, 2:]).max() == 0.0


def test_spin_rotation():
    for mu in range(3):
        rotated = SPIN.U.conj().T @ SPIN.S[mu] @ SPIN.U
        np.testing.assert_allclose(rotated, np.kron(np.eye(2), PAULI[mu]), atol=1e-14)


def test_spin_su2_algebra():
    eps = np.zeros((3, 3, 3))
    eps[0, 1, 2] = eps[1, 2, 0] = eps[2, 0, 1] = 1
    eps[0, 2, 1] = eps[2, 1, 0] = eps[1, 0, 2] = -1
    for mu in range(3):
        for nu in range(3):
            comm = SPIN.S[mu] @ SPIN.S[nu] - SPIN.S[nu] @ SPIN.S[mu]
            expected = 2j * np.einsum("l,lab->ab", eps[mu, nu], SPIN.S)
            np.testing.assert_allclose(comm, expected, atol=1e-14)


def test_fourier_field_matches_closed_form(rng):
    # reconstruct the qwz h-vector from its hopping coefficients
    mu, t, beta = 0.5, 1.0, 1.0
    coeffs = {
        (0, 0): [0, 0, mu],
        (1, 0): [-0.5j * beta, 0, -0.5 * t],
        (-1, 0): [0.5j * beta, 0, -0.5 * t],
        (0, 1): [0, -0.5j * beta, -0.5 * t],
        (0, -1): [0, 0.5j * beta, -0.5 * t],
    }
    field = FourierField(coeffs)
    kx = rng.uniform(-np.pi, np.pi, 40)
    ky = rng.uniform(-np.pi, np.pi, 40)
    np.testing.assert_allclose(field.h(kx, ky), h_qwz(kx, ky, mu, t, beta), atol=1e-13)


def test_fourier_field_rejects_nonreal():
    with pytest.raises(ValueError):
        FourierField({(1, 0): [1.0, 0, 0]})  # missing (-1, 0) partner
    with pytest.raises(ValueError):
        FourierField({(1, 0): [1j, 0, 0], (-1, 0): [1j, 0, 0]})  # not conjugate


def test_modelspec_validation():
    with pytest.raises(ValueError):
        ModelSpec(normal_state=Qwz(mu=0.5), d_vector="bogus")
    with pytest.raises(ValueError):
        ModelSpec(normal_state=Qwz(mu=0.5), delta0=float("nan"))
