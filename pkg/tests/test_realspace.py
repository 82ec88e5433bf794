import numpy as np
import pytest

from oees import (
    FourierField,
    ModelSpec,
    RangeTooSmall,
    assemble_bdg,
    boundary_circulation,
    build_slab,
    extract_hoppings,
    localization_profile,
    realspace_texture,
    slab_ground_state_projector,
    slab_spectrum,
)
from oees.realspace import OPEN, PERIODIC


def test_qwz_hopping_offsets(fig2_qwz_spec):
    hops = extract_hoppings(fig2_qwz_spec)
    offsets = set(hops.entries)
    assert offsets == {(0, 0), (1, 0), (-1, 0), (0, 1), (0, -1)}


def test_sticlet_hopping_offsets(fig2_sticlet_spec):
    hops = extract_hoppings(fig2_sticlet_spec)
    offsets = set(hops.entries)
    assert (1, 1) in offsets and (-1, -1) in offsets


def test_fourier_round_trip(fig2_qwz_spec, fig2_sticlet_spec, fig3_spec, rng):
    for spec in (fig2_qwz_spec, fig2_sticlet_spec, fig3_spec):
        hops = extract_hoppings(spec)
        kx = rng.uniform(-np.pi, np.pi, 100)
        ky = rng.uniform(-np.pi, np.pi, 100)
        err = np.abs(hops.bloch(kx, ky) - assemble_bdg(spec, kx, ky)).max()
        assert err < 1e-10


def test_range_too_small():
    # second-neighbour normal state cannot be represented with max_range = 1
    coeffs = {
        (2, 0): [0, 0, 0.3],
        (-2, 0): [0, 0, 0.3],
        (0, 0): [0, 0, 1.0],
    }
    spec = ModelSpec(normal_state=FourierField(coeffs), delta0=0.0)
    with pytest.raises(RangeTooSmall):
        extract_hoppings(spec, max_range=1)
    extract_hoppings(spec, max_range=2)  # and this succeeds


def test_single_ring_slab(fig2_qwz_spec):
    hops = extract_hoppings(fig2_qwz_spec)
    ky = 0.81
    slab = build_slab(hops, ky, 1, PERIODIC)
    expected = sum(t * np.exp(1j * ky * dy) for (dx, dy), t in hops.entries.items())
    np.testing.assert_allclose(slab.matrix, expected, atol=1e-13)


def test_slab_hermitian_and_symmetric_spectrum(fig2_qwz_spec):
    series = slab_spectrum(fig2_qwz_spec, nx=40, ky_samples=21)
    np.testing.assert_allclose(series.values, -series.values[:, ::-1], atol=1e-10)


def test_periodic_slab_matches_bulk(fig2_qwz_spec):
    # Bloch theorem: PBC ring spectrum = union of bulk spectra at quantized kx
    nx = 8
    hops = extract_hoppings(fig2_qwz_spec)
    ky = -0.37
    slab = build_slab(hops, ky, nx, PERIODIC)
    slab_levels = np.linalg.eigvalsh(slab.matrix)
    bulk_levels = []
    for j in range(nx):
        kx = 2 * np.pi * j / nx
        bulk_levels.append(np.linalg.eigvalsh(assemble_bdg(fig2_qwz_spec, kx, ky)))
    bulk_levels = np.sort(np.concatenate(bulk_levels))
    np.testing.assert_allclose(slab_levels, bulk_levels, atol=1e-10)


def test_open_slab_requires_width(fig2_qwz_spec):
    hops = extract_hoppings(fig2_qwz_spec)
    with pytest.raises(ValueError):
        build_slab(hops, 0.0, 2, OPEN)


def test_slab_projector_is_half_filling(fig2_qwz_spec):
    hops = extract_hoppings(fig2_qwz_spec)
    slab = build_slab(hops, 0.4, 24, OPEN)
    P = slab_ground_state_projector(slab)
    np.testing.assert_allclose(P @ P, P, atol=1e-10)
    np.testing.assert_allclose(np.trace(P).real, 2 * 24, atol=1e-10)


def test_localization_bulk_vs_edge(fig3_spec):
    # in-gap state at ky = pi/2 is edge-localized with log-linear decay
    hops = extract_hoppings(fig3_spec)
    nx = 60
    slab = build_slab(hops, np.pi / 2, nx, OPEN)
    w = np.linalg.eigvalsh(slab.matrix)
    gap_states = np.where(np.abs(w) < 0.25)[0]
    assert len(gap_states) > 0
    prof = localization_profile(slab, int(gap_states[0]))
    np.testing.assert_allclose(prof.probability.sum(), 1.0, atol=1e-10)
    edge_weight = max(prof.probability[:10].sum(), prof.probability[-10:].sum())
    assert edge_weight > 0.9
    # linear fit of log-probability into the bulk
    p = prof.probability if prof.probability[0] > prof.probability[-1] else prof.probability[::-1]
    xs = np.arange(5, 25)
    ys = np.log(p[5:25])
    slope, intercept = np.polyfit(xs, ys, 1)
    resid = ys - (slope * xs + intercept)
    r2 = 1 - resid.var() / ys.var()
    assert slope < 0 and r2 > 0.99
    # a deep valence state is spread over the bulk
    deep = localization_profile(slab, 3)
    assert max(deep.probability[:10].sum(), deep.probability[-10:].sum()) < 0.5


def test_realspace_texture_basics(fig3_spec):
    tex = realspace_texture(fig3_spec, 10, 10)
    assert tex.vectors.shape == (10, 10, 3)
    # half filling forces the in-plane components to vanish identically
    assert np.abs(tex.vectors[..., :2]).max() < 1e-12
    assert np.abs(tex.vectors[..., 2]).max() > 0.05


def test_realspace_sz_flips_between_sectors(fig3_spec, fig3_mirror_spec):
    tex_a = realspace_texture(fig3_spec, 10, 10)
    tex_b = realspace_texture(fig3_mirror_spec, 10, 10)
    np.testing.assert_allclose(tex_a.vectors[..., 2], -tex_b.vectors[..., 2], atol=1e-10)


def test_boundary_circulation_synthetic():
    # tangential CCW flow has positive circulation, CW negative
    from oees.bulk import SpinTexture

    n = 8
    v = np.zeros((n, n, 3))
    c = (n - 1) / 2
    for x in range(n):
        for y in range(n):
            rx, ry = x - c, y - c
            v[x, y, 0], v[x, y, 1] = -ry, rx
    tex = SpinTexture(vectors=v, normalized=False, norms=np.linalg.norm(v, axis=-1))
    assert boundary_circulation(tex) > 0
    tex_cw = SpinTexture(vectors=-v, normalized=False, norms=np.linalg.norm(v, axis=-1))
    assert boundary_circulation(tex_cw) < 0


def test_gap_traversals_match_chern_per_edge(fig2_qwz_spec):
    # signed E = 0 crossing count per physical edge equals +-C
    from oees import BZGrid, chern_number, count_chiral_modes

    c = chern_number(fig2_qwz_spec, BZGrid(48, 48)).value
    series = slab_spectrum(fig2_qwz_spec, nx=60, ky_samples=81, keep_weights=True)
    counts = count_chiral_modes(series, level=0.0)
    assert abs(counts.by_end["left"]) == abs(c)
    assert counts.by_end["left"] == -counts.by_end["right"]


def test_bulk_interior_matches_bz_average(fig3_spec):
    # interior on-site spin approaches the BZ-averaged bulk value
    from oees import BZGrid, bulk_texture

    tex_r = realspace_texture(fig3_spec, 16, 16)
    interior = tex_r.vectors[6:10, 6:10].mean(axis=(0, 1))
    bulk = bulk_texture(fig3_spec, BZGrid(32, 32)).vectors.mean(axis=(0, 1))
    np.testing.assert_allclose(interior, bulk, atol=0.05)
