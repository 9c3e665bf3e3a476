import numpy as np
import pytest

from zrbr.errors import ContractViolationError
from zrbr.model import (
    ModelParams,
    PlusMinusState,
    ZRState,
    decompose,
    energy,
    mass,
    nonlinearity_F,
    nonlinearity_G,
    nonlinearity_H,
    psi_time_derivative,
    recombine,
)
from zrbr.spectral import ComplexField, Grid, apply_symbol, to_frequency, zero_field


def random_field(grid, seed, band=3):
    """Smooth random field built from a few low modes."""
    rng = np.random.default_rng(seed)
    hat = np.zeros(grid.shape, dtype=np.complex128)
    idx = range(-band, band + 1)
    modes = [(i, j) for i in idx for j in idx] if grid.dim == 2 else [
        (i, j, k) for i in idx for j in idx for k in idx
    ]
    for m in modes:
        hat[tuple(np.mod(m, grid.n))] = rng.normal() + 1j * rng.normal()
    from zrbr.spectral import to_physical

    return to_physical(ComplexField(grid, hat, "frequency"))


def real_random_field(grid, seed):
    f = random_field(grid, seed)
    return ComplexField(grid, f.values.real + 0j)


@pytest.fixture
def grid():
    return Grid(2, 16, 4 * np.pi)


class TestParams:
    def test_negative_W_rejected(self):
        with pytest.raises(ContractViolationError):
            ModelParams(W=-1.0)

    def test_zero_W_allowed(self):
        assert ModelParams(W=0.0).W == 0.0

    def test_nonpositive_epsilon_rejected(self):
        with pytest.raises(ContractViolationError):
            ModelParams(epsilon=0.0)


class TestDecompose:
    def test_requires_time_derivative_slots(self, grid):
        st = ZRState(zero_field(grid), zero_field(grid), zero_field(grid))
        with pytest.raises(ContractViolationError):
            decompose(st)

    def test_roundtrip_modulo_zero_mode(self, grid):
        st = ZRState(
            random_field(grid, 1),
            real_random_field(grid, 2),
            real_random_field(grid, 3),
            rho_t=real_random_field(grid, 4),
            phi_t=real_random_field(grid, 5),
        )
        pm = decompose(st)
        rho, varphi, rho_t, varphi_t = recombine(pm)

        np.testing.assert_allclose(rho.values, st.rho.values, atol=1e-10)
        phi_x = apply_symbol(grid, "dx", st.phi)
        np.testing.assert_allclose(varphi.values, phi_x.values, atol=1e-10)

        # time-derivative slots come back with their spatial mean removed
        def demean(f):
            return f.values - np.mean(f.values)

        np.testing.assert_allclose(rho_t.values, demean(st.rho_t), atol=1e-10)
        phi_t_x = apply_symbol(grid, "dx", st.phi_t)
        np.testing.assert_allclose(varphi_t.values, demean(phi_t_x), atol=1e-10)

    def test_grid_mismatch_rejected(self, grid):
        other = Grid(2, 32, 4 * np.pi)
        with pytest.raises(ContractViolationError):
            ZRState(zero_field(grid), zero_field(other), zero_field(grid))


class TestNonlinearities:
    def test_all_vanish_on_zero_state(self, grid):
        pm = PlusMinusState(*[zero_field(grid) for _ in range(5)])
        params = ModelParams(sigma2=-1.0, W=2.0, D=0.3)
        assert np.all(nonlinearity_F(pm, params).values == 0)
        psi_t = psi_time_derivative(pm, params)
        assert np.all(nonlinearity_G(pm.psi, psi_t, params, +1).values == 0)
        assert np.all(nonlinearity_H(pm.psi, psi_t, params, -1).values == 0)

    def test_F_formula_pointwise(self, grid):
        pm = PlusMinusState(
            random_field(grid, 10),
            real_random_field(grid, 11),
            real_random_field(grid, 12),
            real_random_field(grid, 13),
            real_random_field(grid, 14),
        )
        params = ModelParams(sigma2=-1.0, W=2.0, D=0.5)
        psi = pm.psi.values
        expected = (
            -1.0 * np.abs(psi) ** 2 * psi
            + 0.5 * 2.0 * (pm.rho_plus.values + pm.rho_minus.values) * psi
            + 0.5 * 2.0 * 0.5 * (pm.varphi_plus.values + pm.varphi_minus.values) * psi
        )
        np.testing.assert_allclose(nonlinearity_F(pm, params).values, expected, atol=1e-12)

    def test_G_vanishes_for_spatially_constant_psi(self, grid):
        psi = ComplexField(grid, np.full(grid.shape, 0.3 + 0.1j))
        psi_t = zero_field(grid)
        out = nonlinearity_G(psi, psi_t, ModelParams(D=0.7), +1)
        np.testing.assert_allclose(out.values, 0.0, atol=1e-14)

    def test_H_vanishes_when_D_zero_and_psi_frozen(self, grid):
        psi = random_field(grid, 20)
        out = nonlinearity_H(psi, zero_field(grid), ModelParams(D=0.0), +1)
        np.testing.assert_allclose(out.values, 0.0, atol=1e-14)

    def test_G_matches_multiplier_chain(self, grid):
        # independent assembly of +omega^{-1} Lap(|psi|^2) + D omega^{-1} dx dt(|psi|^2)
        params = ModelParams(D=0.4)
        psi = random_field(grid, 21)
        psi_t = apply_symbol(grid, "laplacian", psi)
        psi_t = ComplexField(grid, 1j * psi_t.values)

        a2 = np.abs(psi.values) ** 2
        a2t = 2.0 * np.real(np.conj(psi.values) * psi_t.values)
        term1 = apply_symbol(
            grid, "omega_inv", apply_symbol(grid, "laplacian", ComplexField(grid, a2 + 0j))
        )
        term2 = apply_symbol(
            grid, "omega_inv", apply_symbol(grid, "dx", ComplexField(grid, a2t + 0j))
        )
        expected = term1.values + 0.4 * term2.values

        out = nonlinearity_G(psi, psi_t, params, +1)
        np.testing.assert_allclose(out.values, expected, atol=1e-11)

    def test_G_linear_in_intensity(self, grid):
        params = ModelParams(D=0.4)
        psi = random_field(grid, 22)
        psi_t = random_field(grid, 23)
        g1 = nonlinearity_G(psi, psi_t, params, +1)
        psi2 = ComplexField(grid, np.sqrt(2) * psi.values)
        psi2_t = ComplexField(grid, np.sqrt(2) * psi_t.values)
        g2 = nonlinearity_G(psi2, psi2_t, params, +1)
        np.testing.assert_allclose(g2.values, 2.0 * g1.values, rtol=1e-10, atol=1e-12)

    def test_sign_flips_G_and_H(self, grid):
        params = ModelParams(D=0.4)
        psi = random_field(grid, 24)
        psi_t = random_field(grid, 25)
        gp = nonlinearity_G(psi, psi_t, params, +1)
        gm = nonlinearity_G(psi, psi_t, params, -1)
        np.testing.assert_allclose(gm.values, -gp.values, atol=1e-12)
        hp = nonlinearity_H(psi, psi_t, params, "+")
        hm = nonlinearity_H(psi, psi_t, params, "-")
        np.testing.assert_allclose(hm.values, -hp.values, atol=1e-12)

    def test_bad_sign_rejected(self, grid):
        psi = zero_field(grid)
        with pytest.raises(ContractViolationError):
            nonlinearity_G(psi, psi, ModelParams(), 2)

    def test_extra_terms_require_field(self, grid):
        psi = zero_field(grid)
        params = ModelParams(extra_cutoff_terms=True)
        with pytest.raises(ContractViolationError):
            nonlinearity_G(psi, psi, params, +1)


class TestConservedQuantities:
    def test_mass_of_unit_field_is_volume(self, grid):
        st = ZRState(
            ComplexField(grid, np.ones(grid.shape)), zero_field(grid), zero_field(grid)
        )
        assert mass(st) == pytest.approx(grid.length**2)

    def test_mass_matches_gaussian_integral(self):
        # int |A exp(-r^2/(2 w^2))|^2 dx = A^2 (pi w^2)^{d/2} on a large box
        grid = Grid(2, 64, 32 * np.pi)
        coords = grid.coordinates()
        r2 = sum(x**2 for x in coords)
        A, w = 0.7, 3.0
        st = ZRState(
            ComplexField(grid, A * np.exp(-r2 / (2 * w**2)) + 0j),
            zero_field(grid),
            zero_field(grid),
        )
        assert mass(st) == pytest.approx(A**2 * np.pi * w**2, rel=1e-8)

    def test_mass_nonnegative(self, grid):
        st = ZRState(random_field(grid, 30), zero_field(grid), zero_field(grid))
        assert mass(st) >= 0.0

    def test_energy_of_pure_density(self, grid):
        st = ZRState(
            zero_field(grid),
            ComplexField(grid, np.ones(grid.shape)),
            zero_field(grid),
        )
        W = 1.7
        assert energy(st, ModelParams(W=W)) == pytest.approx(0.5 * W * grid.length**2)

    def test_energy_zero_state(self, grid):
        st = ZRState(zero_field(grid), zero_field(grid), zero_field(grid))
        assert energy(st, ModelParams()) == 0.0

    def test_energy_matches_independent_quadrature(self, grid):
        params = ModelParams(sigma2=-1.0, W=2.0, D=0.5)
        st = ZRState(
            random_field(grid, 31),
            real_random_field(grid, 32),
            real_random_field(grid, 33),
        )
        # term-by-term assembly with raw FFT calls, no package helpers
        def grad_sq(vals):
            hat = np.fft.fftn(vals, norm="ortho")
            out = np.zeros(grid.shape)
            for xi in grid.frequencies():
                out += np.abs(np.fft.ifftn(1j * xi * hat, norm="ortho")) ** 2
            return out

        psi = st.psi.values
        rho = st.rho.values.real
        phi = st.phi.values.real
        xi1 = grid.frequencies()[0]
        phi_x = np.fft.ifftn(1j * xi1 * np.fft.fftn(phi, norm="ortho"), norm="ortho").real
        a2 = np.abs(psi) ** 2
        dens = (
            grad_sq(psi)
            + 0.5 * params.W * rho**2
            + 0.5 * params.W * grad_sq(phi)
            + 0.5 * params.sigma2 * a2**2
            + params.W * rho * a2
            + params.D * params.W * a2 * phi_x
        )
        expected = np.sum(dens) * grid.cell_volume
        assert energy(st, params) == pytest.approx(expected, rel=1e-10)


def test_psi_time_derivative_scales_with_epsilon(grid):
    pm = PlusMinusState(
        random_field(grid, 40),
        real_random_field(grid, 41),
        real_random_field(grid, 42),
        real_random_field(grid, 43),
        real_random_field(grid, 44),
    )
    base = psi_time_derivative(pm, ModelParams(sigma2=-1.0, W=1.0, D=0.2, epsilon=1.0))
    half = psi_time_derivative(pm, ModelParams(sigma2=-1.0, W=1.0, D=0.2, epsilon=0.5))
    np.testing.assert_allclose(half.values, 0.5 * base.values, atol=1e-13)
