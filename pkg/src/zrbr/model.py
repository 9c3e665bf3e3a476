"""States, reformulations, nonlinearities and conserved functionals.

The physical system couples a complex envelope psi with real acoustic
fields rho (density) and phi (velocity potential):

    i psi_t + Lap psi = sigma2 |psi|^2 psi + W rho psi + W D phi_x psi
    rho_t + Lap phi + D (|psi|^2)_x = 0
    phi_t + rho + |psi|^2 = 0

(coefficients already specialized to delta = sigma1 = M = 1, sigma3 = 0).
Decoupling the wave part and splitting into half-wave components gives the
five-field system in (psi, rho_+, rho_-, varphi_+, varphi_-), where
rho_pm = rho ± i omega^{-1} rho_t and varphi_pm = d/dx (phi ± i omega^{-1} phi_t).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ContractViolationError
from .spectral import (
    ComplexField,
    Grid,
    apply_symbol,
    make_multiplier,
    to_frequency,
    to_physical,
)


@dataclass(frozen=True)
class ModelParams:
    """Coupling coefficients; delta = sigma1 = M = 1 and sigma3 = 0 are fixed."""

    sigma2: float = 1.0
    W: float = 1.0
    D: float = 0.0
    epsilon: float = 1.0
    # When True, the half-wave sources G and H carry the extra linear
    # terms ∓ omega^{-1} rho_pm / ∓ omega^{-1} varphi_pm seen in one of the
    # two stated forms of the cutoff equations.  Off by default.
    extra_cutoff_terms: bool = False

    def __post_init__(self):
        if not self.W >= 0:
            raise ContractViolationError(f"W must be nonnegative, got {self.W}")
        if not self.epsilon > 0:
            raise ContractViolationError(f"epsilon must be positive, got {self.epsilon}")


@dataclass
class ZRState:
    """Physical triple (psi, rho, phi) with optional time-derivative slots."""

    psi: ComplexField
    rho: ComplexField
    phi: ComplexField
    rho_t: ComplexField | None = None
    phi_t: ComplexField | None = None

    def __post_init__(self):
        grid = self.psi.grid
        for name in ("rho", "phi", "rho_t", "phi_t"):
            f = getattr(self, name)
            if f is not None and f.grid != grid:
                raise ContractViolationError(f"{name} lives on a different grid")

    @property
    def grid(self) -> Grid:
        return self.psi.grid

    def copy(self) -> "ZRState":
        return ZRState(
            self.psi.copy(),
            self.rho.copy(),
            self.phi.copy(),
            None if self.rho_t is None else self.rho_t.copy(),
            None if self.phi_t is None else self.phi_t.copy(),
        )


@dataclass
class PlusMinusState:
    """Five-field half-wave reformulation."""

    psi: ComplexField
    rho_plus: ComplexField
    rho_minus: ComplexField
    varphi_plus: ComplexField
    varphi_minus: ComplexField

    @property
    def grid(self) -> Grid:
        return self.psi.grid

    def fields(self) -> list[ComplexField]:
        return [self.psi, self.rho_plus, self.rho_minus, self.varphi_plus, self.varphi_minus]


def _half_wave_pair(f: ComplexField, f_t: ComplexField, d_dx: bool):
    """Return g_pm = P(f ± i omega^{-1} f_t), P = d/dx when requested."""
    grid = f.grid
    fh = to_frequency(f).values
    ft_h = to_frequency(f_t).values
    winv = make_multiplier(grid, "omega_inv").symbol
    corr = 1j * winv * ft_h
    plus = fh + corr
    minus = fh - corr
    if d_dx:
        dx = make_multiplier(grid, "dx").symbol
        plus = dx * plus
        minus = dx * minus
    return (
        to_physical(ComplexField(grid, plus, "frequency")),
        to_physical(ComplexField(grid, minus, "frequency")),
    )


def decompose(state: ZRState) -> PlusMinusState:
    """Split (rho, phi) with their time derivatives into half-wave fields.

    The zero mode of omega^{-1} is projected out, so the mean of rho_t and
    phi_t does not survive a decompose/recombine round trip.
    """
    if state.rho_t is None or state.phi_t is None:
        raise ContractViolationError("decompose requires rho_t and phi_t slots")
    rp, rm = _half_wave_pair(state.rho, state.rho_t, d_dx=False)
    vp, vm = _half_wave_pair(state.phi, state.phi_t, d_dx=True)
    return PlusMinusState(state.psi.copy(), rp, rm, vp, vm)


def recombine(pm: PlusMinusState):
    """Invert decompose: returns (rho, varphi, rho_t, varphi_t).

    varphi is phi_x, not phi; the time derivatives come back with their
    spatial mean projected off.
    """
    grid = pm.grid
    omega = make_multiplier(grid, "omega").symbol

    def pair(plus: ComplexField, minus: ComplexField):
        ph = to_frequency(plus).values
        mh = to_frequency(minus).values
        avg = 0.5 * (ph + mh)
        der = omega * (ph - mh) / 2j
        return (
            to_physical(ComplexField(grid, avg, "frequency")),
            to_physical(ComplexField(grid, der, "frequency")),
        )

    rho, rho_t = pair(pm.rho_plus, pm.rho_minus)
    varphi, varphi_t = pair(pm.varphi_plus, pm.varphi_minus)
    return rho, varphi, rho_t, varphi_t


def nonlinearity_F(pm: PlusMinusState, params: ModelParams) -> ComplexField:
    """Source of the envelope equation:

    F = sigma2 |psi|^2 psi + (W/2)(rho_+ + rho_-) psi + (W D/2)(varphi_+ + varphi_-) psi
    """
    psi = to_physical(pm.psi).values
    rp = to_physical(pm.rho_plus).values
    rm = to_physical(pm.rho_minus).values
    vp = to_physical(pm.varphi_plus).values
    vm = to_physical(pm.varphi_minus).values
    out = (
        params.sigma2 * np.abs(psi) ** 2 * psi
        + 0.5 * params.W * (rp + rm) * psi
        + 0.5 * params.W * params.D * (vp + vm) * psi
    )
    return ComplexField(pm.grid, out, "physical")


def _abs2_and_rate(psi: ComplexField, psi_t: ComplexField):
    """|psi|^2 and its time derivative 2 Re(conj(psi) psi_t), physical space."""
    p = to_physical(psi).values
    pt = to_physical(psi_t).values
    return np.abs(p) ** 2, 2.0 * np.real(np.conj(p) * pt)


def nonlinearity_G(
    psi: ComplexField,
    psi_t: ComplexField,
    params: ModelParams,
    sign: int,
    rho_pm: ComplexField | None = None,
) -> ComplexField:
    """Half-wave density source: ± omega^{-1} Lap(|psi|^2) ± D omega^{-1} d/dx d/dt(|psi|^2).

    sign is +1 or -1.  With params.extra_cutoff_terms the term
    ∓ omega^{-1} rho_pm is added (rho_pm must then be supplied).
    """
    s = _check_sign(sign)
    grid = psi.grid
    a2, a2t = _abs2_and_rate(psi, psi_t)
    f = ComplexField(grid, a2, "physical")
    ft = ComplexField(grid, a2t, "physical")

    term1 = apply_symbol(grid, "laplacian", f)
    term1 = apply_symbol(grid, "omega_inv", term1)
    term2 = apply_symbol(grid, "dx", ft)
    term2 = apply_symbol(grid, "omega_inv", term2)

    out = s * (term1.values + params.D * term2.values)
    if params.extra_cutoff_terms:
        if rho_pm is None:
            raise ContractViolationError("extra_cutoff_terms requires rho_pm")
        out = out - s * apply_symbol(grid, "omega_inv", to_physical(rho_pm)).values
    return ComplexField(grid, out, "physical")


def nonlinearity_H(
    psi: ComplexField,
    psi_t: ComplexField,
    params: ModelParams,
    sign: int,
    varphi_pm: ComplexField | None = None,
) -> ComplexField:
    """Half-wave velocity source: ∓ D omega^{-1} (|psi|^2)_xx ± omega^{-1} (|psi|^2)_xt."""
    s = _check_sign(sign)
    grid = psi.grid
    a2, a2t = _abs2_and_rate(psi, psi_t)
    f = ComplexField(grid, a2, "physical")
    ft = ComplexField(grid, a2t, "physical")

    term1 = apply_symbol(grid, "dx", apply_symbol(grid, "dx", f))
    term1 = apply_symbol(grid, "omega_inv", term1)
    term2 = apply_symbol(grid, "dx", ft)
    term2 = apply_symbol(grid, "omega_inv", term2)

    out = -s * params.D * term1.values + s * term2.values
    if params.extra_cutoff_terms:
        if varphi_pm is None:
            raise ContractViolationError("extra_cutoff_terms requires varphi_pm")
        out = out - s * apply_symbol(grid, "omega_inv", to_physical(varphi_pm)).values
    return ComplexField(grid, out, "physical")


def _check_sign(sign) -> float:
    if sign in (1, +1, "+"):
        return 1.0
    if sign in (-1, "-"):
        return -1.0
    raise ContractViolationError(f"sign must be +1 or -1, got {sign!r}")


def psi_time_derivative(pm: PlusMinusState, params: ModelParams) -> ComplexField:
    """psi_t from the envelope equation itself:

    psi_t = epsilon * (i Lap psi - i F)

    The epsilon scaling multiplies both the linear and nonlinear terms of
    the envelope equation; the acoustic equations are unaffected.
    """
    grid = pm.grid
    lap = apply_symbol(grid, "laplacian", to_physical(pm.psi))
    F = nonlinearity_F(pm, params)
    vals = params.epsilon * 1j * (lap.values - F.values)
    return ComplexField(grid, vals, "physical")


def mass(state: ZRState) -> float:
    """Quadrature of the integral of |psi|^2 over the box."""
    p = to_physical(state.psi).values
    return float(np.sum(np.abs(p) ** 2) * state.grid.cell_volume)


def energy(state: ZRState, params: ModelParams) -> float:
    """Conserved energy functional, specialized to delta=sigma1=M=1, sigma3=0:

    E = int |grad psi|^2 + (W/2) rho^2 + (W/2) |grad phi|^2
        + (sigma2/2) |psi|^4 + W rho |psi|^2 + D W |psi|^2 phi_x  dx
    """
    grid = state.grid
    psi = to_physical(state.psi).values
    rho = to_physical(state.rho).values.real
    phi = to_physical(state.phi).values.real

    grad2_psi = _gradient_sq(state.psi)
    grad2_phi = _gradient_sq(state.phi)
    phi_x = to_physical(apply_symbol(grid, "dx", to_physical(state.phi))).values.real

    a2 = np.abs(psi) ** 2
    dens = (
        grad2_psi
        + 0.5 * params.W * rho**2
        + 0.5 * params.W * grad2_phi
        + 0.5 * params.sigma2 * a2**2
        + params.W * rho * a2
        + params.D * params.W * a2 * phi_x
    )
    return float(np.sum(dens) * grid.cell_volume)


def _gradient_sq(f: ComplexField) -> np.ndarray:
    """Pointwise |grad f|^2 computed spectrally."""
    grid = f.grid
    fh = to_frequency(f)
    total = np.zeros(grid.shape)
    for xi in grid.frequencies():
        comp = to_physical(ComplexField(grid, 1j * xi * fh.values, "frequency")).values
        total += np.abs(comp) ** 2
    return total
