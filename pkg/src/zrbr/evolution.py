"""Time integration: Strang split-step for the physical system and a
literal cutoff Duhamel-Picard iterator for the half-wave system."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .config import SimConfig, make_initial_state
from .errors import ConfigurationError, ContractViolationError, DivergenceError
from .model import (
    ModelParams,
    PlusMinusState,
    ZRState,
    energy,
    mass,
    nonlinearity_F,
    nonlinearity_G,
    nonlinearity_H,
    psi_time_derivative,
)
from .spectral import ComplexField, Grid, dealias_mask, to_frequency, to_physical


# ---------------------------------------------------------------------------
# Smooth time cutoff
# ---------------------------------------------------------------------------

def smooth_cutoff(t):
    """Even C-infinity bump: 1 on |t| <= 1, 0 on |t| >= 2.

    The bridge on 1 < |t| < 2 is the standard exp(-1/x) partition of unity.
    """
    t = np.asarray(t, dtype=np.float64)
    a = np.abs(t)
    out = np.zeros_like(a)
    out[a <= 1.0] = 1.0
    mid = (a > 1.0) & (a < 2.0)
    if np.any(mid):
        s = a[mid] - 1.0  # in (0, 1)
        f_up = np.exp(-1.0 / (1.0 - s))
        f_down = np.exp(-1.0 / s)
        out[mid] = f_up / (f_up + f_down)
    return out if out.ndim else float(out)


@dataclass
class CutoffProfile:
    """lambda(t) and lambda_T(t) = lambda(t/T) sampled on a time grid."""

    T: float
    times: np.ndarray
    lam: np.ndarray
    lam_T: np.ndarray


def make_cutoff(T: float, times) -> CutoffProfile:
    if not (0.0 < T <= 1.0):
        raise ConfigurationError(f"cut scale T must be in (0, 1], got {T}")
    times = np.asarray(times, dtype=np.float64)
    return CutoffProfile(T, times, smooth_cutoff(times), smooth_cutoff(times / T))


# ---------------------------------------------------------------------------
# Strang split-step integrator
# ---------------------------------------------------------------------------

def _linear_flow(state: ZRState, t: float, params: ModelParams) -> ZRState:
    """Exact spectral flow of the linear part over time t.

    psi by the free Schrodinger group (scaled by epsilon); (rho, phi) by the
    exact rotation of rho_t = -Lap phi, phi_t = -rho.  The zero mode keeps
    rho constant and moves phi by -t*rho.
    """
    grid = state.grid
    xi2 = grid.xi_squared
    absxi = grid.xi_modulus

    psi_h = to_frequency(state.psi).values * np.exp(-1j * params.epsilon * t * xi2)

    rho_h = to_frequency(state.rho).values
    phi_h = to_frequency(state.phi).values
    c = np.cos(absxi * t)
    s = np.sin(absxi * t)
    sinc = np.empty_like(absxi)
    nz = absxi > 0
    sinc[nz] = s[nz] / absxi[nz]
    sinc[~nz] = t
    rho_new = c * rho_h + absxi * s * phi_h
    phi_new = -sinc * rho_h + c * phi_h

    return ZRState(
        ComplexField(grid, psi_h, "frequency"),
        to_physical(ComplexField(grid, rho_new, "frequency")),
        to_physical(ComplexField(grid, phi_new, "frequency")),
    )


def strang_step(state: ZRState, dt: float, params: ModelParams, dealias: bool = True) -> ZRState:
    """One Strang step L(dt/2) N(dt) L(dt/2).

    The nonlinear substep exploits that |psi|^2 is invariant under the phase
    rotation: rho and phi are advanced with the frozen source, and psi is
    rotated with the substep-time-averaged rho and phi_x.
    """
    if dt == 0.0:
        return state.copy()

    grid = state.grid
    half = _linear_flow(state, dt / 2.0, params)

    psi = to_physical(half.psi).values
    rho = to_physical(half.rho).values.real
    phi = to_physical(half.phi).values.real
    a2 = np.abs(psi) ** 2

    a2_h = np.fft.fftn(a2, norm="ortho")
    if dealias:
        a2_h = a2_h * dealias_mask(grid)
    xi1 = grid.frequencies()[0]
    a2_x = np.fft.ifftn(1j * xi1 * a2_h, norm="ortho").real
    a2_smooth = np.fft.ifftn(a2_h, norm="ortho").real

    rho_new = rho - dt * params.D * a2_x
    phi_new = phi - dt * a2_smooth

    phi_x = np.fft.ifftn(1j * xi1 * np.fft.fftn(phi, norm="ortho"), norm="ortho").real
    phi_new_x = np.fft.ifftn(1j * xi1 * np.fft.fftn(phi_new, norm="ortho"), norm="ortho").real

    rho_bar = 0.5 * (rho + rho_new)
    phi_x_bar = 0.5 * (phi_x + phi_new_x)
    phase = params.sigma2 * a2 + params.W * rho_bar + params.W * params.D * phi_x_bar
    psi_new = psi * np.exp(-1j * params.epsilon * dt * phase)

    mid = ZRState(
        ComplexField(grid, psi_new, "physical"),
        ComplexField(grid, rho_new + 0j, "physical"),
        ComplexField(grid, phi_new + 0j, "physical"),
    )
    out = _linear_flow(mid, dt / 2.0, params)
    out = ZRState(to_physical(out.psi), out.rho, out.phi)

    for name in ("psi", "rho", "phi"):
        vals = getattr(out, name).values
        if not np.all(np.isfinite(vals)):
            raise DivergenceError(f"non-finite {name} after step", time=None)
    return out


@dataclass
class Trajectory:
    """Time stamps, diagnostic series and (optionally) state snapshots."""

    times: list = field(default_factory=list)
    mass: list = field(default_factory=list)
    energy: list = field(default_factory=list)
    max_abs_psi: list = field(default_factory=list)
    l2_rho: list = field(default_factory=list)
    l2_phi: list = field(default_factory=list)
    states: list = field(default_factory=list)
    store_states: bool = False

    def record(self, t: float, state: ZRState, params: ModelParams):
        if self.times and t <= self.times[-1]:
            raise ContractViolationError("time stamps must be strictly increasing")
        self.times.append(t)
        self.mass.append(mass(state))
        self.energy.append(energy(state, params))
        self.max_abs_psi.append(float(np.max(np.abs(to_physical(state.psi).values))))
        self.l2_rho.append(state.rho.l2_norm())
        self.l2_phi.append(state.phi.l2_norm())
        if self.store_states:
            self.states.append(state.copy())

    def __len__(self):
        return len(self.times)


def run_simulation(config: SimConfig, store_states: bool = False) -> Trajectory:
    """Integrate from t=0 to t_end, recording diagnostics every stride steps.

    The divergence proxy stops the run as soon as any field's sup-norm
    exceeds blowup_factor times its initial value; the partial trajectory is
    attached to the raised DivergenceError.
    """
    state = make_initial_state(config)
    traj = Trajectory(store_states=store_states)
    traj.record(0.0, state, config.params)
    if not store_states:
        traj.states = [state.copy()]

    n_steps = int(round(config.t_end / config.dt))
    raw_sup = {
        name: float(np.max(np.abs(to_physical(getattr(state, name)).values)))
        for name in ("psi", "rho", "phi")
    }
    # Fields starting at zero are judged against the largest initial field,
    # otherwise any excitation at all would trip the proxy.
    floor = max(max(raw_sup.values()), 1e-300)
    initial_sup = {name: max(v, floor) for name, v in raw_sup.items()}

    t = 0.0
    for k in range(n_steps):
        try:
            state = strang_step(state, config.dt, config.params, dealias=config.dealias)
        except DivergenceError as err:
            raise DivergenceError(str(err), time=t, trajectory=traj) from None
        t = (k + 1) * config.dt
        for name, sup0 in initial_sup.items():
            sup = np.max(np.abs(to_physical(getattr(state, name)).values))
            if sup > config.blowup_factor * sup0:
                raise DivergenceError(
                    f"{name} sup-norm exceeded {config.blowup_factor:g} x initial",
                    time=t,
                    trajectory=traj,
                )
        if (k + 1) % config.diagnostics_stride == 0 or k == n_steps - 1:
            traj.record(t, state, config.params)
    if not store_states:
        traj.states.append(state.copy())
    return traj


# ---------------------------------------------------------------------------
# Cutoff Duhamel-Picard iteration for the half-wave system
# ---------------------------------------------------------------------------

_COMPONENTS = ("psi", "rho_plus", "rho_minus", "varphi_plus", "varphi_minus")


@dataclass
class PicardReport:
    T: float
    n_time: int
    diffs: list
    ratios: list
    contraction_factor: float
    contracting: bool


def _phase_functions(grid: Grid, epsilon: float) -> dict:
    """Dispersion symbol p(xi) per component; free group is exp(-i t p)."""
    xi2 = grid.xi_squared
    absxi = grid.xi_modulus
    return {
        "psi": epsilon * xi2,
        "rho_plus": absxi,
        "rho_minus": -absxi,
        "varphi_plus": absxi,
        "varphi_minus": -absxi,
    }


def _anchored_cumtrapz(values: np.ndarray, dt: float, zero_index: int) -> np.ndarray:
    """Trapezoid cumulative integral along axis 0, zero at the given index."""
    seg = 0.5 * dt * (values[1:] + values[:-1])
    out = np.zeros_like(values)
    np.cumsum(seg, axis=0, out=out[1:])
    return out - out[zero_index]


def picard_iterate(
    initial: PlusMinusState,
    T: float,
    n_iters: int,
    params: ModelParams,
    n_time: int = 64,
    burn_in: int = 2,
):
    """Iterate the cutoff Duhamel equations on the window [-2T, 2T).

    Iterate 0 is the cutoff free flow lambda(t) * group(t) * u0 per
    component; each following iterate applies the retarded integral with the
    nonlinearity screened by lambda_{2T}(s).  Returns the list of iterates
    (dicts of space-time value arrays, physical space) and a PicardReport of
    successive-difference norms and the empirical contraction factor.
    """
    if not (0.0 < T <= 1.0):
        raise ConfigurationError(f"T must be in (0, 1], got {T}")
    if n_time < 4 or n_time % 2:
        raise ConfigurationError("n_time must be even and >= 4")

    grid = initial.grid
    dt = 4.0 * T / n_time
    times = -2.0 * T + dt * np.arange(n_time)
    zero_index = n_time // 2

    lam = smooth_cutoff(times)
    lam_T = smooth_cutoff(times / T)
    lam_2T = smooth_cutoff(times / (2.0 * T))

    phases = _phase_functions(grid, params.epsilon)
    init_hat = {name: to_frequency(f).values for name, f in zip(_COMPONENTS, initial.fields())}

    # Free part lambda(t) * exp(-i t p) * u0_hat, evaluated in physical space.
    free = {}
    for name in _COMPONENTS:
        p = phases[name]
        prop = np.exp(-1j * times.reshape((-1,) + (1,) * grid.dim) * p[None])
        free[name] = np.fft.ifftn(
            lam.reshape((-1,) + (1,) * grid.dim) * prop * init_hat[name][None],
            axes=tuple(range(1, grid.dim + 1)),
            norm="ortho",
        )

    duhamel_coef = {name: (params.epsilon if name == "psi" else 1.0) for name in _COMPONENTS}
    sign_of = {"rho_plus": 1, "rho_minus": -1, "varphi_plus": 1, "varphi_minus": -1}

    def sources(current: dict) -> dict:
        """Nonlinear sources at every time sample, screened by lambda_2T."""
        out = {name: np.empty_like(current[name]) for name in _COMPONENTS}
        for j in range(n_time):
            s = lam_2T[j]
            pm = PlusMinusState(
                *[ComplexField(grid, s * current[name][j], "physical") for name in _COMPONENTS]
            )
            psi_t = psi_time_derivative(pm, params)
            out["psi"][j] = nonlinearity_F(pm, params).values
            for name in ("rho_plus", "rho_minus"):
                out[name][j] = nonlinearity_G(
                    pm.psi, psi_t, params, sign_of[name],
                    rho_pm=getattr(pm, name) if params.extra_cutoff_terms else None,
                ).values
            for name in ("varphi_plus", "varphi_minus"):
                out[name][j] = nonlinearity_H(
                    pm.psi, psi_t, params, sign_of[name],
                    varphi_pm=getattr(pm, name) if params.extra_cutoff_terms else None,
                ).values
        return out

    iterates = [free]
    diffs = []
    spatial_axes = tuple(range(1, grid.dim + 1))
    tshape = (-1,) + (1,) * grid.dim

    for _ in range(n_iters):
        current = iterates[-1]
        q = sources(current)
        nxt = {}
        for name in _COMPONENTS:
            p = phases[name]
            q_hat = np.fft.fftn(q[name], axes=spatial_axes, norm="ortho")
            integrand = np.exp(1j * times.reshape(tshape) * p[None]) * q_hat
            integral = _anchored_cumtrapz(integrand, dt, zero_index)
            retarded = np.exp(-1j * times.reshape(tshape) * p[None]) * integral
            conv_hat = lam_T.reshape(tshape) * retarded
            nxt[name] = (
                free[name]
                - 1j
                * duhamel_coef[name]
                * np.fft.ifftn(conv_hat, axes=spatial_axes, norm="ortho")
            )
        d = max(
            float(
                np.max(
                    np.sqrt(
                        np.sum(np.abs(nxt[name] - current[name]) ** 2, axis=spatial_axes)
                        * grid.cell_volume
                    )
                )
            )
            for name in _COMPONENTS
        )
        diffs.append(d)
        iterates.append(nxt)

    ratios = []
    for a, b in zip(diffs[:-1], diffs[1:]):
        ratios.append(0.0 if a == 0.0 else b / a)
    # Ratios whose predecessor difference has fallen to round-off noise say
    # nothing about contraction; exclude them from the measured factor.
    floor = diffs[0] * 1e-12 if diffs else 0.0
    tail = [r for r, a in zip(ratios, diffs[:-1]) if a > floor]
    tail = tail[burn_in - 1 :] if len(tail) >= burn_in else tail
    factor = max(tail) if tail else 0.0
    return iterates, PicardReport(
        T=T,
        n_time=n_time,
        diffs=diffs,
        ratios=ratios,
        contraction_factor=factor,
        contracting=factor < 1.0,
    )
