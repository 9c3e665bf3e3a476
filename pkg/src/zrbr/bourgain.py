"""Discrete space-time norms and numerical checks of the linear and
Strichartz estimates.

A SpaceTimeField samples a complex field on a time window [-Tw, Tw) times
the periodic spatial box.  Its space-time transform is normalized so that
the discrete Plancherel identity matches the quadrature L2 norm:

    sum |fhat|^2 dtau dxi^d  ==  sum |f|^2 dt dx^d

which makes the weighted norms converge as the window and grid refine.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import ConfigurationError, ContractViolationError, PreconditionError
from .evolution import smooth_cutoff
from .exponents import strichartz_exponents
from .spectral import ComplexField, Grid

_TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class Dispersion:
    """Dispersion relation: the weight sigma = tau + p(xi)."""

    kind: str  # schrodinger | wave_plus | wave_minus | none

    def phase(self, grid: Grid) -> np.ndarray:
        if self.kind == "schrodinger":
            return grid.xi_squared
        if self.kind == "wave_plus":
            return grid.xi_modulus
        if self.kind == "wave_minus":
            return -grid.xi_modulus
        if self.kind == "none":
            return np.zeros(grid.shape)
        raise ConfigurationError(f"unknown dispersion {self.kind!r}")


SCHRODINGER = Dispersion("schrodinger")
WAVE_PLUS = Dispersion("wave_plus")
WAVE_MINUS = Dispersion("wave_minus")
NO_DISPERSION = Dispersion("none")


class SpaceTimeField:
    """Complex field on a (time x space) lattice, physical-space values."""

    def __init__(self, grid: Grid, t_half: float, values: np.ndarray):
        values = np.asarray(values, dtype=np.complex128)
        if values.ndim != grid.dim + 1 or values.shape[1:] != grid.shape:
            raise ContractViolationError(
                f"values shape {values.shape} incompatible with grid {grid.shape}"
            )
        if values.shape[0] % 2:
            raise ContractViolationError("number of time samples must be even")
        self.grid = grid
        self.t_half = float(t_half)
        self.values = values
        self.n_time = values.shape[0]

    @property
    def dt(self) -> float:
        return 2.0 * self.t_half / self.n_time

    @cached_property
    def times(self) -> np.ndarray:
        return -self.t_half + self.dt * np.arange(self.n_time)

    @property
    def zero_index(self) -> int:
        return self.n_time // 2

    @cached_property
    def taus(self) -> np.ndarray:
        return _TWO_PI * np.fft.fftfreq(self.n_time, d=self.dt)

    @property
    def dtau(self) -> float:
        return _TWO_PI / (2.0 * self.t_half)

    @property
    def dxi(self) -> float:
        return _TWO_PI / self.grid.length

    @property
    def cell_weight(self) -> float:
        """Frequency-lattice cell volume dtau * dxi^d."""
        return self.dtau * self.dxi**self.grid.dim

    def _phase_shift(self) -> np.ndarray:
        """exp(-i (tau t0 + xi . x0)) aligning the DFT with the window origin."""
        t0 = self.times[0]
        x0 = self.grid.axis_coordinates[0]
        phase = self.taus.reshape((-1,) + (1,) * self.grid.dim) * t0
        for xi in self.grid.frequencies():
            phase = phase + xi[None] * x0
        return np.exp(-1j * phase)

    def spacetime_hat(self) -> np.ndarray:
        """Continuum-normalized space-time Fourier transform on the lattice."""
        factor = (self.dt * self.grid.cell_volume) / _TWO_PI ** ((self.grid.dim + 1) / 2.0)
        return np.fft.fftn(self.values, norm=None) * self._phase_shift() * factor

    @classmethod
    def from_spacetime_hat(cls, grid: Grid, t_half: float, hat: np.ndarray) -> "SpaceTimeField":
        proto = cls(grid, t_half, np.zeros_like(hat))
        factor = (proto.dt * grid.cell_volume) / _TWO_PI ** ((grid.dim + 1) / 2.0)
        values = np.fft.ifftn(hat / proto._phase_shift() / factor, norm=None)
        return cls(grid, t_half, values)

    def l2_norm(self) -> float:
        """Space-time L2 norm with quadrature weights."""
        return float(
            np.sqrt(np.sum(np.abs(self.values) ** 2) * self.dt * self.grid.cell_volume)
        )

    def spatial_hats(self) -> np.ndarray:
        """Per-slice spatial transforms (ortho), shape (n_time, *grid)."""
        return np.fft.fftn(self.values, axes=tuple(range(1, self.grid.dim + 1)), norm="ortho")


def _weights(f: SpaceTimeField, disp: Dispersion):
    """(bracket(xi), bracket(tau + p(xi))) broadcast over the lattice."""
    bxi = np.sqrt(1.0 + f.grid.xi_squared)
    p = disp.phase(f.grid)
    sigma = f.taus.reshape((-1,) + (1,) * f.grid.dim) + p[None]
    bsigma = np.sqrt(1.0 + sigma**2)
    return bxi, bsigma


def xsb_norm(f: SpaceTimeField, s: float, b: float, disp: Dispersion) -> float:
    """Bourgain norm: weighted space-time L2 of the transform."""
    hat = f.spacetime_hat()
    bxi, bsigma = _weights(f, disp)
    total = np.sum(bxi[None] ** (2.0 * s) * bsigma ** (2.0 * b) * np.abs(hat) ** 2)
    return float(np.sqrt(total * f.cell_weight))


def hsb_norm(f: SpaceTimeField, s: float, b: float) -> float:
    """Space-time Sobolev norm (no dispersion in the tau weight)."""
    return xsb_norm(f, s, b, NO_DISPERSION)


def ys_norm(f: SpaceTimeField, s: float, disp: Dispersion) -> float:
    """l1 in tau of the weighted modulus, then l2 in xi, with cell weights."""
    hat = f.spacetime_hat()
    bxi, bsigma = _weights(f, disp)
    inner = np.sum(np.abs(hat) / bsigma, axis=0) * f.dtau
    total = np.sum(bxi ** (2.0 * s) * inner**2) * f.dxi**f.grid.dim
    return float(np.sqrt(total))


def mixed_norm(f: SpaceTimeField, q: float, r: float) -> float:
    """L^q in time of the L^r spatial norms, with quadrature weights.

    Infinite exponents are taken as the max over the corresponding axis.
    """
    for e in (q, r):
        if not (e >= 1.0 or np.isinf(e)):
            raise ConfigurationError(f"exponents must be >= 1 or inf, got {e}")
    a = np.abs(f.values)
    axes = tuple(range(1, f.grid.dim + 1))
    if np.isinf(r):
        per_slice = np.max(a, axis=axes)
    else:
        per_slice = (np.sum(a**r, axis=axes) * f.grid.cell_volume) ** (1.0 / r)
    if np.isinf(q):
        return float(np.max(per_slice))
    return float((np.sum(per_slice**q) * f.dt) ** (1.0 / q))


def spatial_sobolev_sup(f: SpaceTimeField, s: float) -> float:
    """sup over time slices of the spatial H^s norm."""
    hats = f.spatial_hats()
    w = (1.0 + f.grid.xi_squared) ** s
    norms = np.sqrt(np.sum(w[None] * np.abs(hats) ** 2, axis=tuple(range(1, f.grid.dim + 1)))
                    * f.grid.cell_volume)
    return float(np.max(norms))


# ---------------------------------------------------------------------------
# Field constructors
# ---------------------------------------------------------------------------

def free_evolution(g: ComplexField, t_half: float, n_time: int, disp: Dispersion) -> SpaceTimeField:
    """Space-time field of the free flow exp(-i t p(-i grad)) g."""
    grid = g.grid
    ghat = np.fft.fftn(np.asarray(g.values, dtype=np.complex128), norm="ortho") \
        if g.space == "physical" else g.values
    p = disp.phase(grid)
    proto = SpaceTimeField(grid, t_half, np.zeros((n_time,) + grid.shape, dtype=np.complex128))
    prop = np.exp(-1j * proto.times.reshape((-1,) + (1,) * grid.dim) * p[None])
    vals = np.fft.ifftn(prop * ghat[None], axes=tuple(range(1, grid.dim + 1)), norm="ortho")
    return SpaceTimeField(grid, t_half, vals)


def random_band_limited(
    grid: Grid,
    t_half: float,
    n_time: int,
    seed: int,
    time_band: int = 4,
    space_band: int = 2,
    cutoff: bool = True,
) -> SpaceTimeField:
    """Random space-time field with seeded coefficients on low (tau, xi) modes.

    The coefficient draw depends only on the bands and the seed, so refining
    n_time (or the spatial grid) samples the same underlying field; that is
    what makes refinement-stability checks meaningful.
    """
    if n_time <= 2 * time_band or grid.n <= 2 * space_band:
        raise ConfigurationError("lattice too coarse for the requested bands")
    rng = np.random.default_rng(seed)
    spatial_modes = _low_modes(grid.dim, space_band)
    coeffs = np.zeros((n_time,) + grid.shape, dtype=np.complex128)
    for m in range(-time_band, time_band + 1):
        for k in spatial_modes:
            c = rng.normal() + 1j * rng.normal()
            idx = (m % n_time,) + tuple(np.mod(k, grid.n))
            coeffs[idx] = c
    # values = sum c exp(i (tau_m t + xi_k x)) up to fixed per-mode phases;
    # "forward" normalization keeps the sum unscaled, so refining the lattice
    # samples the same continuum field.
    vals = np.fft.ifftn(coeffs, norm="forward")
    f = SpaceTimeField(grid, t_half, vals)
    if cutoff:
        lam = smooth_cutoff(f.times)
        f = SpaceTimeField(grid, t_half, lam.reshape((-1,) + (1,) * grid.dim) * vals)
    return f


def _low_modes(dim: int, band: int):
    rng_idx = range(-band, band + 1)
    if dim == 2:
        return [(i, j) for i in rng_idx for j in rng_idx]
    return [(i, j, k) for i in rng_idx for j in rng_idx for k in rng_idx]


# ---------------------------------------------------------------------------
# Retarded convolution and the linear estimate check
# ---------------------------------------------------------------------------

def retarded_convolution(q: SpaceTimeField, disp: Dispersion) -> SpaceTimeField:
    """int_0^t exp(-i (t-s) p) q(s) ds, trapezoid in s, anchored at t = 0."""
    grid = q.grid
    p = disp.phase(grid)
    axes = tuple(range(1, grid.dim + 1))
    q_hat = np.fft.fftn(q.values, axes=axes, norm="ortho")
    tshape = (-1,) + (1,) * grid.dim
    integrand = np.exp(1j * q.times.reshape(tshape) * p[None]) * q_hat
    seg = 0.5 * q.dt * (integrand[1:] + integrand[:-1])
    cum = np.zeros_like(integrand)
    np.cumsum(seg, axis=0, out=cum[1:])
    cum -= cum[q.zero_index]
    out_hat = np.exp(-1j * q.times.reshape(tshape) * p[None]) * cum
    return SpaceTimeField(grid, q.t_half, np.fft.ifftn(out_hat, axes=axes, norm="ortho"))


@dataclass
class RatioReport:
    ratios: list
    max_ratio: float
    meta: dict


def linear_estimate_ratio(
    q: SpaceTimeField,
    T: float,
    s: float,
    b: float,
    b_prime: float,
    disp: Dispersion,
    include_y_term: bool = True,
) -> float:
    """LHS/RHS for one source field q.

    LHS = || lambda_T * (U *_R q) ||_{X^{s,b}};
    RHS = T^{1-b+b'} ||q||_{X^{s,b'}} (+ T^{1/2-b} ||q||_{Y^s} when the Y
    term is included, i.e. when b' <= -1/2 would make the X term alone fail).
    """
    if not (b_prime <= 0.0 <= b <= b_prime + 1.0):
        raise PreconditionError(f"need b' <= 0 <= b <= b'+1, got b={b}, b'={b_prime}")
    if not (0.0 < T <= 1.0):
        raise PreconditionError(f"need 0 < T <= 1, got T={T}")
    conv = retarded_convolution(q, disp)
    lam_T = smooth_cutoff(conv.times / T)
    lhs_field = SpaceTimeField(
        q.grid, q.t_half, lam_T.reshape((-1,) + (1,) * q.grid.dim) * conv.values
    )
    lhs = xsb_norm(lhs_field, s, b, disp)
    rhs = T ** (1.0 - b + b_prime) * xsb_norm(q, s, b_prime, disp)
    if include_y_term:
        rhs += T ** (0.5 - b) * ys_norm(q, s, disp)
    if rhs == 0.0:
        return 0.0
    return lhs / rhs


def check_linear_estimate(
    sources: list,
    T: float,
    s: float,
    b: float,
    b_prime: float,
    disp: Dispersion,
    include_y_term: bool = True,
) -> RatioReport:
    """Batch version: max LHS/RHS ratio over a list of source fields."""
    ratios = [
        linear_estimate_ratio(q, T, s, b, b_prime, disp, include_y_term) for q in sources
    ]
    return RatioReport(
        ratios=ratios,
        max_ratio=max(ratios) if ratios else 0.0,
        meta={"T": T, "s": s, "b": b, "b_prime": b_prime, "disp": disp.kind,
              "include_y_term": include_y_term},
    )


# ---------------------------------------------------------------------------
# Strichartz estimate check
# ---------------------------------------------------------------------------

@dataclass
class StrichartzReport:
    q: float
    r: float
    theta: float
    lhs: float
    v_norm: float
    ratio: float


def strichartz_ratio(
    v: SpaceTimeField,
    a: float,
    a_prime: float,
    gamma: float,
    eta: float,
    b0: float,
    T: float,
    disp: Dispersion = SCHRODINGER,
) -> StrichartzReport:
    """Numerical check of the dispersive smoothing bound.

    The time-support hypothesis is enforced by pushing v through its inverse
    a'-weighting, multiplying by lambda_T, and pulling back; the reported
    ratio is LHS / ||v||_2 for the adjusted v.
    """
    wave = disp.kind in ("wave_plus", "wave_minus")
    exps = strichartz_exponents(a, a_prime, gamma, eta, b0, v.grid.dim, wave=wave)
    if not exps.feasible:
        raise PreconditionError(f"hypothesis violated: {exps.violated}")

    hat = v.spacetime_hat()
    _, bsigma = _weights(v, disp)

    # enforce support in |t| <= 2T of F^{-1}(<sigma>^{-a'} vhat)
    h = SpaceTimeField.from_spacetime_hat(v.grid, v.t_half, hat / bsigma**a_prime)
    lam_T = smooth_cutoff(h.times / T).reshape((-1,) + (1,) * v.grid.dim)
    h_cut = SpaceTimeField(v.grid, v.t_half, lam_T * h.values)
    hat_new = h_cut.spacetime_hat() * bsigma**a_prime
    v_new = SpaceTimeField.from_spacetime_hat(v.grid, v.t_half, hat_new)

    smoothed = SpaceTimeField.from_spacetime_hat(
        v.grid, v.t_half, np.abs(hat_new) / bsigma**a
    )
    lhs = mixed_norm(smoothed, exps.q, exps.r)
    v_norm = v_new.l2_norm()
    ratio = 0.0 if v_norm == 0.0 else lhs / v_norm
    return StrichartzReport(exps.q, exps.r, exps.theta, lhs, v_norm, ratio)
