"""Run configuration and initial-data recipes."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError
from .model import ModelParams, ZRState
from .spectral import ComplexField, Grid, to_frequency, to_physical

RECIPES = ("gaussian", "plane-wave", "random-band-limited", "zero")


@dataclass
class SimConfig:
    """Everything a simulation run needs, validated on construction."""

    dim: int = 2
    n: int = 64
    length: float = 32.0 * np.pi
    dt: float = 1e-3
    t_end: float = 1.0
    params: ModelParams = field(default_factory=ModelParams)
    recipe: str = "gaussian"
    amplitude: float = 1.0
    width: float = 1.0
    mode: tuple = (1, 0)
    normalize_h1: float | None = None
    seed: int | None = None
    diagnostics_stride: int = 1
    dealias: bool = True
    blowup_factor: float = 1e6

    def __post_init__(self):
        if self.dt <= 0:
            raise ConfigurationError(f"dt must be positive, got {self.dt}")
        if self.t_end < 0:
            raise ConfigurationError(f"t_end must be >= 0, got {self.t_end}")
        if self.recipe not in RECIPES:
            raise ConfigurationError(f"unknown initial-data recipe {self.recipe!r}")
        if self.recipe == "random-band-limited" and self.seed is None:
            raise ConfigurationError("random recipe requires a seed")
        if self.diagnostics_stride < 1:
            raise ConfigurationError("diagnostics_stride must be >= 1")
        # Grid construction validates dim / n / length.
        self.grid = Grid(self.dim, self.n, self.length)


def h1_norm(f: ComplexField) -> float:
    """Discrete H1 norm sqrt(int |f|^2 + |grad f|^2 dx)."""
    grid = f.grid
    fh = to_frequency(f).values
    w = 1.0 + grid.xi_squared
    return float(np.sqrt(np.sum(w * np.abs(fh) ** 2) * grid.cell_volume))


def make_initial_state(config: SimConfig) -> ZRState:
    """Build the initial (psi, rho, phi) triple from the named recipe."""
    grid = config.grid
    coords = grid.coordinates()
    r2 = sum(x**2 for x in coords)

    if config.recipe == "zero":
        psi = np.zeros(grid.shape, dtype=np.complex128)
    elif config.recipe == "gaussian":
        psi = config.amplitude * np.exp(-r2 / (2.0 * config.width**2)) + 0j
    elif config.recipe == "plane-wave":
        mode = tuple(config.mode)
        if len(mode) != grid.dim:
            raise ConfigurationError(f"mode must have {grid.dim} components")
        phase = sum(
            (2.0 * np.pi * k / grid.length) * x for k, x in zip(mode, coords)
        )
        psi = config.amplitude * np.exp(1j * phase)
    elif config.recipe == "random-band-limited":
        psi = _random_band_limited(grid, config.seed, config.amplitude)
    else:  # pragma: no cover - guarded in __post_init__
        raise ConfigurationError(config.recipe)

    psi_f = ComplexField(grid, psi, "physical")
    if config.normalize_h1 is not None:
        norm = h1_norm(psi_f)
        if norm > 0:
            psi_f = ComplexField(grid, psi * (config.normalize_h1 / norm), "physical")

    zero = np.zeros(grid.shape, dtype=np.complex128)
    return ZRState(
        psi=psi_f,
        rho=ComplexField(grid, zero.copy(), "physical"),
        phi=ComplexField(grid, zero.copy(), "physical"),
    )


def _random_band_limited(grid: Grid, seed: int, amplitude: float, band: int = 4):
    """Random smooth field: seeded coefficients on modes |k|_inf <= band."""
    rng = np.random.default_rng(seed)
    coeffs = np.zeros(grid.shape, dtype=np.complex128)
    idx_range = range(-band, band + 1)
    if grid.dim == 2:
        modes = [(i, j) for i in idx_range for j in idx_range]
    else:
        modes = [(i, j, k) for i in idx_range for j in idx_range for k in idx_range]
    for m in modes:
        c = rng.normal() + 1j * rng.normal()
        coeffs[tuple(np.mod(m, grid.n))] = c
    field_f = ComplexField(grid, coeffs, "frequency")
    vals = to_physical(field_f).values
    peak = np.max(np.abs(vals))
    if peak > 0:
        vals = vals * (amplitude / peak)
    return vals
