"""Fixed-point iteration of the cutoff Duhamel equations.

The five-field half-wave system is solved on a time window [-2T, 2T) by
iterating: iterate 0 is the cutoff free flow, and each subsequent iterate
feeds the previous one through the retarded Duhamel integral with the
nonlinearity screened by a wider cutoff.  For small data the map is a
contraction and successive differences decay geometrically, with the
measured factor staying well below one on every window tried here.
"""

import numpy as np

from zrbr.config import h1_norm
from zrbr.evolution import picard_iterate
from zrbr.model import ModelParams, PlusMinusState
from zrbr.spectral import ComplexField, Grid


def band_limited(grid, seed):
    rng = np.random.default_rng(seed)
    hat = np.zeros(grid.shape, dtype=np.complex128)
    for i in range(-3, 4):
        for j in range(-3, 4):
            hat[i % grid.n, j % grid.n] = rng.normal() + 1j * rng.normal()
    return np.fft.ifftn(hat, norm="ortho")


def main():
    grid = Grid(2, 32, 8 * np.pi)
    psi = ComplexField(grid, band_limited(grid, 1))
    psi = ComplexField(grid, psi.values * (1e-3 / h1_norm(psi)))
    acoustic = [
        ComplexField(grid, 1e-3 * band_limited(grid, s).real + 0j) for s in (2, 3, 4, 5)
    ]
    init = PlusMinusState(psi, *acoustic)
    params = ModelParams(sigma2=-1.0, W=1.0, D=0.5)

    print("small data, |psi0|_{H1} = 1e-3, 32^2 spatial grid, 64 time samples")
    print(f"{'T':>6} {'contraction factor':>20} {'contracting':>12}")
    for T in (0.05, 0.1, 0.25, 0.5, 1.0):
        _, rep = picard_iterate(init, T=T, n_iters=5, params=params, n_time=64)
        print(f"{T:>6.2f} {rep.contraction_factor:>20.3e} {str(rep.contracting):>12}")

    print()
    _, rep = picard_iterate(init, T=0.1, n_iters=6, params=params, n_time=64)
    print("successive-difference norms at T = 0.1:")
    for k, d in enumerate(rep.diffs):
        print(f"  iterate {k} -> {k + 1}: {d:.3e}")


if __name__ == "__main__":
    main()
