"""Experiment drivers and bit-stable report emission.

Every experiment writes into an output directory: CSV tables with
17-significant-digit floats (lossless round trip of float64) and a JSON
report with sorted keys.  Identical (config, seed) inputs produce identical
bytes; wall-clock timing is therefore printed to stdout, never written into
the report files.
"""

from __future__ import annotations

import json
import os
import struct

import numpy as np

from . import __version__
from .config import RECIPES, SimConfig, h1_norm, make_initial_state
from .errors import ConfigurationError, DivergenceError
from .evolution import picard_iterate, run_simulation
from .exponents import region_scan, verify_symbolic_inequalities
from .model import ModelParams, PlusMinusState, ZRState, decompose
from .spectral import ComplexField, Grid, zero_field
from .bourgain import (
    SCHRODINGER,
    WAVE_MINUS,
    WAVE_PLUS,
    NO_DISPERSION,
    SpaceTimeField,
    free_evolution,
    mixed_norm,
    random_band_limited,
    spatial_sobolev_sup,
    xsb_norm,
    ys_norm,
)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_DIVERGENCE = 3
EXIT_CAP_EXCEEDED = 4

# Empirical worst-constant caps for the five elementary inequalities.
INEQUALITY_CAPS = {
    "ineq1": 1.0,
    "ineq2": 10.0,
    "ineq3": 10.0,
    "ineq4": 1.01,
    "ineq5": 10.0,
}

_CONFIG_KEYS = {
    "dim": int,
    "n": int,
    "length": float,
    "dt": float,
    "t_end": float,
    "sigma2": float,
    "W": float,
    "D": float,
    "epsilon": float,
    "recipe": str,
    "amplitude": float,
    "width": float,
    "mode": list,
    "normalize_h1": float,
    "seed": int,
    "diagnostics_stride": int,
    "dealias": bool,
    "blowup_factor": float,
}


def format_float(x: float) -> str:
    """Decimal text that round-trips any finite float64."""
    return f"{float(x):.17g}"


def write_csv(path: str, header: list, rows: list):
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(
                ",".join(
                    format_float(v) if isinstance(v, float) else str(v) for v in row
                )
                + "\n"
            )


def write_report(path: str, report: dict):
    with open(path, "w", newline="\n") as fh:
        json.dump(report, fh, sort_keys=True, indent=2)
        fh.write("\n")


def make_report(command: str, config_echo: dict, master_seed, payload: dict) -> dict:
    return {
        "command": command,
        "config": config_echo,
        "tool_version": __version__,
        "master_seed": master_seed,
        "divergence_proxy": "sup-norm growth factor 1e6 over the initial field",
        "payload": payload,
    }


def config_from_dict(doc: dict, seed_override=None) -> tuple[SimConfig, dict]:
    """Validate a flat key-value document; unknown keys are hard errors."""
    unknown = sorted(set(doc) - set(_CONFIG_KEYS))
    if unknown:
        raise ConfigurationError(f"unknown config keys: {', '.join(unknown)}")
    doc = dict(doc)
    if seed_override is not None:
        doc["seed"] = int(seed_override)
    params = ModelParams(
        sigma2=float(doc.get("sigma2", 1.0)),
        W=float(doc.get("W", 1.0)),
        D=float(doc.get("D", 0.0)),
        epsilon=float(doc.get("epsilon", 1.0)),
    )
    kwargs = {}
    for key in (
        "dim", "n", "length", "dt", "t_end", "recipe", "amplitude", "width",
        "normalize_h1", "seed", "diagnostics_stride", "dealias", "blowup_factor",
    ):
        if key in doc:
            kwargs[key] = doc[key]
    if "mode" in doc:
        kwargs["mode"] = tuple(doc["mode"])
    cfg = SimConfig(params=params, **kwargs)
    echo = dict(doc)
    return cfg, echo


def load_config(path: str, seed_override=None) -> tuple[SimConfig, dict]:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except FileNotFoundError:
        raise ConfigurationError(f"config file not found: {path}")
    except json.JSONDecodeError as err:
        raise ConfigurationError(f"config is not valid JSON: {err}")
    if not isinstance(doc, dict):
        raise ConfigurationError("config must be a JSON object")
    return config_from_dict(doc, seed_override)


# ---------------------------------------------------------------------------
# Binary state snapshots
# ---------------------------------------------------------------------------

SNAPSHOT_MAGIC = b"ZRBR"
SNAPSHOT_VERSION = 1


def write_snapshot(path: str, state: ZRState):
    """Raw binary state dump; layout documented in the README."""
    grid = state.grid
    with open(path, "wb") as fh:
        fh.write(SNAPSHOT_MAGIC)
        fh.write(struct.pack("<II", SNAPSHOT_VERSION, grid.dim))
        fh.write(struct.pack("<" + "I" * grid.dim, *grid.shape))
        fh.write(struct.pack("<d", grid.length))
        for name in ("psi", "rho", "phi"):
            vals = np.ascontiguousarray(getattr(state, name).values)
            pairs = np.empty(vals.shape + (2,), dtype="<f8")
            pairs[..., 0] = vals.real
            pairs[..., 1] = vals.imag
            fh.write(pairs.tobytes())


def read_snapshot(path: str) -> ZRState:
    with open(path, "rb") as fh:
        if fh.read(4) != SNAPSHOT_MAGIC:
            raise ConfigurationError(f"{path}: not a state snapshot")
        version, dim = struct.unpack("<II", fh.read(8))
        if version != SNAPSHOT_VERSION:
            raise ConfigurationError(f"{path}: unsupported snapshot version {version}")
        shape = struct.unpack("<" + "I" * dim, fh.read(4 * dim))
        (length,) = struct.unpack("<d", fh.read(8))
        grid = Grid(dim, shape[0], length)
        fields = []
        count = int(np.prod(shape)) * 2
        for _ in range(3):
            flat = np.frombuffer(fh.read(count * 8), dtype="<f8").reshape(shape + (2,))
            fields.append(ComplexField(grid, flat[..., 0] + 1j * flat[..., 1], "physical"))
    return ZRState(*fields)


# ---------------------------------------------------------------------------
# Experiments
# ---------------------------------------------------------------------------

def cmd_simulate(config: SimConfig, echo: dict, out_dir: str, snapshots: bool = False):
    """Run the split-step integrator; emit diagnostics CSV and a report."""
    os.makedirs(out_dir, exist_ok=True)
    code = EXIT_OK
    diverged_at = None
    try:
        traj = run_simulation(config, store_states=snapshots)
    except DivergenceError as err:
        traj = err.trajectory
        diverged_at = err.time
        code = EXIT_DIVERGENCE

    rows = list(
        zip(traj.times, traj.mass, traj.energy, traj.max_abs_psi, traj.l2_rho, traj.l2_phi)
    )
    write_csv(
        os.path.join(out_dir, "diagnostics.csv"),
        ["t", "mass", "energy", "max_abs_psi", "l2_rho", "l2_phi"],
        rows,
    )
    if snapshots:
        for j, state in enumerate(traj.states):
            write_snapshot(os.path.join(out_dir, f"state_{j:06d}.bin"), state)

    payload = {
        "n_rows": len(rows),
        "final_time": traj.times[-1] if traj.times else 0.0,
        "diverged_at": diverged_at,
        "mass_initial": traj.mass[0] if traj.mass else 0.0,
        "mass_final": traj.mass[-1] if traj.mass else 0.0,
        "energy_initial": traj.energy[0] if traj.energy else 0.0,
        "energy_final": traj.energy[-1] if traj.energy else 0.0,
    }
    report = make_report("simulate", echo, echo.get("seed"), payload)
    write_report(os.path.join(out_dir, "report.json"), report)
    return code, report


def cmd_epsilon_scaling(config: SimConfig, echo: dict, eps_list, out_dir: str):
    """Sweep epsilon over a descending list; fit log T_proxy vs log(1/eps)."""
    eps_list = [float(e) for e in eps_list]
    if not eps_list or any(e <= 0 for e in eps_list):
        raise ConfigurationError("epsilon list must be nonempty and positive")
    if any(b >= a for a, b in zip(eps_list, eps_list[1:])):
        raise ConfigurationError("epsilon list must be strictly descending")
    os.makedirs(out_dir, exist_ok=True)

    rows = []
    for eps in eps_list:
        params = ModelParams(
            sigma2=config.params.sigma2,
            W=config.params.W,
            D=config.params.D,
            epsilon=eps,
            extra_cutoff_terms=config.params.extra_cutoff_terms,
        )
        cfg = SimConfig(
            dim=config.dim, n=config.n, length=config.length, dt=config.dt,
            t_end=config.t_end, params=params, recipe=config.recipe,
            amplitude=config.amplitude, width=config.width, mode=config.mode,
            normalize_h1=config.normalize_h1, seed=config.seed,
            diagnostics_stride=config.diagnostics_stride, dealias=config.dealias,
            blowup_factor=config.blowup_factor,
        )
        try:
            run_simulation(cfg)
            t_proxy = cfg.t_end
        except DivergenceError as err:
            t_proxy = err.time if err.time is not None else 0.0
        rows.append((eps, float(t_proxy)))

    write_csv(os.path.join(out_dir, "epsilon_scaling.csv"), ["epsilon", "T_proxy"], rows)

    if all(t == 0.0 for _, t in rows):
        raise DivergenceError("every run diverged at t=0; scaling fit is degenerate")
    # fit on runs with positive proxy times
    pts = [(np.log(1.0 / e), np.log(t)) for e, t in rows if t > 0.0]
    if len(pts) >= 2 and len({p[1] for p in pts}) == 1:
        alpha_hat = 0.0
    elif len(pts) >= 2:
        x, y = np.array([p[0] for p in pts]), np.array([p[1] for p in pts])
        alpha_hat = float(np.polyfit(x, y, 1)[0])
    else:
        alpha_hat = 0.0
    t_list = [t for _, t in rows]
    payload = {
        "rows": [{"epsilon": e, "T_proxy": t} for e, t in rows],
        "alpha_hat": alpha_hat,
        "t_proxy_nondecreasing": all(b >= a for a, b in zip(t_list, t_list[1:])),
    }
    report = make_report("epsilon-scaling", echo, echo.get("seed"), payload)
    write_report(os.path.join(out_dir, "report.json"), report)
    return EXIT_OK, report


def cmd_region(d: int, resolution: float, out_dir: str):
    """Admissible-region scan export with the containment verdict."""
    os.makedirs(out_dir, exist_ok=True)
    scan = region_scan(d, resolution)
    rows = [
        (float(b1), float(b2), int(adm), vio, float(mt))
        for b1, b2, adm, vio, mt in zip(
            scan.b1, scan.b2, scan.admissible, scan.violated_ids, scan.min_theta
        )
    ]
    write_csv(
        os.path.join(out_dir, f"region_d{d}.csv"),
        ["b1", "b2", "admissible", "violated_ids", "min_theta"],
        rows,
    )
    payload = {
        "d": d,
        "resolution": resolution,
        "n_samples": len(rows),
        "n_admissible": int(np.sum(scan.admissible)),
        "reference_box_contained": scan.reference_box_contained,
        "witnesses": scan.witnesses,
        "pointwise_b1_range": scan.pointwise_b1_range,
        "uniform_b1_range": scan.uniform_b1_range,
    }
    report = make_report("region", {"d": d, "resolution": resolution}, None, payload)
    write_report(os.path.join(out_dir, "report.json"), report)
    return EXIT_OK, report


def cmd_fuzz(n: int, seed: int, out_dir: str):
    """Randomized worst-constant search for the elementary inequalities."""
    os.makedirs(out_dir, exist_ok=True)
    payload = {"n_samples": n, "results": [], "caps": INEQUALITY_CAPS}
    exceeded = False
    for d in (2, 3):
        for res in verify_symbolic_inequalities(n, seed, d):
            cap = INEQUALITY_CAPS[res.inequality]
            ok = res.max_ratio <= cap
            exceeded = exceeded or not ok
            payload["results"].append(
                {
                    "inequality": res.inequality,
                    "branch": res.branch,
                    "d": res.d,
                    "max_ratio": res.max_ratio,
                    "cap": cap,
                    "within_cap": ok,
                    "argmax": res.argmax,
                }
            )
    report = make_report("fuzz", {"n": n}, seed, payload)
    write_report(os.path.join(out_dir, "report.json"), report)
    return (EXIT_CAP_EXCEEDED if exceeded else EXIT_OK), report


def initial_plus_minus(config: SimConfig) -> PlusMinusState:
    """Half-wave initial data from a SimConfig (zero acoustic fields)."""
    state = make_initial_state(config)
    state.rho_t = zero_field(state.grid)
    state.phi_t = zero_field(state.grid)
    return decompose(state)


def cmd_picard(config: SimConfig, echo: dict, T_list, n_iters: int, out_dir: str,
               n_time: int = 64):
    """Contraction table over a list of cut scales T."""
    os.makedirs(out_dir, exist_ok=True)
    initial = initial_plus_minus(config)
    rows = []
    reports = []
    for T in T_list:
        _, rep = picard_iterate(initial, float(T), n_iters, config.params, n_time=n_time)
        rows.append((float(T), rep.contraction_factor, int(rep.contracting)))
        reports.append(
            {
                "T": rep.T,
                "diffs": rep.diffs,
                "ratios": rep.ratios,
                "contraction_factor": rep.contraction_factor,
                "contracting": rep.contracting,
            }
        )
    write_csv(
        os.path.join(out_dir, "picard.csv"),
        ["T", "contraction_factor", "contracting"],
        rows,
    )
    payload = {"n_iters": n_iters, "n_time": n_time, "per_T": reports}
    report = make_report("picard", echo, echo.get("seed"), payload)
    write_report(os.path.join(out_dir, "report.json"), report)
    return EXIT_OK, report


_DISPERSIONS = {
    "schrodinger": SCHRODINGER,
    "wave_plus": WAVE_PLUS,
    "wave_minus": WAVE_MINUS,
    "none": NO_DISPERSION,
}

NORM_RECIPES = ("zero", "one-mode", "cutoff-free", "random-band-limited")


def _norms_field(recipe: str, seed: int, n: int = 16, n_time: int = 64) -> SpaceTimeField:
    grid = Grid(2, n, 2.0 * np.pi)
    t_half = 2.5
    if recipe == "zero":
        return SpaceTimeField(grid, t_half, np.zeros((n_time,) + grid.shape))
    if recipe == "one-mode":
        hat = np.zeros(grid.shape, dtype=np.complex128)
        hat[1, 2] = 1.0
        return free_evolution(ComplexField(grid, hat, "frequency"), t_half, n_time, SCHRODINGER)
    if recipe == "cutoff-free":
        rng = np.random.default_rng(seed)
        hat = np.zeros(grid.shape, dtype=np.complex128)
        for k in ((0, 1), (1, 0), (2, 1), (1, 3)):
            hat[k] = rng.normal() + 1j * rng.normal()
        f = free_evolution(ComplexField(grid, hat, "frequency"), t_half, n_time, SCHRODINGER)
        from .evolution import smooth_cutoff

        lam = smooth_cutoff(f.times).reshape((-1, 1, 1))
        return SpaceTimeField(grid, t_half, lam * f.values)
    if recipe == "random-band-limited":
        return random_band_limited(grid, t_half, n_time, seed)
    raise ConfigurationError(f"unknown norm recipe {recipe!r}; choose from {NORM_RECIPES}")


def cmd_norms(recipe: str, s: float, b: float, disp_name: str, seed: int, out_dir: str):
    """Norm panel for one synthetic field, with the embedding ratio."""
    if disp_name not in _DISPERSIONS:
        raise ConfigurationError(
            f"unknown dispersion {disp_name!r}; choose from {sorted(_DISPERSIONS)}"
        )
    os.makedirs(out_dir, exist_ok=True)
    disp = _DISPERSIONS[disp_name]
    f = _norms_field(recipe, seed)
    x = xsb_norm(f, s, b, disp)
    sup_hs = spatial_sobolev_sup(f, s)
    payload = {
        "recipe": recipe,
        "s": s,
        "b": b,
        "dispersion": disp_name,
        "xsb_norm": x,
        "ys_norm": ys_norm(f, s, disp),
        "l2_norm": f.l2_norm(),
        "mixed_norm_inf_2": mixed_norm(f, np.inf, 2),
        "sup_t_sobolev": sup_hs,
        "embedding_ratio": (sup_hs / x) if x > 0 else 0.0,
    }
    report = make_report(
        "norms", {"recipe": recipe, "s": s, "b": b, "dispersion": disp_name}, seed, payload
    )
    write_report(os.path.join(out_dir, "report.json"), report)
    return EXIT_OK, report
