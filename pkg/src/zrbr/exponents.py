"""Exponent arithmetic: admissibility constraints, T-gain exponents,
region scans, Strichartz exponent calculation and the randomized verifier
for the elementary symbolic inequalities."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, PreconditionError, SingularityError


def bracket_plus(lam, eps: float = 1e-6):
    """[lam]_+ : lam if lam > 0, a small eps at lam = 0, and 0 if lam < 0."""
    lam = np.asarray(lam, dtype=np.float64)
    out = np.where(lam > 0.0, lam, np.where(lam == 0.0, eps, 0.0))
    return out if out.ndim else float(out)


def bracket(x):
    """Japanese bracket <x> = (1 + |x|^2)^(1/2); x may be a vector array."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim and x.shape[-1] in (2, 3):
        return np.sqrt(1.0 + np.sum(x**2, axis=-1))
    return np.sqrt(1.0 + x**2)


@dataclass(frozen=True)
class ExponentParams:
    """The (b1, b2) parameter point with its derived exponents.

    k2 = 1 - 2 b2, c1 = 1 - b1, c2 = 1 - b2; b0 defaults to b1.
    """

    b1: float
    b2: float
    d: int
    b0: float | None = None
    eps_plus: float = 1e-6

    def __post_init__(self):
        if self.d not in (2, 3):
            raise ConfigurationError(f"d must be 2 or 3, got {self.d}")
        if self.b0 is None:
            object.__setattr__(self, "b0", self.b1)

    @property
    def k2(self) -> float:
        return 1.0 - 2.0 * self.b2

    @property
    def c1(self) -> float:
        return 1.0 - self.b1

    @property
    def c2(self) -> float:
        return 1.0 - self.b2


def derive(b1: float, b2: float, d: int, b0: float | None = None) -> ExponentParams:
    """Fill the derived exponents; range violations surface in check_constraints."""
    if not (np.isfinite(b1) and np.isfinite(b2)):
        raise ConfigurationError("b1, b2 must be finite")
    return ExponentParams(float(b1), float(b2), int(d), b0)


# ---------------------------------------------------------------------------
# Constraint ledger
# ---------------------------------------------------------------------------

@dataclass
class ConstraintEntry:
    constraint_id: str
    formula: str
    lhs: float
    rhs: float
    passed: bool


@dataclass
class ConstraintReport:
    entries: list
    admissible: bool

    def failed_ids(self) -> list[str]:
        return [e.constraint_id for e in self.entries if not e.passed]


# (id, formula text, lhs(b1,b2,d), rhs(b1,b2,d), strict)
_CONSTRAINTS = [
    ("base_b1", "b1 > 1/2", lambda b1, b2, d: b1, lambda b1, b2, d: 0.5, ">"),
    ("base_b2_low", "b2 >= 0", lambda b1, b2, d: b2, lambda b1, b2, d: 0.0, ">="),
    ("base_b2_high", "b2 <= 1/2", lambda b1, b2, d: b2, lambda b1, b2, d: 0.5, "<="),
    (
        "auxi1",
        "b1 < (2 + 2 b2) / (d + 4 b2)",
        lambda b1, b2, d: b1,
        lambda b1, b2, d: (2.0 + 2.0 * b2) / (d + 4.0 * b2),
        "<",
    ),
    ("auxi2", "b1 < 2/d", lambda b1, b2, d: b1, lambda b1, b2, d: 2.0 / d, "<"),
    ("auxi3", "b2 < 1 - b1", lambda b1, b2, d: b2, lambda b1, b2, d: 1.0 - b1, "<"),
    (
        "auxi4",
        "2 b1 + (1 + d/2) b2 > (1 + d)/2",
        lambda b1, b2, d: 2.0 * b1 + (1.0 + d / 2.0) * b2,
        lambda b1, b2, d: (1.0 + d) / 2.0,
        ">",
    ),
    (
        "i521_auxi1",
        "b2 < (2/3) b1 - d/12",
        lambda b1, b2, d: b2,
        lambda b1, b2, d: (2.0 / 3.0) * b1 - d / 12.0,
        "<",
    ),
    (
        "i521_auxi2",
        "b2 <= 1 - d/4",
        lambda b1, b2, d: b2,
        lambda b1, b2, d: 1.0 - d / 4.0,
        "<=",
    ),
    (
        "i521_auxi3",
        "b2 < 1/6 (d=2) or 1/12 (d=3)",
        lambda b1, b2, d: b2,
        lambda b1, b2, d: 1.0 / 6.0 if d == 2 else 1.0 / 12.0,
        "<",
    ),
]

_OPS = {
    ">": lambda l, r: l > r,
    ">=": lambda l, r: l >= r,
    "<": lambda l, r: l < r,
    "<=": lambda l, r: l <= r,
}


def check_constraints(p: ExponentParams) -> ConstraintReport:
    """Evaluate every admissibility constraint at (b1, b2); strict
    inequalities stay strict."""
    entries = []
    for cid, text, lhs_f, rhs_f, op in _CONSTRAINTS:
        lhs = float(lhs_f(p.b1, p.b2, p.d))
        rhs = float(rhs_f(p.b1, p.b2, p.d))
        entries.append(ConstraintEntry(cid, text, lhs, rhs, bool(_OPS[op](lhs, rhs))))
    return ConstraintReport(entries, all(e.passed for e in entries))


def constraint_matrix(b1, b2, d: int):
    """Vectorized constraint evaluation; returns (pass matrix, ids).

    b1 and b2 are broadcastable arrays.  The formulas are shared with
    check_constraints so both routes evaluate identical expressions.
    """
    b1 = np.asarray(b1, dtype=np.float64)
    b2 = np.asarray(b2, dtype=np.float64)
    ids = [c[0] for c in _CONSTRAINTS]
    passes = []
    for cid, text, lhs_f, rhs_f, op in _CONSTRAINTS:
        passes.append(_OPS[op](lhs_f(b1, b2, d), rhs_f(b1, b2, d)))
    return np.stack(np.broadcast_arrays(*passes), axis=0), ids


# ---------------------------------------------------------------------------
# Theta exponents
# ---------------------------------------------------------------------------

THETA_NAMES = (
    "theta_1",
    "theta_21",
    "theta_221",
    "theta_222",
    "theta_223",
    "theta_23",
    "theta_241",
    "theta_242",
    "theta_243",
    "theta_41",
    "theta_42",
    "theta_521",
)


@dataclass
class ThetaReport:
    values: dict
    min_theta: float

    def __getitem__(self, name):
        return self.values[name]


def theta_values(p: ExponentParams) -> ThetaReport:
    """Evaluate all twelve T-gain exponents at the parameter point."""
    vals = _theta_arrays(p.b1, p.b2, p.d, p.b0, p.eps_plus, scalar=True)
    values = dict(zip(THETA_NAMES, vals))
    return ThetaReport(values, min(values.values()))


def _theta_arrays(b1, b2, d, b0, eps, scalar=False):
    """Shared theta formulas; scalar or vectorized over (b1, b2)."""
    b1 = np.asarray(b1, dtype=np.float64)
    b2 = np.asarray(b2, dtype=np.float64)
    if np.any(b1 == b2):
        raise SingularityError("theta_521 is singular at b1 == b2")
    b0 = np.asarray(b0, dtype=np.float64)

    bp = lambda lam: bracket_plus(lam, eps)

    t1 = (1.0 - d * b1 / (2.0 * b1 + 1.0)) * (2.5 - b1)
    t21 = (1.0 - b1 * (d + 4.0 * b2) / (2.0 + 2.0 * b2)) * (b2 + 1.5 - b1)
    t221 = (1.0 - b1 * d / 2.0) * (1.5 - b1)
    t222 = (1.0 - d * b1 / 2.0) * (1.0 - bp(b1 - b2 - 0.5))
    t223 = (1.0 - d * b1 / 2.0) * (1.5 - b1)
    t23 = t21
    t241 = t221
    t242 = t222
    t243 = t223
    t41 = (1.0 - b0 * (d + 2.0) / (4.0 * b1 + 1.0)) * (b1 + b2 + 0.5 - bp(b1 + b2 - 1.0))
    t42 = (1.0 - (d + 2.0) * b1 / (4.0 * b1 + 1.0)) * (1.5 - bp(0.0))
    t521 = (
        2.0
        * (1.0 - b0 * (2.0 * b2 + d / 2.0) / (2.0 * (b1 - b2)))
        * (b1 - b2)
        * (1.0 - bp(b1 - b2 - 0.5) / (b1 - b2))
    )
    out = (t1, t21, t221, t222, t223, t23, t241, t242, t243, t41, t42, t521)
    if scalar:
        return tuple(float(v) for v in out)
    return out


# ---------------------------------------------------------------------------
# Region scan
# ---------------------------------------------------------------------------

REFERENCE_BOX = {
    2: {"b1": (0.75, 5.0 / 6.0), "b2": (0.0, 1.0 / 6.0), "b2_closed_low": True},
    3: {"b1": (0.5, 13.0 / 20.0), "b2": (0.0, 1.0 / 12.0), "b2_closed_low": False},
}


@dataclass
class RegionScan:
    d: int
    resolution: float
    b1: np.ndarray  # flattened sample coordinates
    b2: np.ndarray
    admissible: np.ndarray  # bool, same length
    violated_ids: list  # list of tuples of constraint ids, "" when admissible
    min_theta: np.ndarray
    reference_box_contained: bool
    witnesses: list  # reference-box samples failing, with their violated ids
    pointwise_b1_range: tuple | None
    uniform_b1_range: tuple | None


def region_scan(d: int, resolution: float = 1e-3) -> RegionScan:
    """Scan (1/2, 1) x [0, 1/2] on the given lattice; report admissibility,
    the min-theta surface and the containment verdict for the published
    parameter rectangle."""
    if resolution > 1e-2:
        raise ConfigurationError("resolution must be <= 1e-2")
    b1_axis = np.arange(0.5 + resolution, 1.0, resolution)
    b2_axis = np.arange(0.0, 0.5 + 0.5 * resolution, resolution)
    B1, B2 = np.meshgrid(b1_axis, b2_axis, indexing="ij")
    b1 = B1.ravel()
    b2 = B2.ravel()

    passes, ids = constraint_matrix(b1, b2, d)
    admissible = np.all(passes, axis=0)

    violated = []
    fails = ~passes
    any_fail = np.any(fails, axis=0)
    for j in range(len(b1)):
        if any_fail[j]:
            violated.append(";".join(ids[i] for i in range(len(ids)) if fails[i, j]))
        else:
            violated.append("")

    # min theta where defined (b1 != b2 guaranteed off the diagonal samples).
    safe = b1 != b2
    min_theta = np.full(len(b1), np.nan)
    if np.any(safe):
        thetas = _theta_arrays(b1[safe], b2[safe], d, b1[safe], 1e-6)
        min_theta[safe] = np.min(np.stack(thetas, axis=0), axis=0)

    box = REFERENCE_BOX[d]
    margin = 2.0 * resolution
    in_box = (
        (b1 > box["b1"][0] + margin)
        & (b1 < box["b1"][1] - margin)
        & (b2 < box["b2"][1] - margin)
    )
    if box["b2_closed_low"]:
        in_box &= b2 >= box["b2"][0]
    else:
        in_box &= b2 > box["b2"][0] + margin

    contained = bool(np.all(admissible[in_box])) if np.any(in_box) else False
    witnesses = []
    bad = in_box & ~admissible
    for j in np.nonzero(bad)[0][:50]:
        witnesses.append({"b1": float(b1[j]), "b2": float(b2[j]), "violated": violated[j]})

    # Pointwise b1 range: b1 values admissible for at least one scanned b2.
    # Uniform range: b1 values admissible for every scanned b2 in the reference
    # b2 interval.  The two differ; both are reported, neither is asserted.
    adm_grid = admissible.reshape(B1.shape)
    point_rows = np.any(adm_grid, axis=1)
    pointwise = None
    if np.any(point_rows):
        pointwise = (float(b1_axis[point_rows][0]), float(b1_axis[point_rows][-1]))
    b2_in = b2_axis < box["b2"][1] - margin
    if not box["b2_closed_low"]:
        b2_in &= b2_axis > box["b2"][0] + margin
    uniform = None
    if np.any(b2_in):
        uni_rows = np.all(adm_grid[:, b2_in], axis=1)
        if np.any(uni_rows):
            uniform = (float(b1_axis[uni_rows][0]), float(b1_axis[uni_rows][-1]))

    return RegionScan(
        d=d,
        resolution=resolution,
        b1=b1,
        b2=b2,
        admissible=admissible,
        violated_ids=violated,
        min_theta=min_theta,
        reference_box_contained=contained,
        witnesses=witnesses,
        pointwise_b1_range=pointwise,
        uniform_b1_range=uniform,
    )


# ---------------------------------------------------------------------------
# Strichartz exponent calculator
# ---------------------------------------------------------------------------

@dataclass
class StrichartzExponents:
    feasible: bool
    q: float | None = None
    r: float | None = None
    theta: float | None = None
    violated: str | None = None


def strichartz_exponents(
    a: float,
    a_prime: float,
    gamma: float,
    eta: float,
    b0: float,
    d: int,
    wave: bool = False,
    eps_plus: float = 1e-6,
) -> StrichartzExponents:
    """Admissible (q, r) and the T-gain exponent theta, or an infeasibility
    verdict naming the first violated hypothesis.

    In wave mode eta is forced to 1 and r to 2, and q follows the wave rule
    2/q = 1 - (1 - gamma) a / b0.
    """
    checks = [
        (b0 > 0.5, "b0 > 1/2"),
        (a >= 0.0, "a >= 0"),
        (a_prime >= 0.0, "a' >= 0"),
        (0.0 <= gamma <= 1.0, "0 <= gamma <= 1"),
        ((1.0 - gamma) * a <= b0, "(1 - gamma) a <= b0"),
        (gamma * a <= a_prime, "gamma a <= a'"),
    ]
    if not wave:
        checks.append((0.0 < eta <= 1.0, "0 < eta <= 1"))
    for ok, text in checks:
        if not ok:
            return StrichartzExponents(feasible=False, violated=text)

    if wave:
        eta = 1.0
    inv_q_half = 1.0 - eta * (1.0 - gamma) * a / b0  # this is 2/q
    q = 2.0 / inv_q_half if inv_q_half > 0 else np.inf
    if wave:
        r = 2.0
    else:
        delta_r = (1.0 - eta) * (1.0 - gamma) * a / b0  # d/2 - d/r
        r = d / (d / 2.0 - delta_r) if (d / 2.0 - delta_r) > 0 else np.inf
    if a == 0.0 or gamma == 0.0:
        theta = 0.0
    else:
        theta = gamma * a * (1.0 - bracket_plus(a_prime - 0.5, eps_plus) / a_prime)
    return StrichartzExponents(feasible=True, q=float(q), r=float(r), theta=float(theta))


# ---------------------------------------------------------------------------
# Randomized verifier for the elementary inequalities
# ---------------------------------------------------------------------------

INEQUALITY_IDS = ("ineq1", "ineq2", "ineq3", "ineq4", "ineq5")


@dataclass
class InequalityResult:
    inequality: str
    branch: str
    d: int
    n_samples: int
    max_ratio: float
    argmax: dict


def _sample_vectors(rng, n, d, lo=1e-2, hi=1e3):
    """Components with log-uniform magnitude in [lo, hi] and random sign."""
    mag = np.exp(rng.uniform(np.log(lo), np.log(hi), size=(n, d)))
    sign = rng.choice([-1.0, 1.0], size=(n, d))
    return mag * sign


def _norm(v):
    return np.sqrt(np.sum(v**2, axis=-1))


def verify_symbolic_inequalities(
    n_samples: int,
    seed: int,
    d: int,
    tau_scale: float = 1e6,
    chunk: int = 250_000,
) -> list[InequalityResult]:
    """Empirical worst constants for the five elementary inequalities.

    For <=-type inequalities the reported ratio is LHS/RHS; for the two
    lower bounds it is the reciprocal orientation (bounded side over
    bounding side), so every reported number should stay below its cap.
    """
    if n_samples < 1:
        raise ConfigurationError("n_samples must be >= 1")
    results = []
    for ineq in INEQUALITY_IDS:
        # ineq1 has no tau and ineq5 has fixed signs; only the others carry
        # a +/- branch.
        branches = ("+", "-") if ineq in ("ineq2", "ineq3", "ineq4") else ("+",)
        for branch in branches:
            rng = np.random.default_rng(np.random.SeedSequence([seed, _ineq_tag(ineq), 0 if branch == "+" else 1, d]))
            best = -np.inf
            arg = {}
            remaining = n_samples
            while remaining > 0:
                m = min(chunk, remaining)
                ratios, samples = _ineq_ratios(rng, m, d, ineq, branch, tau_scale)
                j = int(np.argmax(ratios))
                if ratios[j] > best:
                    best = float(ratios[j])
                    arg = {k: (v[j].tolist() if v.ndim > 1 else float(v[j])) for k, v in samples.items()}
                remaining -= m
            results.append(
                InequalityResult(ineq, branch, d, n_samples, best, arg)
            )
    return results


def _ineq_tag(ineq: str) -> int:
    return INEQUALITY_IDS.index(ineq)


def _ineq_ratios(rng, n, d, ineq, branch, tau_scale):
    s = 1.0 if branch == "+" else -1.0
    if ineq == "ineq1":
        xi = _sample_vectors(rng, n, d)
        xi1 = _sample_vectors(rng, n, d)
        xi2 = _sample_vectors(rng, n, d)
        lhs = bracket(xi)
        rhs = bracket(xi2) + bracket(xi1 - xi2) + bracket(xi - xi1)
        return lhs / rhs, {"xi": xi, "xi1": xi1, "xi2": xi2}

    if ineq == "ineq2":
        # rejection: keep only |xi| > 2 |xi - xi1|
        xi = np.empty((0, d))
        xi1 = np.empty((0, d))
        while len(xi) < n:
            cand = _sample_vectors(rng, 2 * n, d)
            cand1 = _sample_vectors(rng, 2 * n, d)
            keep = _norm(cand) > 2.0 * _norm(cand - cand1)
            xi = np.concatenate([xi, cand[keep]])
            xi1 = np.concatenate([xi1, cand1[keep]])
        xi, xi1 = xi[:n], xi1[:n]
        tau = rng.uniform(-tau_scale, tau_scale, n)
        tau1 = rng.uniform(-tau_scale, tau_scale, n)
        lhs = bracket(xi) ** 2
        rhs = (
            bracket(tau1 + s * _norm(xi1))
            + bracket(tau - tau1 + _norm(xi - xi1) ** 2)
            + bracket(tau + _norm(xi) ** 2)
        )
        return lhs / rhs, {"xi": xi, "xi1": xi1, "tau": tau, "tau1": tau1}

    if ineq == "ineq3":
        xi = _sample_vectors(rng, n, d)
        xi1 = _sample_vectors(rng, n, d)
        tau = rng.uniform(-tau_scale, tau_scale, n)
        tau1 = rng.uniform(-tau_scale, tau_scale, n)
        lhs = bracket(xi) ** 2
        rhs = (
            bracket(tau - tau1 + _norm(xi - xi1) ** 2)
            + bracket(tau1 - _norm(xi1) ** 2)
            + bracket(tau + s * _norm(xi))
        )
        return lhs / rhs, {"xi": xi, "xi1": xi1, "tau": tau, "tau1": tau1}

    if ineq == "ineq4":
        xi = _sample_vectors(rng, n, d)
        tau = rng.uniform(-tau_scale, tau_scale, n)
        lower = np.sqrt(np.abs(tau))
        upper = bracket(xi) * np.sqrt(bracket(tau + s * _norm(xi) ** 2))
        return lower / upper, {"xi": xi, "tau": tau}

    if ineq == "ineq5":
        xi = _sample_vectors(rng, n, d)
        xi1 = _sample_vectors(rng, n, d)
        tau = rng.uniform(-tau_scale, tau_scale, n)
        tau1 = rng.uniform(-tau_scale, tau_scale, n)
        lower = np.sqrt(np.abs(tau))
        upper = (
            bracket(xi1)
            * bracket(xi - xi1)
            * np.sqrt(bracket(tau - tau1 + _norm(xi - xi1) ** 2))
            * np.sqrt(bracket(tau1 - _norm(xi1) ** 2))
        )
        return lower / upper, {"xi": xi, "xi1": xi1, "tau": tau, "tau1": tau1}

    raise ConfigurationError(f"unknown inequality {ineq!r}")
