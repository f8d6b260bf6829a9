"""Phase-error upper bound and secret-key rate from observed statistics alone.

The sources are uncharacterized qubits. Writing Alice's |phi_3> and Bob's
|phi'_2> in the span of their basis-0 states,

    |phi_3>  = c30 |phi_0>  + c31 e^{i theta} |phi_1>
    |phi'_2> = cp20 |phi'_0> + cp21 |phi'_1>

with non-negative real coefficients, normalization ties each pair to an
overlap r = Re(e^{i theta} <phi_0|phi_1>) (resp. rp), and the observed table
caps |r| <= chi, |rp| <= chi_p. The search walks (u, r, u', rp) with

    c30 = s cos u, c31 = s sin u,  s = (1 + 2 r cos u sin u)^(-1/2)

and likewise for the primed pair, so normalization holds by construction.
Only the four products A = c30 cp20, B = c31 cp21, C = c30 cp21, D = c31 cp20
enter the constraints and the objective.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numba
import numpy as np

from .tables import OutcomeTable

HALF_PI = math.pi / 2


class BoundError(ValueError):
    pass


class InfeasibleStatisticsError(BoundError):
    """No qubit source model on the search grid reproduces the observed table."""


class ZeroGainError(BoundError):
    """No basis-0 round was announced as |phi+>; rates are undefined."""


@dataclass(frozen=True)
class CoeffPoint:
    c30: float
    c31: float
    cp20: float
    cp21: float
    r: float
    rp: float

    def normalization_residuals(self) -> tuple[float, float]:
        first = self.c30**2 + self.c31**2 + 2 * self.c30 * self.c31 * self.r - 1.0
        second = self.cp20**2 + self.cp21**2 + 2 * self.cp20 * self.cp21 * self.rp - 1.0
        return first, second

    @classmethod
    def from_angles(cls, u: float, r: float, up: float, rp: float) -> "CoeffPoint":
        c30, c31 = _pair(u, r)
        cp20, cp21 = _pair(up, rp)
        return cls(c30, c31, cp20, cp21, r, rp)


@dataclass(frozen=True)
class BoundConfig:
    grid_u: int = 181
    grid_r: int = 41
    refine_rounds: int = 2
    denom_floor: float = 1e-12
    feas_tol: float = 1e-9
    grid_pad: float = 0.05
    shrink: float = 0.1

    def __post_init__(self):
        if self.grid_u < 2 or self.grid_r < 1:
            raise ValueError("grid_u must be >= 2 and grid_r >= 1")
        if self.refine_rounds < 0:
            raise ValueError("refine_rounds must be >= 0")
        if self.denom_floor <= 0 or self.feas_tol <= 0:
            raise ValueError("denom_floor and feas_tol must be positive")
        if not 0 < self.shrink < 1:
            raise ValueError("shrink must lie in (0, 1)")


@dataclass
class BoundResult:
    chi: float
    chi_p: float
    e_b: float
    epsilon: float
    epsilon_safe: float
    e_p: float
    rate: float
    degenerate: bool
    argmax: CoeffPoint | None
    branch1: float = math.inf
    branch2: float = math.inf
    min_of_branch_maxima: float = math.inf
    n_feasible: int = 0

    def to_dict(self) -> dict:
        out = asdict(self)
        for key in ("epsilon", "epsilon_safe", "branch1", "branch2", "min_of_branch_maxima"):
            if not math.isfinite(out[key]):
                out[key] = None if math.isnan(out[key]) else ("inf" if out[key] > 0 else "-inf")
        return out


# -- closed-form pieces ------------------------------------------------------


def _sqrt_probs(t: OutcomeTable) -> dict:
    s = lambda z, x, y: math.sqrt(t.p(z, x, y))  # noqa: E731
    return {
        "xi0": s(1, 3, 2),
        "xi01": s(1, 0, 1),
        "xi10": s(1, 1, 0),
        "q00": s(1, 0, 0),
        "q11": s(1, 1, 1),
        "zeta0": s(2, 3, 2),
        "zeta00": s(2, 0, 0),
        "zeta11": s(2, 1, 1),
        "t01": s(2, 0, 1),
        "t10": s(2, 1, 0),
    }


def chi_bounds(t: OutcomeTable) -> tuple[float, float]:
    """Caps on |Re overlap| of each sender's basis-0 states, clipped to 1."""
    chi = sum(math.sqrt(t.p(z, 1, 0) * t.p(z, 0, 0)) for z in range(3))
    chi_p = sum(math.sqrt(t.p(z, 0, 1) * t.p(z, 0, 0)) for z in range(3))
    return min(chi, 1.0), min(chi_p, 1.0)


def xi_of(t: OutcomeTable, c: CoeffPoint) -> float:
    sp = _sqrt_probs(t)
    return (sp["xi0"] + c.c30 * c.cp21 * sp["xi01"] + c.c31 * c.cp20 * sp["xi10"]) ** 2


def zeta_of(t: OutcomeTable, c: CoeffPoint) -> float:
    sp = _sqrt_probs(t)
    return (sp["zeta0"] + c.c30 * c.cp20 * sp["zeta00"] + c.c31 * c.cp21 * sp["zeta11"]) ** 2


def feasible(t: OutcomeTable, c: CoeffPoint, cfg: BoundConfig = BoundConfig()) -> bool:
    chi, chi_p = chi_bounds(t)
    if abs(c.r) > chi + cfg.feas_tol or abs(c.rp) > chi_p + cfg.feas_tol:
        return False
    if min(c.c30, c.c31, c.cp20, c.cp21) < 0:
        return False
    n1, n2 = c.normalization_residuals()
    if abs(n1) > cfg.feas_tol or abs(n2) > cfg.feas_tol:
        return False
    sp = _sqrt_probs(t)
    first = (c.c30 * c.cp20 * sp["q00"] - c.c31 * c.cp21 * sp["q11"]) ** 2
    second = (c.c30 * c.cp21 * sp["t01"] - c.c31 * c.cp20 * sp["t10"]) ** 2
    return first <= xi_of(t, c) + cfg.feas_tol and second <= zeta_of(t, c) + cfg.feas_tol


def branch_values(t: OutcomeTable, c: CoeffPoint, cfg: BoundConfig = BoundConfig()) -> tuple[float, float]:
    """The two per-point upper bounds on the |phi+> phase-error numerator.

    A branch whose denominator falls below ``denom_floor`` is +inf (no bound).
    """
    sp = _sqrt_probs(t)
    a = c.c30 * c.cp20
    b = c.c31 * c.cp21
    root_xi = math.sqrt(xi_of(t, c))
    diff = abs(a - b)
    b1 = (root_xi + diff * sp["q11"]) ** 2 / a**2 if a * a >= cfg.denom_floor else math.inf
    b2 = (root_xi + diff * sp["q00"]) ** 2 / b**2 if b * b >= cfg.denom_floor else math.inf
    return b1, b2


# -- grid search -------------------------------------------------------------


def _pair(u, r):
    """(s cos u, s sin u) with s chosen so the pair is normalized at overlap r."""
    u = np.asarray(u, dtype=float)
    r = np.asarray(r, dtype=float)
    denom = 1.0 + r * np.sin(2.0 * u)
    with np.errstate(divide="ignore", invalid="ignore"):
        s = np.where(denom > 1e-12, 1.0 / np.sqrt(np.where(denom > 1e-12, denom, 1.0)), np.nan)
    first, second = s * np.cos(u), s * np.sin(u)
    if first.ndim == 0:
        return float(first), float(second)
    return first, second


def _side_grid(u_vals, r_vals):
    """Flattened (u major, r minor) coefficient pairs plus the (u, r) coordinates."""
    uu, rr = np.meshgrid(u_vals, r_vals, indexing="ij")
    uu = uu.ravel()
    rr = rr.ravel()
    first, second = _pair(uu, rr)
    return first, second, uu, rr


# Objectives tracked by the scan: the two per-point branch bounds and their
# pointwise minimum, which is what epsilon maximizes.
BRANCH1, BRANCH2, POINTWISE = 0, 1, 2
_OBJECTIVES = (BRANCH1, BRANCH2, POINTWISE)


@dataclass
class _Scan:
    best: list = field(default_factory=lambda: [-math.inf] * 3)
    where: list = field(default_factory=lambda: [None] * 3)
    n_feasible: int = 0
    degenerate: bool = False


@numba.njit(cache=True)
def _scan_kernel(c30, c31, cp20, cp21, sp, tol, floor, root_floor, best, where, counts):
    # sp: xi0, xi01, xi10, q00, q11, zeta0, zeta00, zeta11, t01, t10
    # best/where: per objective, running max and its (i, j); strict > keeps the first hit.
    xi0, xi01, xi10, q00, q11 = sp[0], sp[1], sp[2], sp[3], sp[4]
    zeta0, zeta00, zeta11, t01, t10 = sp[5], sp[6], sp[7], sp[8], sp[9]
    for i in range(c30.shape[0]):
        x0 = c30[i]
        x1 = c31[i]
        for j in range(cp20.shape[0]):
            a = x0 * cp20[j]
            b = x1 * cp21[j]
            c = x0 * cp21[j]
            d = x1 * cp20[j]
            root_xi = xi0 + c * xi01 + d * xi10
            if (a * q00 - b * q11) ** 2 > root_xi * root_xi + tol:
                continue
            root_zeta = zeta0 + a * zeta00 + b * zeta11
            if (c * t01 - d * t10) ** 2 > root_zeta * root_zeta + tol:
                continue
            counts[0] += 1
            if a < root_floor and b < root_floor:
                counts[1] = 1
            diff = abs(a - b)
            v1 = np.inf
            v2 = np.inf
            if a * a >= floor:
                v1 = (root_xi + diff * q11) ** 2 / (a * a)
                if v1 > best[0]:
                    best[0] = v1
                    where[0, 0] = i
                    where[0, 1] = j
            if b * b >= floor:
                v2 = (root_xi + diff * q00) ** 2 / (b * b)
                if v2 > best[1]:
                    best[1] = v2
                    where[1, 0] = i
                    where[1, 1] = j
            v = min(v1, v2)
            if v > best[2]:
                best[2] = v
                where[2, 0] = i
                where[2, 1] = j


_SP_ORDER = ("xi0", "xi01", "xi10", "q00", "q11", "zeta0", "zeta00", "zeta11", "t01", "t10")


def _scan(sp, cfg: BoundConfig, left, right, scan: _Scan | None = None) -> _Scan:
    """Evaluate every (left, right) pairing; keep the first-in-order maximum per objective."""
    scan = scan or _Scan()
    c30, c31, u1, r1 = left
    cp20, cp21, u2, r2 = right
    ok1 = np.isfinite(c30)
    ok2 = np.isfinite(cp20)
    c30, c31, u1, r1 = c30[ok1], c31[ok1], u1[ok1], r1[ok1]
    cp20, cp21, u2, r2 = cp20[ok2], cp21[ok2], u2[ok2], r2[ok2]
    if c30.shape[0] == 0 or cp20.shape[0] == 0:
        return scan
    best = np.array(scan.best, dtype=float)
    where = np.full((3, 2), -1, dtype=np.int64)
    counts = np.zeros(2, dtype=np.int64)
    _scan_kernel(
        np.ascontiguousarray(c30), np.ascontiguousarray(c31),
        np.ascontiguousarray(cp20), np.ascontiguousarray(cp21),
        np.array([sp[k] for k in _SP_ORDER]),
        cfg.feas_tol, cfg.denom_floor, math.sqrt(cfg.denom_floor),
        best, where, counts,
    )
    scan.n_feasible += int(counts[0])
    scan.degenerate = scan.degenerate or bool(counts[1])
    for k in _OBJECTIVES:
        if where[k, 0] >= 0:
            i, j = where[k]
            scan.best[k] = float(best[k])
            scan.where[k] = (float(u1[i]), float(r1[i]), float(u2[j]), float(r2[j]))
    return scan


def _window(center, half, lo, hi, steps):
    if steps == 1 or hi <= lo:
        return np.array([min(max(center, lo), hi)])
    a = max(lo, center - half)
    b = min(hi, center + half)
    return np.linspace(a, b, steps)


def _refine_centers(scan: _Scan) -> list:
    """Window centers for one refinement round: every objective's argmax, plain and mirrored.

    Swapping (c30, cp20) with (c31, cp21) maps (u, u') to (pi/2 - u, pi/2 - u')
    and exchanges the two branches. Refining a mirror-closed set of windows
    keeps both branches on equal footing for tables with that symmetry. Each
    entry is (u, r, u', rp, mirrored); a mirrored window is the reflection of
    the window built around (u, r, u', rp), so the grids match exactly.
    """
    centers = []
    for where in scan.where:
        if where is None:
            continue
        for mirrored in (False, True):
            center = (*where, mirrored)
            if center not in centers:
                centers.append(center)
    return centers


def epsilon_search(t: OutcomeTable, cfg: BoundConfig = BoundConfig()):
    """Largest admissible value of the |phi+> phase-error numerator.

    For every feasible coefficient point both branch bounds hold, so the
    numerator is at most their pointwise minimum; epsilon is the maximum of
    that minimum over the feasible set. The per-branch maxima (and the smaller
    of the two, a looser bound) are reported in ``info``.

    Returns ``(epsilon, argmax, degenerate, info)``.
    """
    chi, chi_p = chi_bounds(t)
    sp = _sqrt_probs(t)
    u_vals = np.linspace(0.0, HALF_PI, cfg.grid_u)
    r_vals = np.linspace(-chi, chi, cfg.grid_r) if cfg.grid_r > 1 else np.array([0.0])
    rp_vals = np.linspace(-chi_p, chi_p, cfg.grid_r) if cfg.grid_r > 1 else np.array([0.0])
    scan = _scan(sp, cfg, _side_grid(u_vals, r_vals), _side_grid(u_vals, rp_vals))
    if scan.n_feasible == 0:
        raise InfeasibleStatisticsError(
            "no feasible source coefficients on the search grid; the table is "
            "inconsistent with any qubit source at this resolution"
        )
    n_feasible = scan.n_feasible
    degenerate = scan.degenerate
    half_u, half_r, half_rp = HALF_PI / 2, chi, chi_p
    for _ in range(0 if degenerate else cfg.refine_rounds):
        half_u *= cfg.shrink
        half_r *= cfg.shrink
        half_rp *= cfg.shrink
        for u0, r0, up0, rp0, mirrored in _refine_centers(scan):
            u_win = _window(u0, half_u, 0.0, HALF_PI, cfg.grid_u)
            up_win = _window(up0, half_u, 0.0, HALF_PI, cfg.grid_u)
            if mirrored:
                u_win, up_win = HALF_PI - u_win[::-1], HALF_PI - up_win[::-1]
            left = _side_grid(u_win, _window(r0, half_r, -chi, chi, cfg.grid_r))
            right = _side_grid(up_win, _window(rp0, half_rp, -chi_p, chi_p, cfg.grid_r))
            _scan(sp, cfg, left, right, scan=scan)
        degenerate = degenerate or scan.degenerate

    best = [b if b > -math.inf else math.inf for b in scan.best]
    epsilon = math.inf if degenerate else best[POINTWISE]
    where = scan.where[POINTWISE]
    argmax = CoeffPoint.from_angles(*where) if where is not None else None
    info = {
        "branch1": best[BRANCH1],
        "branch2": best[BRANCH2],
        "min_of_branch_maxima": min(best[BRANCH1], best[BRANCH2]),
        "n_feasible": n_feasible,
    }
    return epsilon, argmax, degenerate, info


# -- rates -------------------------------------------------------------------


def _gain(t: OutcomeTable) -> float:
    g = t.p(1, 0, 0) + t.p(1, 1, 1) + t.p(1, 0, 1) + t.p(1, 1, 0)
    if g <= 0:
        raise ZeroGainError("p(1|0,0)+p(1|1,1)+p(1|0,1)+p(1|1,0) is zero")
    return g


def bit_error(t: OutcomeTable) -> float:
    return (t.p(1, 0, 1) + t.p(1, 1, 0)) / _gain(t)


def phase_error_from_epsilon(t: OutcomeTable, epsilon: float, degenerate: bool = False) -> float:
    if degenerate or not math.isfinite(epsilon):
        return 0.5
    cross = (math.sqrt(t.p(1, 0, 1)) + math.sqrt(t.p(1, 1, 0))) ** 2
    return min(max((cross + epsilon) / (2.0 * _gain(t)), 0.0), 0.5)


def padded(epsilon: float, cfg: BoundConfig) -> float:
    return epsilon * (1.0 + cfg.grid_pad) if math.isfinite(epsilon) else epsilon


def phase_error_bound(t: OutcomeTable, cfg: BoundConfig = BoundConfig()) -> float:
    """Upper bound on the basis-0 phase-error rate, using the padded epsilon."""
    _gain(t)
    epsilon, _, degenerate, _ = epsilon_search(t, cfg)
    return phase_error_from_epsilon(t, padded(epsilon, cfg), degenerate)


def binary_entropy(x: float) -> float:
    if not 0.0 <= x <= 1.0 or math.isnan(x):
        raise ValueError(f"binary entropy needs x in [0, 1], got {x!r}")
    if x == 0.0 or x == 1.0:
        return 0.0
    return -x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x)


def rate_from_errors(e_b: float, e_p: float) -> float:
    return min(max(1.0 - binary_entropy(e_b) - binary_entropy(e_p), 0.0), 1.0)


def key_rate(t: OutcomeTable, cfg: BoundConfig = BoundConfig()) -> BoundResult:
    chi, chi_p = chi_bounds(t)
    e_b = bit_error(t)
    epsilon, argmax, degenerate, info = epsilon_search(t, cfg)
    eps_safe = padded(epsilon, cfg)
    e_p = phase_error_from_epsilon(t, eps_safe, degenerate)
    return BoundResult(
        chi=chi,
        chi_p=chi_p,
        e_b=e_b,
        epsilon=epsilon,
        epsilon_safe=eps_safe,
        e_p=e_p,
        rate=rate_from_errors(e_b, e_p),
        degenerate=degenerate,
        argmax=argmax,
        branch1=info["branch1"],
        branch2=info["branch2"],
        min_of_branch_maxima=info["min_of_branch_maxima"],
        n_feasible=info["n_feasible"],
    )


def baseline_key_rate(t: OutcomeTable) -> float:
    """Rate of the original protocol with trusted, perfect BB84 senders.

    A trusted source makes the attack basis-independent, so the phase-error
    rate equals the bit-error rate: R = 1 - 2 H(e_b).
    """
    e_b = bit_error(t)
    return max(0.0, 1.0 - 2.0 * binary_entropy(e_b))


# -- randomized soundness oracle ----------------------------------------------


def feasible_grid_points(t: OutcomeTable, cfg: BoundConfig, grid_u: int = 31, grid_r: int = 11) -> np.ndarray:
    """(k, 4) array of feasible (u, r, u', rp) on a small grid, in lexicographic order."""
    chi, chi_p = chi_bounds(t)
    u_vals = np.linspace(0.0, HALF_PI, grid_u)
    r_vals = np.linspace(-chi, chi, grid_r)
    rp_vals = np.linspace(-chi_p, chi_p, grid_r)
    uu, rr, uu2, rr2 = (g.ravel() for g in np.meshgrid(u_vals, r_vals, u_vals, rp_vals, indexing="ij"))
    c30, c31 = _pair(uu, rr)
    cp20, cp21 = _pair(uu2, rr2)
    sp = _sqrt_probs(t)
    a, b, c, d = c30 * cp20, c31 * cp21, c30 * cp21, c31 * cp20
    root_xi = sp["xi0"] + c * sp["xi01"] + d * sp["xi10"]
    root_zeta = sp["zeta0"] + a * sp["zeta00"] + b * sp["zeta11"]
    with np.errstate(invalid="ignore"):
        ok = (a * sp["q00"] - b * sp["q11"]) ** 2 <= root_xi**2 + cfg.feas_tol
        ok &= (c * sp["t01"] - d * sp["t10"]) ** 2 <= root_zeta**2 + cfg.feas_tol
    ok &= np.isfinite(a) & np.isfinite(b)
    return np.column_stack([uu, rr, uu2, rr2])[ok]


def _random_unit(rng, n: int, dims: np.ndarray) -> np.ndarray:
    v = rng.normal(size=(n, 8)) + 1j * rng.normal(size=(n, 8))
    v[np.arange(8)[None, :] >= dims[:, None]] = 0.0
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def sample_coefficients(t: OutcomeTable, n: int, rng, cfg: BoundConfig = BoundConfig(), anchors=None) -> list:
    """n feasible CoeffPoints: grid anchors jittered off-grid, kept only if still feasible."""
    if anchors is None:
        anchors = feasible_grid_points(t, cfg)
    if len(anchors) == 0:
        raise InfeasibleStatisticsError("no feasible coefficient point to sample around")
    chi, chi_p = chi_bounds(t)
    step = np.array([HALF_PI / 30, max(chi, 1e-12) / 5, HALF_PI / 30, max(chi_p, 1e-12) / 5])
    lo = np.array([0.0, -chi, 0.0, -chi_p])
    hi = np.array([HALF_PI, chi, HALF_PI, chi_p])
    picks = anchors[rng.integers(0, len(anchors), size=n)]
    scale = rng.choice([0.0, 1e-3, 1e-2, 0.1, 0.5], size=(n, 1))
    jittered = np.clip(picks + scale * step * rng.uniform(-1, 1, size=(n, 4)), lo, hi)
    points = []
    for anchor, cand in zip(picks, jittered):
        c = CoeffPoint.from_angles(*cand)
        if not (math.isfinite(c.c30) and feasible(t, c, cfg)):
            c = CoeffPoint.from_angles(*anchor)
        points.append(c)
    return points


def adversary_sampling(t: OutcomeTable, n: int, seed: int, cfg: BoundConfig = BoundConfig(), anchors=None) -> float:
    """Largest |phi+> phase-error numerator found over n random collective attacks.

    Each sample draws a feasible coefficient point, a phase theta, an ancilla
    dimension N <= 8 and unit vectors Gamma_001, Gamma_111 in C^N obeying

        || A sqrt(p(1|0,0)) Gamma_001 + B sqrt(p(1|1,1)) e^{i theta} Gamma_111 ||^2 <= xi,

    then evaluates || sqrt(p(1|0,0)) Gamma_001 + e^{i theta} sqrt(p(1|1,1)) Gamma_111 ||^2.
    Half the samples are pushed to the boundary of the constraint, where the
    numerator is largest. A sound epsilon is never exceeded.
    """
    if n <= 0:
        return 0.0
    rng = np.random.default_rng(seed)
    coeffs = sample_coefficients(t, n, rng, cfg, anchors)
    p00, p11 = t.p(1, 0, 0), t.p(1, 1, 1)
    q00, q11 = math.sqrt(p00), math.sqrt(p11)
    a = np.array([c.c30 * c.cp20 for c in coeffs])
    b = np.array([c.c31 * c.cp21 for c in coeffs])
    xi = np.array([xi_of(t, c) for c in coeffs])

    dims = rng.integers(1, 9, size=n)
    theta = rng.uniform(0, 2 * np.pi, size=n)
    g111 = _random_unit(rng, n, dims)
    rotated = np.exp(1j * theta)[:, None] * g111
    # Unit vector orthogonal to the rotated Gamma_111 (absent when N = 1).
    w = _random_unit(rng, n, dims)
    w -= np.sum(rotated.conj() * w, axis=1)[:, None] * rotated
    w_norm = np.linalg.norm(w, axis=1)
    has_w = (dims > 1) & (w_norm > 1e-9)
    w[has_w] /= w_norm[has_w, None]
    w[~has_w] = 0.0

    # Gamma_001 = kappa * rotated + sqrt(1 - kappa^2) * w, so Re<rotated|Gamma_001> = kappa.
    cross = 2 * a * b * q00 * q11
    with np.errstate(divide="ignore", invalid="ignore"):
        kappa_max = np.where(cross > 0, (xi - a * a * p00 - b * b * p11) / cross, 1.0)
    kappa_max = np.clip(kappa_max, -1.0, 1.0)
    on_edge = rng.random(n) < 0.5
    kappa = np.where(on_edge, kappa_max, rng.uniform(-1.0, 1.0, size=n) * 0.5 * (1 + kappa_max) + 0.5 * (kappa_max - 1))
    kappa = np.where(has_w, kappa, np.where(kappa_max >= 1.0, 1.0, -1.0))
    g001 = kappa[:, None] * rotated + np.sqrt(np.maximum(1.0 - kappa**2, 0.0))[:, None] * w

    constraint = np.linalg.norm(a[:, None] * q00 * g001 + b[:, None] * q11 * rotated, axis=1) ** 2
    admissible = constraint <= xi + cfg.feas_tol
    objective = np.linalg.norm(q00 * g001 + q11 * rotated, axis=1) ** 2
    if not admissible.any():
        return 0.0
    return float(objective[admissible].max())
