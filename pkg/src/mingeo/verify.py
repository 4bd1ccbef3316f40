"""Numerical property checks for every inequality and structure claim.

Each check returns a CheckResult whose ``worst_violation`` is the largest
excess over the per-clause tolerance (already scaled by the environment
variable MINGEO_TOLERANCE_SCALE), so ``passed`` is exactly
``worst_violation <= 0``.  Every check has a hand-built violating input in
NEGATIVE_CONTROLS that must fail, guarding against vacuous passes.

``run_report`` executes the named battery across dimensions, deterministic
given its seed: sub-seeds are derived per check name with SHA-256, so the
checks stay independent and reorderable.
"""

from __future__ import annotations

import dataclasses
import math
import os
from dataclasses import dataclass

import numpy as np

from . import linalg
from .curves import SampledCurve, length, pinch_sampled, sample
from .errors import PreconditionError, ValidationError
from .linalg import INF
from .minimal import (
    PerturbationMode,
    PerturbationSpec,
    UniquenessCertificate,
    hermitian_split,
    is_minimal_hermitian_trace,
    is_unique_minimal_grassmann,
    is_unique_minimal_unitary,
    lift_positive,
    lift_unitary,
    minimal_family_grassmann,
    minimal_family_hermitian,
    minimal_family_unitary,
)
from .randoms import random_hermitian, random_positive, random_unitary, rng_from
from .spaces import SpaceTag, dist, geodesic, grassmann_log, inv_sqrt_pd, symmetry

DEFAULT_GRID = 2048


def tolerance_scale() -> float:
    return float(os.environ.get("MINGEO_TOLERANCE_SCALE", "1"))


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    worst_violation: float
    witness: dict | None = None
    seeds_run: int = 0

    def to_json_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": bool(self.passed),
            "worst_violation": float(self.worst_violation),
            "witness": self.witness,
            "seeds_run": int(self.seeds_run),
        }


@dataclass(frozen=True)
class IntermediateSetReport:
    t: float
    members_tested: int
    membership_residuals: np.ndarray
    convexity_passed: bool

    def to_json_dict(self) -> dict:
        return {
            "t": float(self.t),
            "members_tested": int(self.members_tested),
            "membership_residuals": [float(r) for r in self.membership_residuals],
            "convexity_passed": bool(self.convexity_passed),
        }


def _excess(value: float, tol: float) -> float:
    return float(value) - tol * tolerance_scale()


def _result(name: str, excesses: list[float], witness: dict | None = None, seeds: int = 0) -> CheckResult:
    worst = max(excesses) if excesses else float("-inf")
    return CheckResult(name=name, passed=worst <= 0.0, worst_violation=worst,
                       witness=witness, seeds_run=seeds)


# ---------------------------------------------------------------------------
# pinching
# ---------------------------------------------------------------------------

def check_pinching_minimality(c: SampledCurve, system: linalg.ProjectorSystem) -> CheckResult:
    """Pinched-curve length never exceeds the original; equal on minimal curves.

    Requires c(0) = 0 and a system commuting with the endpoint.
    """
    scale = max(1.0, float(np.abs(c.end()).max()))
    if float(np.abs(c.start()).max()) > 1e-8 * scale:
        raise PreconditionError("BAD_START", "curve must start at 0")
    endpoint = c.end()
    for j, proj in enumerate(system.projectors):
        comm = float(np.abs(proj @ endpoint - endpoint @ proj).max())
        if comm > 1e-8 * scale:
            raise PreconditionError("NONCOMMUTING_SYSTEM", f"projector {j} commutator {comm:.3e}")
    l_orig = length(c, 1).length
    l_pinch = length(pinch_sampled(system, c), 1).length
    excesses = [_excess(l_pinch - l_orig, 1e-9)]
    witness = {"length": l_orig, "pinched_length": l_pinch}
    if is_minimal_hermitian_trace(c).supported:
        target = linalg.schatten_norm(endpoint, 1)
        witness["target"] = target
        excesses.append(_excess(abs(l_pinch - target), 1e-4 * max(target, 1e-12)))
    return _result("pinching_minimality", excesses, witness)


# ---------------------------------------------------------------------------
# monotonicity of diagonals and eigenvalue curves
# ---------------------------------------------------------------------------

def check_diagonal_monotonicity(c: SampledCurve, slack: float = 1e-7) -> CheckResult:
    """Diagonal entry curves must be monotone in the direction of the endpoint sign."""
    endpoint = np.real(np.diag(c.end()))
    scale = max(1.0, float(np.abs(endpoint).max()))
    diag_curves = np.real(np.einsum("tii->ti", c.points))
    worst = 0.0
    worst_index = -1
    for i, target in enumerate(endpoint):
        entries = diag_curves[:, i]
        steps = np.diff(entries)
        if target > 1e-10 * scale:
            violation = float(np.maximum(-steps, 0.0).max(initial=0.0))
        elif target < -1e-10 * scale:
            violation = float(np.maximum(steps, 0.0).max(initial=0.0))
        else:
            violation = float(np.abs(entries).max())
        if violation > worst:
            worst, worst_index = violation, i
    witness = {"worst_entry": worst_index, "violation": worst}
    return _result("diagonal_monotonicity", [_excess(worst, slack)], witness)


def _unitary_phase_tracks(points: np.ndarray, step_cap: float = math.pi / 4) -> np.ndarray:
    """Track eigenphase curves node to node by nearest circular matching.

    Both the running tracks and the fresh phases are sorted; the crossing-free
    matchings of two circularly sorted multisets are the cyclic shifts, so the
    cheapest shift is the nearest-neighbor assignment.  Near-collisions with
    crossing relative velocity abort with TRACKING_AMBIGUOUS.
    """
    eigs = np.linalg.eigvals(points)
    phases = np.ndarray.astype(np.arctan2(eigs.imag, eigs.real), float)
    phases = np.where(phases <= -math.pi + linalg.BRANCH_TOL, math.pi, phases)
    phases = np.sort(phases, axis=1)
    n_nodes, n = phases.shape
    tracks = np.empty_like(phases)
    tracks[0] = phases[0]
    prev = phases[0].copy()
    for k in range(1, n_nodes):
        fresh = phases[k]
        best_cost, best_moves = None, None
        for shift in range(n):
            rolled = np.roll(fresh, -shift)
            moves = rolled - prev
            moves = (moves + math.pi) % (2 * math.pi) - math.pi
            cost = float(np.abs(moves).sum())
            if best_cost is None or cost < best_cost:
                best_cost, best_moves = cost, moves
        if float(np.abs(best_moves).max()) > step_cap:
            raise PreconditionError("TRACKING_AMBIGUOUS", f"phase step above cap at node {k}")
        new = prev + best_moves
        gaps_prev = prev[:, None] - prev[None, :]
        gaps_new = new[:, None] - new[None, :]
        iu = np.triu_indices(n, 1)
        close = np.abs(gaps_prev[iu]) < 1e-10
        crossing = np.abs(gaps_new[iu] - gaps_prev[iu]) > 1e-10
        if np.any(close & crossing):
            raise PreconditionError("TRACKING_AMBIGUOUS", f"crossing collision at node {k}")
        tracks[k] = new
        prev = new
    return tracks


def check_eigencurve_monotonicity(c: SampledCurve, space: SpaceTag, slack: float = 1e-7) -> CheckResult:
    """Sorted eigenvalue curves (phase curves on U(n)) must be monotone."""
    if space in (SpaceTag.HERMITIAN, SpaceTag.POSITIVE):
        tracks = np.linalg.eigvalsh(c.points)
    elif space is SpaceTag.UNITARY:
        tracks = _unitary_phase_tracks(c.points)
    else:
        raise ValidationError("SPACE_MISMATCH", "eigencurve check covers H(n), Gl(n)+, U(n)")
    worst = 0.0
    for j in range(tracks.shape[1]):
        steps = np.diff(tracks[:, j])
        net = tracks[-1, j] - tracks[0, j]
        if net >= 0:
            violation = float(np.maximum(-steps, 0.0).max(initial=0.0))
        else:
            violation = float(np.maximum(steps, 0.0).max(initial=0.0))
        worst = max(worst, violation)
    return _result("eigencurve_monotonicity", [_excess(worst, slack)], {"violation": worst})


# ---------------------------------------------------------------------------
# exponential map inequalities
# ---------------------------------------------------------------------------

def _iemi_violation(transported: np.ndarray, k: np.ndarray, p: float) -> float:
    return linalg.schatten_norm(k, p) - linalg.schatten_norm(transported, p)


def check_iemi(h, k, p: float) -> CheckResult:
    """Generalized IEMI: ||e^{-H/2} De^H(K) e^{-H/2}||_p >= ||K||_p."""
    hm = linalg.require_hermitian(h)
    km = linalg.require_hermitian(k)
    half = linalg.exp_h(-hm / 2)
    transported = half @ linalg.frechet_exp(hm, km) @ half
    violation = _iemi_violation(transported, km, p)
    return _result("iemi", [_excess(violation, 1e-10)], {"violation": violation})


def _araki_violation(c, d, t: float, p: float) -> float:
    cm = linalg.require_positive_definite(c)
    dm = linalg.require_positive_definite(d)
    ct = linalg.matrix_function(cm, lambda w: w**t)
    dt = linalg.matrix_function(dm, lambda w: w**t)
    return dist(SpaceTag.POSITIVE, ct, dt, p) - t * dist(SpaceTag.POSITIVE, cm, dm, p)


def check_araki_contraction(c, d, t: float, p: float) -> CheckResult:
    """Power contraction d(C^t, D^t) <= t d(C, D) for t in [0, 1]."""
    if not 0.0 <= t <= 1.0:
        raise ValidationError("INVALID_PARAMETER", "t must lie in [0, 1]")
    violation = _araki_violation(c, d, t, p)
    return _result("araki_contraction", [_excess(violation, 1e-9)], {"violation": violation, "t": t})


def _midpoint_convexity_excess(values: np.ndarray) -> float:
    """Largest violation of f((s_i+s_j)/2) <= (f(s_i)+f(s_j))/2 on a uniform grid."""
    worst = 0.0
    g = len(values)
    for i in range(g):
        for j in range(i + 2, g, 2):
            mid = (i + j) // 2
            worst = max(worst, values[mid] - (values[i] + values[j]) / 2)
    return float(worst)


def check_convexity_distance(a, b, p: float, grid_size: int) -> CheckResult:
    """Convexity of s -> d(I, geodesic(a, b)(s)) on Gl(n)+, sampled midpoints."""
    if grid_size < 3:
        raise ValidationError("INVALID_PARAMETER", "grid_size must be at least 3")
    am = linalg.require_positive_definite(a)
    bm = linalg.require_positive_definite(b)
    g = geodesic(SpaceTag.POSITIVE, am, bm)
    eye = np.eye(am.shape[0])
    values = np.array([dist(SpaceTag.POSITIVE, eye, pt, p) for pt in g.at(np.linspace(0, 1, grid_size))])
    violation = _midpoint_convexity_excess(values)
    return _result("convexity_distance", [_excess(violation, 1e-9)], {"violation": violation})


# ---------------------------------------------------------------------------
# intermediate points
# ---------------------------------------------------------------------------

def intermediate_membership(w, u, v, t: float, space: SpaceTag, p: float) -> float:
    """Residual of w as a candidate member of M_t(u, v); 0 means membership."""
    if not 0.0 < t < 1.0:
        raise ValidationError("INVALID_PARAMETER", "t must lie in (0, 1)")
    d_uv = dist(space, u, v, p)
    r1 = abs(dist(space, u, w, p) - t * d_uv)
    r2 = abs(dist(space, w, v, p) - (1.0 - t) * d_uv)
    return max(r1, r2)


def _member_unitary(u, v, t: float, rng: np.random.Generator) -> np.ndarray:
    target = u.conj().T @ v
    spec = PerturbationSpec(seed=int(rng.integers(2**63)), mode=PerturbationMode.DETOUR,
                            detour_scale=float(rng.uniform(0.3, 0.95)))
    try:
        g = minimal_family_unitary(target, spec)
    except PreconditionError:
        g = geodesic(SpaceTag.UNITARY, np.eye(u.shape[0]), target)
    return u @ g(t)


def _member_grassmann(pm, qm, t: float, rng: np.random.Generator) -> np.ndarray:
    spec = PerturbationSpec(seed=int(rng.integers(2**63)), mode=PerturbationMode.DETOUR,
                            detour_scale=float(rng.uniform(0.3, 0.95)))
    try:
        g = minimal_family_grassmann(pm, qm, spec)
    except PreconditionError:
        g = geodesic(SpaceTag.GRASSMANN, pm, qm)
    return g(t)


def _trace_fraction_step(rng: np.random.Generator, target: np.ndarray, t: float) -> np.ndarray:
    """A PSD step B <= target with tr(B) = t tr(target), seeded shape."""
    k = target.shape[0]
    if k == 0 or float(np.trace(target).real) <= 0:
        return np.zeros((k, k), dtype=complex)
    w, v = np.linalg.eigh(target)
    root = (v * np.sqrt(np.maximum(w, 0.0))) @ v.conj().T
    g = rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k))
    q = np.linalg.qr(g)[0]
    c = (q * rng.uniform(0.3, 1.0, size=k)) @ q.conj().T
    blend = 0.0
    for _ in range(60):
        cb = (c + blend * np.eye(k)) / (1.0 + blend)
        s = t * float(np.trace(target).real) / float(np.trace(target @ cb).real)
        if s * float(np.linalg.eigvalsh(cb)[-1]) <= 1.0:
            return root @ (s * cb) @ root
        blend = 0.5 if blend == 0.0 else blend * 2.0
    return t * target


def _member_positive(u, v, t: float, p: float, rng: np.random.Generator) -> np.ndarray:
    """An exact member of M_t(u, v) in Gl(n)+ for p in {1, inf}.

    Trace norm: an intermediate node of a seeded minimal Hermitian chain,
    exponentiated.  Spectral norm: a commuting perturbation of t log within
    both speed budgets.  Other p: the geodesic point (M_t is a singleton).
    """
    root = linalg.matrix_function(u, np.sqrt)
    rinv = inv_sqrt_pd(u)
    d_log = linalg.log_pd(linalg.require_positive_definite(rinv @ v @ rinv))
    dec = linalg.eigh(d_log)
    if p == 1:
        split = hermitian_split(d_log)
        pos = np.diag(split.values[split.positive]).astype(complex)
        neg = np.diag(-split.values[split.negative]).astype(complex)
        step_pos = _trace_fraction_step(rng, pos, t)
        step_neg = _trace_fraction_step(rng, neg, t)
        n = d_log.shape[0]
        z = np.zeros((n, n), dtype=complex)
        pos_idx = np.where(split.positive)[0]
        neg_idx = np.where(split.negative)[0]
        z[np.ix_(pos_idx, pos_idx)] = step_pos
        z[np.ix_(neg_idx, neg_idx)] = -step_neg
        z = split.basis @ z @ split.basis.conj().T
    elif p == INF:
        norm = float(np.abs(dec.values).max())
        mu = np.zeros_like(dec.values)
        if norm > 0:
            room = norm - np.abs(dec.values)
            off_top = room > linalg.CONFLUENT_TOL * norm
            budget = min(t, 1.0 - t) * room
            mu = np.where(off_top, rng.uniform(-0.9, 0.9, size=len(mu)) * budget, 0.0)
        z = (dec.vectors * (t * dec.values + mu)) @ dec.vectors.conj().T
    else:
        z = t * d_log
    w = root @ linalg.exp_h(z) @ root
    return linalg.require_positive_definite(w)


def antipodal_counterexample(n: int, t: float) -> dict:
    """The I vs -I failure of midpoint convexity on U(n).

    W+- = e^{+-i t pi} I are members of M_t(I, -I); the geodesic midpoint of
    the pair is I, whose membership residual is t pi.
    """
    eye = np.eye(n)
    w_plus = np.exp(1j * t * math.pi) * eye
    w_minus = np.exp(-1j * t * math.pi) * eye
    member_residuals = [
        intermediate_membership(w_plus, eye, -eye, t, SpaceTag.UNITARY, INF),
        intermediate_membership(w_minus, eye, -eye, t, SpaceTag.UNITARY, INF),
    ]
    midpoint = geodesic(SpaceTag.UNITARY, w_plus, w_minus)(0.5)
    midpoint_residual = intermediate_membership(midpoint, eye, -eye, t, SpaceTag.UNITARY, INF)
    return {
        "member_residuals": member_residuals,
        "midpoint_residual": midpoint_residual,
        "midpoint_is_identity": float(np.abs(midpoint - eye).max()),
    }


def check_midpoint_convexity(u, v, t: float, space: SpaceTag, p: float,
                             n_pairs: int, seed: int) -> IntermediateSetReport:
    """Geodesic convexity of M_t: geodesics between seeded members stay inside.

    Preconditions follow the convexity propositions: d_inf(u, v) < pi/2 on
    U(n) and ||P - Q||_inf < 1/sqrt(2) on the Grassmannian; none on Gl(n)+.
    """
    if not 0.0 < t < 1.0:
        raise ValidationError("INVALID_PARAMETER", "t must lie in (0, 1)")
    if space is SpaceTag.UNITARY:
        if dist(space, u, v, INF) >= math.pi / 2:
            raise PreconditionError(
                "PRECONDITION_VIOLATED",
                "needs d_inf(U, V) < pi/2; convexity genuinely fails at the antipodal "
                "pair U = I, V = -I, where the geodesic midpoint of W+- = e^{+-i t pi} I is I",
            )
    elif space is SpaceTag.GRASSMANN:
        if linalg.schatten_norm(np.asarray(u, complex) - np.asarray(v, complex), INF) >= 1 / math.sqrt(2):
            raise PreconditionError("PRECONDITION_VIOLATED", "needs ||P - Q||_inf < 1/sqrt(2)")
    elif space is SpaceTag.HERMITIAN:
        raise ValidationError("SPACE_MISMATCH", "midpoint convexity checks cover U(n), Gl(n)+, Grassmann")

    rng = rng_from(seed, "midpoints", space.value, n_pairs)
    d_uv = dist(space, u, v, p)
    tol = 1e-6 * max(d_uv, 1e-12) * tolerance_scale()
    residuals: list[float] = []
    s_grid = np.arange(1, 8) / 8.0
    for _ in range(n_pairs):
        if space is SpaceTag.UNITARY:
            w0, w1 = _member_unitary(u, v, t, rng), _member_unitary(u, v, t, rng)
        elif space is SpaceTag.GRASSMANN:
            w0, w1 = _member_grassmann(u, v, t, rng), _member_grassmann(u, v, t, rng)
        else:
            w0, w1 = _member_positive(u, v, t, p, rng), _member_positive(u, v, t, p, rng)
        residuals.append(intermediate_membership(w0, u, v, t, space, p))
        residuals.append(intermediate_membership(w1, u, v, t, space, p))
        beta = geodesic(space, w0, w1)
        for point in beta.at(s_grid):
            residuals.append(intermediate_membership(point, u, v, t, space, p))
    residual_arr = np.array(residuals)
    return IntermediateSetReport(
        t=t,
        members_tested=2 * n_pairs,
        membership_residuals=residual_arr,
        convexity_passed=bool(residual_arr.max(initial=0.0) <= tol),
    )


# ---------------------------------------------------------------------------
# family metrics (shared by the battery and the acceptance suite)
# ---------------------------------------------------------------------------

def unitary_family_metrics(target, spec: PerturbationSpec, n_samples: int = DEFAULT_GRID,
                           linearity_grid: int = 17) -> dict:
    """Length, top-block lock, and intermediate-distance linearity of a member."""
    from .minimal import top_block_split

    tm = linalg.require_unitary(target)
    n = tm.shape[0]
    eye = np.eye(n)
    g = minimal_family_unitary(tm, spec)
    c = sample(g, n_samples)
    d_target = dist(SpaceTag.UNITARY, eye, tm, INF)
    measured = length(c, INF).length
    length_rel_err = abs(measured - d_target) / max(d_target, 1e-12)

    x = linalg.log_unitary(tm)
    split = top_block_split(x)
    lock_err = 0.0
    if split.norm_inf < math.pi - 1e-9:
        stride = max(1, n_samples // 64)
        nodes = c.points[::stride]
        ts = c.grid[::stride]
        comp = np.einsum("ia,tij,jb->tab", split.top_basis.conj(), nodes, split.top_basis, optimize=True)
        expected = np.zeros_like(comp)
        idx = np.arange(len(split.top_values))
        expected[:, idx, idx] = np.exp(1j * np.multiply.outer(ts, split.top_values))
        lock_err = float(np.abs(comp - expected).max())

    rs = np.linspace(0.0, 1.0, linearity_grid)
    linearity_err = max(
        abs(dist(SpaceTag.UNITARY, eye, g(float(r)), INF) - r * d_target) for r in rs
    )
    return {
        "distance": d_target,
        "length": measured,
        "length_rel_err": float(length_rel_err),
        "lock_err": lock_err,
        "linearity_err": float(linearity_err),
    }


def hermitian_family_metrics(d, seed: int, n_segments: int, n_samples: int = 256) -> dict:
    """Trace-norm length error and structure verdict of a seeded family member."""
    dm = linalg.require_hermitian(d)
    g = minimal_family_hermitian(dm, seed, n_segments)
    c = sample(g, n_samples)
    target = linalg.schatten_norm(dm, 1)
    measured = length(c, 1).length
    verdict = is_minimal_hermitian_trace(c)
    return {
        "target": target,
        "length": measured,
        "length_abs_err": abs(measured - target),
        "supported": verdict.supported,
        "curve": c,
    }


def grassmann_family_metrics(p, q, spec: PerturbationSpec, n_samples: int = DEFAULT_GRID) -> dict:
    """Endpoint and length checks for a Grassmann family member."""
    g = minimal_family_grassmann(p, q, spec)
    c = sample(g, n_samples)
    d_target = dist(SpaceTag.GRASSMANN, p, q, INF)
    measured = length(c, INF).length
    end_err = float(np.abs(c.end() - np.asarray(q, complex)).max())
    return {
        "distance": d_target,
        "length": measured,
        "length_rel_err": abs(measured - d_target) / max(d_target, 1e-12),
        "endpoint_err": end_err,
    }


def grassmann_embedding_metrics(p, q) -> dict:
    """Factor-2 isometry, reconstruction, codiagonality, spectrum pairing."""
    res = grassmann_log(p, q)
    s_p, s_q = symmetry(p), symmetry(q)
    factor2 = max(
        abs(2 * dist(SpaceTag.GRASSMANN, p, q, pn) - dist(SpaceTag.UNITARY, s_p, s_q, pn))
        for pn in (1.0, 2.0, INF)
    )
    rebuilt = linalg.expi(res.x) @ np.asarray(p, complex) @ linalg.expi(-res.x)
    reconstruction = float(np.abs(rebuilt - np.asarray(q, complex)).max())
    eigs = np.sort(np.linalg.eigvalsh(res.x))
    pairing = float(np.abs(eigs + eigs[::-1]).max())
    return {
        "factor2": float(factor2),
        "reconstruction": reconstruction,
        "codiagonal": res.codiagonal_residual,
        "pairing": pairing,
    }


def smooth_hermitian_curve(rng: np.random.Generator, n: int, endpoint_inf_cap: float = math.pi):
    """A seeded smooth curve in H(n) from 0, endpoint capped in spectral norm."""
    from .spaces import CurveGenerator

    a = random_hermitian(rng, n)
    b = random_hermitian(rng, n)
    c = random_hermitian(rng, n)
    top = float(np.abs(np.linalg.eigvalsh(a)).max())
    if top > endpoint_inf_cap:
        a *= endpoint_inf_cap / top
    scale = 0.35 * endpoint_inf_cap / max(
        float(np.abs(np.linalg.eigvalsh(b)).max()),
        float(np.abs(np.linalg.eigvalsh(c)).max()), 1e-12)
    b, c = b * scale, c * scale

    def many(ts: np.ndarray) -> np.ndarray:
        ts = np.asarray(ts, dtype=float)[:, None, None]
        return ts * a + np.sin(math.pi * ts) * b + np.sin(2 * math.pi * ts) * c

    return CurveGenerator(SpaceTag.HERMITIAN, lambda t: many(np.array([t]))[0], many)


def lift_positive_metrics(c: SampledCurve) -> dict:
    """Trace-norm lengths of a Hermitian curve and of its exponential lift."""
    l_h = length(c, 1).length
    l_g = length(lift_positive(c), 1).length
    return {
        "hermitian_length": l_h,
        "lifted_length": l_g,
        "equality_rel_err": abs(l_g - l_h) / max(l_h, 1e-12),
        "emi_deficit": l_h - l_g,
    }


def lift_unitary_metrics(c: SampledCurve) -> dict:
    """Trace-norm lengths of a Hermitian curve and of its e^{iX} lift."""
    l_h = length(c, 1).length
    l_u = length(lift_unitary(c), 1).length
    target = linalg.schatten_norm(c.end(), 1)
    return {
        "hermitian_length": l_h,
        "lifted_length": l_u,
        "contraction_excess": l_u - l_h,
        "equality_rel_err": abs(l_u - target) / max(target, 1e-12),
    }


# ---------------------------------------------------------------------------
# frechet derivative cross-validation
# ---------------------------------------------------------------------------

def simpson_exp_derivative(h: np.ndarray, k: np.ndarray, intervals: int = 256) -> np.ndarray:
    """Composite-Simpson quadrature of  int_0^1 e^{tH} K e^{(1-t)H} dt.

    Independent of the Hadamard-product implementation; 256 intervals push the
    truncation error below 1e-9 for ||H||_inf <= 2.
    """
    if intervals % 2:
        raise ValidationError("INVALID_PARAMETER", "Simpson needs an even interval count")
    w, v = np.linalg.eigh(h)
    ts = np.linspace(0.0, 1.0, intervals + 1)
    weights = np.ones(intervals + 1)
    weights[1:-1:2], weights[2:-1:2] = 4.0, 2.0
    weights /= 3.0 * intervals
    left = np.exp(np.multiply.outer(ts, w))
    right = np.exp(np.multiply.outer(1.0 - ts, w))
    k_eig = v.conj().T @ k @ v
    integrand = left[:, :, None] * k_eig[None, :, :] * right[:, None, :]
    acc = np.tensordot(weights, integrand, axes=1)
    return v @ acc @ v.conj().T


def frechet_agreement_metrics(h, k, fd_step: float = 1e-5) -> dict:
    """Hadamard formula vs quadrature vs central finite difference."""
    hm = linalg.require_hermitian(h)
    km = linalg.require_hermitian(k)
    had = linalg.frechet_exp(hm, km)
    quad = simpson_exp_derivative(hm, km)
    fd = (linalg.exp_h(hm + fd_step * km) - linalg.exp_h(hm - fd_step * km)) / (2 * fd_step)
    return {
        "vs_quadrature": linalg.schatten_norm(had - quad, INF),
        "vs_finite_difference": linalg.schatten_norm(had - fd, INF),
    }


# ---------------------------------------------------------------------------
# uniqueness: brute-force oracle and structured instances
# ---------------------------------------------------------------------------

def uniqueness_oracle(phases: np.ndarray, theta_cap: float | None, tol: float = 1e-9) -> bool:
    """Enumerate candidate theta over the phase multiset; True if one fits all."""
    candidates = sorted({abs(float(ph)) for ph in phases} | {0.0})
    for cand in candidates:
        if theta_cap is not None and cand >= theta_cap - tol:
            continue
        if all(min(abs(ph - cand), abs(ph + cand)) <= tol for ph in phases):
            return True
    return False


def oracle_unique_unitary(u, v) -> bool:
    um = linalg.require_unitary(u)
    vm = linalg.require_unitary(v)
    _, phases = linalg.eig_unitary(um.conj().T @ vm)
    return uniqueness_oracle(phases, theta_cap=math.pi)


def oracle_unique_grassmann(p, q) -> bool:
    _, phases = linalg.eig_unitary(symmetry(q) @ symmetry(p))
    return uniqueness_oracle(phases / 2, theta_cap=None)


def structured_unitary_pair(rng: np.random.Generator, n: int, force_unique: bool):
    """A pair (U, V) with spec(U*V) engineered for (non-)uniqueness."""
    w = random_unitary(rng, n)
    if force_unique:
        theta = float(rng.uniform(0.05, math.pi - 0.1))
        phases = theta * rng.choice([-1.0, 1.0], size=n)
    elif rng.uniform() < 0.25:
        # antipodal: theta = pi is excluded from the uniqueness condition
        phases = np.full(n, math.pi)
    else:
        # two separated moduli, both guaranteed present, random signs
        t1 = float(rng.uniform(0.05, math.pi - 0.4))
        t2 = t1 + float(rng.uniform(0.05, math.pi - 0.05 - t1))
        rest = rng.choice([t1, t2], size=n - 2)
        phases = np.concatenate([[t1, t2], rest]) * rng.choice([-1.0, 1.0], size=n)
    delta = (w * np.exp(1j * phases)) @ w.conj().T
    u = random_unitary(rng, n)
    return u, u @ delta, force_unique


def direct_rotation_pair(rng: np.random.Generator, n: int, m: int, angles: np.ndarray):
    """Projections (P, Q) of rank m whose principal angles are ``angles``."""
    w = random_unitary(rng, n)
    k = min(m, n - m)
    if len(angles) != k:
        raise ValidationError("INVALID_PARAMETER", f"need {k} angles")
    a = np.zeros((m, n - m))
    a[:k, :k] = np.diag(angles)
    x = np.zeros((n, n), dtype=complex)
    x[:m, m:] = a
    x[m:, :m] = a.T
    p0 = np.zeros((n, n), dtype=complex)
    p0[:m, :m] = np.eye(m)
    rot = linalg.expi(x)
    q0 = rot @ p0 @ rot.conj().T
    return w @ p0 @ w.conj().T, w @ q0 @ w.conj().T


def structured_grassmann_pair(rng: np.random.Generator, n: int, force_unique: bool):
    """A projection pair engineered for (non-)uniqueness; gap stays below 1."""
    if force_unique:
        if n % 2 == 0 and rng.uniform() < 0.9:
            m = n // 2
            theta = float(rng.uniform(0.05, math.pi / 2 - 0.05))
            angles = np.full(m, theta)
        else:
            m = int(rng.integers(1, n))
            angles = np.zeros(min(m, n - m))  # P = Q
        return (*direct_rotation_pair(rng, n, m, angles), True)
    if n == 2:
        raise ValidationError("INVALID_PARAMETER", "no non-unique pairs below the gap at n = 2")
    m = int(rng.integers(1, n))
    k = min(m, n - m)
    if 2 * m == n and k >= 2:
        t1 = float(rng.uniform(0.05, math.pi / 2 - 0.3))
        t2 = t1 + float(rng.uniform(0.1, math.pi / 2 - 0.05 - t1))
        angles = np.concatenate([[t1, t2], rng.uniform(0.05, math.pi / 2 - 0.05, size=k - 2)])
    else:
        # a kernel block is forced, so any nonzero angle breaks uniqueness
        if 2 * m == n:
            m = max(1, m - 1)
            k = min(m, n - m)
        angles = rng.uniform(0.1, math.pi / 2 - 0.1, size=k)
    return (*direct_rotation_pair(rng, n, m, angles), False)


# ---------------------------------------------------------------------------
# negative controls: hand-built violating inputs that every check must flag
# ---------------------------------------------------------------------------

def _control_curve(points_fn, n_steps: int = 64):
    from .spaces import CurveGenerator

    def many(ts):
        return np.stack([points_fn(float(t)) for t in np.asarray(ts, float)])

    return sample(CurveGenerator(SpaceTag.HERMITIAN, points_fn, many), n_steps)


def _control_pinching() -> CheckResult:
    # matrices that are not a projector system expand norms instead
    seg = _control_curve(lambda t: t * np.diag([1.0, -1.0]).astype(complex))
    bogus = linalg.ProjectorSystem.from_matrices([2 * np.eye(2)], validate=False)
    l_orig = length(seg, 1).length
    l_pinch = length(pinch_sampled(bogus, seg), 1).length
    return _result("pinching_minimality", [_excess(l_pinch - l_orig, 1e-9)],
                   {"pinched_length": l_pinch, "length": l_orig})


def _control_diagonal() -> CheckResult:
    osc = _control_curve(lambda t: np.diag([t + 0.4 * math.sin(2 * math.pi * t), -t]).astype(complex))
    return check_diagonal_monotonicity(osc)


def _control_eigencurve() -> CheckResult:
    hump = _control_curve(lambda t: math.sin(math.pi * t) * np.diag([1.0, 2.0]).astype(complex))
    return check_eigencurve_monotonicity(hump, SpaceTag.HERMITIAN)


def _control_iemi() -> CheckResult:
    k = np.diag([2.0, -1.0]).astype(complex)
    violation = _iemi_violation(k / 2, k, 1)
    return _result("iemi", [_excess(violation, 1e-10)], {"violation": violation})


def _control_araki() -> CheckResult:
    # outside t in [0, 1] the contraction reverses
    rng = rng_from(1234, "araki-control")
    c = random_positive(rng, 3)
    d = random_positive(rng, 3)
    violation = _araki_violation(c, d, 2.0, 2)
    return _result("araki_contraction", [_excess(violation, 1e-9)], {"violation": violation})


def _control_convexity() -> CheckResult:
    # distance to the identity along a there-and-back bump is concave
    h = np.diag([1.0, -0.5]).astype(complex)
    eye = np.eye(2)
    values = np.array([
        dist(SpaceTag.POSITIVE, eye, linalg.exp_h(math.sin(math.pi * s) * h), 1)
        for s in np.linspace(0, 1, 9)
    ])
    violation = _midpoint_convexity_excess(values)
    return _result("convexity_distance", [_excess(violation, 1e-9)], {"violation": violation})


def _control_membership() -> CheckResult:
    data = antipodal_counterexample(2, 0.3)
    tol = 1e-6 * math.pi
    return _result("intermediate_membership", [_excess(data["midpoint_residual"], tol)], data)


def _control_hermitian_structure() -> CheckResult:
    bump = _control_curve(
        lambda t: t * np.diag([1.0, -1.0]).astype(complex)
        + 0.3 * math.sin(math.pi * t) * np.array([[0, 1], [1, 0]], dtype=complex)
    )
    verdict = is_minimal_hermitian_trace(bump)
    return _result("hermitian_family_structure",
                   [1.0 if verdict.supported else -1.0],
                   {"verdict": verdict.verdict, "failed_clause": verdict.failed_clause})


def _wiggly_curve(n: int = 3, cap: float = math.pi) -> SampledCurve:
    rng = rng_from(777, "wiggle", n)
    gen = smooth_hermitian_curve(rng, n, endpoint_inf_cap=cap)
    return sample(gen, 128)


def _control_lift_positive() -> CheckResult:
    metrics = lift_positive_metrics(_wiggly_curve())
    return _result("lift_positive", [_excess(metrics["equality_rel_err"], 1e-3)], metrics)


def _control_lift_unitary() -> CheckResult:
    metrics = lift_unitary_metrics(_wiggly_curve())
    return _result("lift_unitary", [_excess(metrics["equality_rel_err"], 1e-3)], metrics)


def _control_factor2() -> CheckResult:
    rng = rng_from(888, "factor2-control")
    p, q = direct_rotation_pair(rng, 4, 2, np.array([0.7, 0.2]))
    _, r = direct_rotation_pair(rng, 4, 2, np.array([0.3, 0.1]))
    mismatch = abs(2 * dist(SpaceTag.GRASSMANN, p, q, INF)
                   - dist(SpaceTag.UNITARY, symmetry(p), symmetry(r), INF))
    return _result("grassmann_embedding", [_excess(mismatch, 1e-8)], {"factor2": mismatch})


def _control_branch() -> CheckResult:
    x = np.diag([1.5 * math.pi, 0.2]).astype(complex)
    err = float(np.abs(linalg.log_unitary(linalg.expi(x)) - x).max())
    return _result("branch_invariant", [_excess(err, 1e-9)], {"roundtrip_err": err})


def _control_distance_log() -> CheckResult:
    x = np.diag([2.0, -0.3]).astype(complex)
    eye = np.eye(2)
    err = abs(dist(SpaceTag.UNITARY, eye, linalg.expi(1.2 * x), INF) - 2.0)
    return _result("distance_log_identity", [_excess(err, 1e-9)], {"err": err})


def _control_uniqueness() -> CheckResult:
    rng = rng_from(999, "uniqueness-control")
    u_a, v_a, _ = structured_unitary_pair(rng, 3, force_unique=True)
    u_b, v_b, _ = structured_unitary_pair(rng, 3, force_unique=False)
    # mismatched comparison: predicate on one pair against the oracle on another
    agree = is_unique_minimal_unitary(u_a, v_a).unique == oracle_unique_unitary(u_b, v_b)
    return _result("uniqueness_agreement", [1.0 if not agree else -1.0], {"agree": agree})


def _control_family_length() -> CheckResult:
    # a detour through an extra corner is strictly longer than the distance
    from .curves import concatenate

    rng = rng_from(555, "family-control")
    u = linalg.expi(random_hermitian(rng, 2, norm_inf=1.2))
    w = linalg.expi(random_hermitian(rng, 2, norm_inf=1.4))
    eye = np.eye(2)
    leg1 = sample(geodesic(SpaceTag.UNITARY, eye, w), 64)
    leg2 = sample(geodesic(SpaceTag.UNITARY, w, u), 64)
    detour = concatenate(leg1, leg2, INF)
    rel_err = abs(length(detour, INF).length - dist(SpaceTag.UNITARY, eye, u, INF)) / dist(
        SpaceTag.UNITARY, eye, u, INF)
    return _result("unitary_family", [_excess(rel_err, 1e-3)], {"length_rel_err": rel_err})


NEGATIVE_CONTROLS = {
    "pinching_minimality": _control_pinching,
    "diagonal_monotonicity": _control_diagonal,
    "eigencurve_monotonicity": _control_eigencurve,
    "iemi": _control_iemi,
    "araki_contraction": _control_araki,
    "convexity_distance": _control_convexity,
    "intermediate_membership": _control_membership,
    "hermitian_family_structure": _control_hermitian_structure,
    "lift_positive": _control_lift_positive,
    "lift_unitary": _control_lift_unitary,
    "grassmann_embedding": _control_factor2,
    "branch_invariant": _control_branch,
    "distance_log_identity": _control_distance_log,
    "uniqueness_agreement": _control_uniqueness,
    "unitary_family": _control_family_length,
}


def negative_control_results() -> list[tuple[str, CheckResult]]:
    return [(name, builder()) for name, builder in NEGATIVE_CONTROLS.items()]


# ---------------------------------------------------------------------------
# the named battery
# ---------------------------------------------------------------------------

def _family_target_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    """A unitary whose log has a clearly separated top eigenvalue cluster."""
    top = float(rng.uniform(1.0, math.pi - 0.2))
    rest = rng.uniform(0.05, 0.8 * top, size=n - 1) * rng.choice([-1.0, 1.0], size=n - 1)
    phases = np.concatenate([[top * float(rng.choice([-1.0, 1.0]))], rest])
    w = random_unitary(rng, n)
    return (w * np.exp(1j * phases)) @ w.conj().T


def _grassmann_detour_pair(rng: np.random.Generator, n: int):
    """A projection pair with at least two distinct values in spec(|X|)."""
    m = max(1, n // 2) if n != 2 else 1
    k = min(m, n - m)
    top = float(rng.uniform(0.6, math.pi / 2 - 0.1))
    angles = np.concatenate([[top], rng.uniform(0.05, 0.6 * top, size=k - 1)]) if k > 1 else np.array([top])
    return direct_rotation_pair(rng, n, m, angles)


def _eigenbasis_system(d: np.ndarray, rng: np.random.Generator) -> linalg.ProjectorSystem:
    """A projector system commuting with d: grouped eigenvector columns."""
    dec = linalg.eigh(d)
    n = d.shape[0]
    n_groups = int(rng.integers(2, max(3, n) + 1))
    labels = rng.integers(0, n_groups, size=n)
    mats = []
    for g in range(n_groups):
        cols = dec.vectors[:, labels == g]
        if cols.shape[1]:
            mats.append(cols @ cols.conj().T)
    return linalg.ProjectorSystem.from_matrices(mats)


def _random_orthonormal_system(rng: np.random.Generator, n: int) -> linalg.ProjectorSystem:
    w = random_unitary(rng, n)
    n_groups = int(rng.integers(2, n + 1))
    labels = rng.integers(0, n_groups, size=n)
    mats = []
    for g in range(n_groups):
        cols = w[:, labels == g]
        if cols.shape[1]:
            mats.append(cols @ cols.conj().T)
    return linalg.ProjectorSystem.from_matrices(mats)


def _battery_for_dim(seed: int, n: int) -> list[CheckResult]:
    eye = np.eye(n)
    out: list[CheckResult] = []

    def tag(name: str) -> str:
        return f"{name}[n={n}]"

    # distance-log identity on U(n)
    rng = rng_from(seed, "distance_log_identity", n)
    worst = 0.0
    for _ in range(20):
        x = random_hermitian(rng, n, norm_inf=float(rng.uniform(0.05, math.pi)))
        worst = max(worst, abs(dist(SpaceTag.UNITARY, eye, linalg.expi(x), INF)
                               - linalg.schatten_norm(x, INF)))
    out.append(_result(tag("distance_log_identity"), [_excess(worst, 1e-9)],
                       {"worst": worst}, seeds=20))

    # principal branch invariants
    rng = rng_from(seed, "branch_invariant", n)
    worst, branch_ok = 0.0, True
    for _ in range(10):
        x = random_hermitian(rng, n, norm_inf=float(rng.uniform(0.05, math.pi - 0.05)))
        u = linalg.expi(x)
        worst = max(worst, float(np.abs(linalg.log_unitary(u) - x).max()))
        _, phases = linalg.eig_unitary(u)
        branch_ok = branch_ok and bool(np.all(phases > -math.pi) and np.all(phases <= math.pi + 1e-15))
    out.append(_result(tag("branch_invariant"),
                       [_excess(worst, 1e-9), -1.0 if branch_ok else 1.0],
                       {"roundtrip": worst}, seeds=10))

    # invariance of the metrics
    rng = rng_from(seed, "bi_invariance", n)
    worst = 0.0
    for _ in range(8):
        u, v, w = (random_unitary(rng, n) for _ in range(3))
        for pn in (1.0, 2.0, INF):
            base = dist(SpaceTag.UNITARY, u, v, pn)
            worst = max(worst,
                        abs(dist(SpaceTag.UNITARY, w @ u, w @ v, pn) - base),
                        abs(dist(SpaceTag.UNITARY, u @ w, v @ w, pn) - base))
    out.append(_result(tag("bi_invariance"), [_excess(worst, 1e-9)], {"worst": worst}, seeds=8))

    rng = rng_from(seed, "congruence_invariance", n)
    worst = 0.0
    for _ in range(8):
        a, b = random_positive(rng, n), random_positive(rng, n)
        gu, gv = random_unitary(rng, n), random_unitary(rng, n)
        g = (gu * rng.uniform(0.5, 2.0, size=n)) @ gv
        for pn in (1.0, 2.0, INF):
            base = dist(SpaceTag.POSITIVE, a, b, pn)
            moved = dist(SpaceTag.POSITIVE, g.conj().T @ a @ g, g.conj().T @ b @ g, pn)
            worst = max(worst, abs(moved - base))
    out.append(_result(tag("congruence_invariance"), [_excess(worst, 1e-8)], {"worst": worst}, seeds=8))

    # unitary minimal family: length, lock, linearity
    rng = rng_from(seed, "unitary_family", n)
    excesses, worst_metrics = [], {}
    for i in range(3):
        target = _family_target_unitary(rng, n)
        spec = PerturbationSpec(seed=int(rng.integers(2**63)), mode=PerturbationMode.DETOUR,
                                detour_scale=float(rng.uniform(0.3, 0.95)))
        m = unitary_family_metrics(target, spec)
        excesses += [_excess(m["length_rel_err"], 1e-3),
                     _excess(m["lock_err"], 1e-8),
                     _excess(m["linearity_err"], 1e-6)]
        if not worst_metrics or m["length_rel_err"] > worst_metrics["length_rel_err"]:
            worst_metrics = m
    out.append(_result(tag("unitary_family"), excesses, worst_metrics, seeds=3))

    # hermitian trace-norm family: exact length, structure verdict
    rng = rng_from(seed, "hermitian_family", n)
    excesses, witness = [], {}
    for i in range(3):
        d = random_hermitian(rng, n)
        m = hermitian_family_metrics(d, seed=int(rng.integers(2**63)),
                                     n_segments=int(rng.integers(1, 5)))
        excesses += [_excess(m["length_abs_err"], 1e-9), -1.0 if m["supported"] else 1.0]
        witness = {"length_abs_err": max(witness.get("length_abs_err", 0.0), m["length_abs_err"])}
    out.append(_result(tag("hermitian_family"), excesses, witness, seeds=3))

    # grassmann family
    rng = rng_from(seed, "grassmann_family", n)
    excesses, witness = [], {}
    for i in range(2):
        p, q = _grassmann_detour_pair(rng, n)
        mode = PerturbationMode.DETOUR if n >= 3 else PerturbationMode.GEODESIC
        spec = PerturbationSpec(seed=int(rng.integers(2**63)), mode=mode,
                                detour_scale=float(rng.uniform(0.3, 0.9)))
        m = grassmann_family_metrics(p, q, spec)
        excesses += [_excess(m["length_rel_err"], 1e-3), _excess(m["endpoint_err"], 1e-8)]
        witness = {"length_rel_err": max(witness.get("length_rel_err", 0.0), m["length_rel_err"])}
    out.append(_result(tag("grassmann_family"), excesses, witness, seeds=2))

    # uniqueness predicates against the enumeration oracle
    rng = rng_from(seed, "uniqueness_agreement", n)
    disagreements, label_misses, count = 0, 0, 0
    for i in range(20):
        force = bool(i % 2)
        if rng.uniform() < 0.5:
            u, v, expected = structured_unitary_pair(rng, n, force)
            cert = is_unique_minimal_unitary(u, v)
            oracle = oracle_unique_unitary(u, v)
        else:
            if n == 2 and not force:
                continue
            p, q, expected = structured_grassmann_pair(rng, n, force)
            cert = is_unique_minimal_grassmann(p, q)
            oracle = oracle_unique_grassmann(p, q)
        count += 1
        disagreements += int(cert.unique != oracle)
        label_misses += int(cert.unique != expected)
    out.append(_result(tag("uniqueness_agreement"),
                       [float(disagreements) - 0.5, float(label_misses) - 0.5],
                       {"disagreements": disagreements, "label_misses": label_misses},
                       seeds=count))

    # pinching contraction on arbitrary curves and systems
    rng = rng_from(seed, "pinching_contraction", n)
    worst = -1.0
    for _ in range(10):
        c = sample(smooth_hermitian_curve(rng, n, endpoint_inf_cap=2.5), 64)
        system = _random_orthonormal_system(rng, n)
        for pn in (1.0, 2.0, INF):
            worst = max(worst, length(pinch_sampled(system, c), pn).length - length(c, pn).length)
    out.append(_result(tag("pinching_contraction"), [_excess(worst, 1e-9)], {"worst": worst}, seeds=10))

    # pinching preserves minimality on family members
    rng = rng_from(seed, "pinching_minimality", n)
    excesses = []
    for _ in range(3):
        d = random_hermitian(rng, n)
        c = sample(minimal_family_hermitian(d, int(rng.integers(2**63)), int(rng.integers(1, 4))), 64)
        system = _eigenbasis_system(c.end(), rng)
        excesses.append(check_pinching_minimality(c, system).worst_violation)
    out.append(_result(tag("pinching_minimality"), excesses, None, seeds=3))

    # diagonal monotonicity on a diagonal-endpoint family member
    rng = rng_from(seed, "diagonal_monotonicity", n)
    d = np.diag(np.sort(rng.normal(size=n))[::-1]).astype(complex)
    c = sample(minimal_family_hermitian(d, int(rng.integers(2**63)), 3), 128)
    out.append(dataclasses.replace(check_diagonal_monotonicity(c), name=tag("diagonal_monotonicity")))

    # eigenvalue / phase curve monotonicity across the three lift regimes
    rng = rng_from(seed, "eigencurve_monotonicity", n)
    excesses = []
    d = random_hermitian(rng, n, norm_inf=0.9 * math.pi)
    fam = sample(minimal_family_hermitian(d, int(rng.integers(2**63)), 2), DEFAULT_GRID)
    excesses.append(check_eigencurve_monotonicity(fam, SpaceTag.HERMITIAN).worst_violation)
    excesses.append(check_eigencurve_monotonicity(lift_positive(fam), SpaceTag.POSITIVE).worst_violation)
    excesses.append(check_eigencurve_monotonicity(lift_unitary(fam), SpaceTag.UNITARY).worst_violation)
    b = random_positive(rng, n)
    geo = sample(geodesic(SpaceTag.POSITIVE, eye, b), 256)
    excesses.append(check_eigencurve_monotonicity(geo, SpaceTag.POSITIVE).worst_violation)
    out.append(_result(tag("eigencurve_monotonicity"), excesses, None, seeds=4))

    # generalized IEMI
    rng = rng_from(seed, "iemi", n)
    worst = -1.0
    for _ in range(20):
        h = random_hermitian(rng, n, norm_inf=float(rng.uniform(0.1, 2.5)))
        k = random_hermitian(rng, n)
        for pn in (1.0, 2.0, INF):
            worst = max(worst, check_iemi(h, k, pn).worst_violation)
    out.append(_result(tag("iemi"), [worst], {"worst": worst}, seeds=20))

    # frechet derivative: three independent routes
    rng = rng_from(seed, "frechet_agreement", n)
    excesses = []
    for _ in range(3):
        h = random_hermitian(rng, n, norm_inf=2.0)
        k = random_hermitian(rng, n, norm_inf=2.0)
        m = frechet_agreement_metrics(h, k)
        excesses += [_excess(m["vs_quadrature"], 1e-8), _excess(m["vs_finite_difference"], 1e-6)]
    k0 = random_hermitian(rng, n)
    excesses.append(_excess(linalg.schatten_norm(linalg.frechet_exp(np.zeros((n, n)), k0) - k0, INF), 1e-12))
    out.append(_result(tag("frechet_agreement"), excesses, None, seeds=3))

    # araki power contraction
    rng = rng_from(seed, "araki_contraction", n)
    worst = -1.0
    for _ in range(20):
        c = random_positive(rng, n)
        d2 = random_positive(rng, n)
        t = float(rng.uniform(0.0, 1.0))
        for pn in (1.0, 2.0, INF):
            worst = max(worst, check_araki_contraction(c, d2, t, pn).worst_violation)
    out.append(_result(tag("araki_contraction"), [worst], {"worst": worst}, seeds=20))

    # convexity of s -> d(I, geodesic(s)) on Gl(n)+
    rng = rng_from(seed, "convexity_distance", n)
    worst = -1.0
    for _ in range(6):
        a, b = random_positive(rng, n), random_positive(rng, n)
        for pn in (1.0, 2.0, INF):
            worst = max(worst, check_convexity_distance(a, b, pn, grid_size=9).worst_violation)
    out.append(_result(tag("convexity_distance"), [worst], {"worst": worst}, seeds=6))

    # geodesic convexity of intermediate-point sets
    for space_name, space, pns in (
        ("unitary", SpaceTag.UNITARY, (INF,)),
        ("grassmann", SpaceTag.GRASSMANN, (INF,)),
        ("positive", SpaceTag.POSITIVE, (1.0, INF)),
    ):
        rng = rng_from(seed, "midpoint_convexity", space_name, n)
        excesses, seeds_run = [], 0
        for pn in pns:
            for t in (0.25, 0.5):
                if space is SpaceTag.UNITARY:
                    u = random_unitary(rng, n)
                    v = u @ linalg.expi(random_hermitian(rng, n, norm_inf=float(rng.uniform(0.2, math.pi / 2 - 0.1))))
                elif space is SpaceTag.GRASSMANN:
                    m = max(1, n // 2)
                    k = min(m, n - m)
                    angles = rng.uniform(0.05, math.pi / 4 - 0.05, size=k)
                    angles[0] = math.pi / 4 - 0.06
                    u, v = direct_rotation_pair(rng, n, m, angles)
                else:
                    u, v = random_positive(rng, n), random_positive(rng, n)
                report = check_midpoint_convexity(u, v, t, space, pn, n_pairs=2,
                                                  seed=int(rng.integers(2**63)))
                d_uv = dist(space, u, v, pn)
                tol = 1e-6 * max(d_uv, 1e-12)
                excesses.append(_excess(float(report.membership_residuals.max()), tol))
                seeds_run += 1
        out.append(_result(tag(f"midpoint_convexity_{space_name}"), excesses, None, seeds=seeds_run))

    # the I vs -I counterexample must reproduce
    data = antipodal_counterexample(n, 0.3)
    out.append(_result(tag("antipodal_counterexample"),
                       [_excess(max(data["member_residuals"]), 1e-6 * math.pi),
                        _excess(0.3 * math.pi / 2 - data["midpoint_residual"], 0.0)],
                       data))

    # grassmann embedding: factor 2, residuals, pairing
    rng = rng_from(seed, "grassmann_embedding", n)
    worst = {"factor2": 0.0, "reconstruction": 0.0, "codiagonal": 0.0, "pairing": 0.0}
    for _ in range(8):
        m = int(rng.integers(1, n))
        k = min(m, n - m)
        angles = rng.uniform(0.02, math.pi / 2 - 0.05, size=k)
        p, q = direct_rotation_pair(rng, n, m, angles)
        metrics = grassmann_embedding_metrics(p, q)
        for key in worst:
            worst[key] = max(worst[key], metrics[key])
    out.append(_result(tag("grassmann_embedding"),
                       [_excess(worst[key], 1e-8) for key in sorted(worst)], worst, seeds=8))

    # exponential lifts
    rng = rng_from(seed, "lift_positive", n)
    excesses = []
    for _ in range(3):
        d = random_hermitian(rng, n)
        c = sample(minimal_family_hermitian(d, int(rng.integers(2**63)), 2), DEFAULT_GRID)
        excesses.append(_excess(lift_positive_metrics(c)["equality_rel_err"], 1e-3))
    for _ in range(6):
        c = sample(smooth_hermitian_curve(rng, n, endpoint_inf_cap=2.0), 64)
        excesses.append(_excess(lift_positive_metrics(c)["emi_deficit"], 1e-9))
    out.append(_result(tag("lift_positive"), excesses, None, seeds=9))

    rng = rng_from(seed, "lift_unitary", n)
    excesses = []
    for _ in range(3):
        d = random_hermitian(rng, n, norm_inf=float(rng.uniform(0.5, math.pi)))
        c = sample(minimal_family_hermitian(d, int(rng.integers(2**63)), 2), DEFAULT_GRID)
        excesses.append(_excess(lift_unitary_metrics(c)["equality_rel_err"], 1e-3))
    for _ in range(6):
        c = sample(smooth_hermitian_curve(rng, n, endpoint_inf_cap=math.pi), 64)
        excesses.append(_excess(lift_unitary_metrics(c)["contraction_excess"], 1e-6))
    out.append(_result(tag("lift_unitary"), excesses, None, seeds=9))

    # exponential metric comparisons
    rng = rng_from(seed, "exp_comparisons", n)
    excesses = []
    for _ in range(6):
        x = random_hermitian(rng, n, norm_inf=1.0)
        y = random_hermitian(rng, n, norm_inf=1.0)
        for pn in (1.0, 2.0, INF):
            gap = linalg.schatten_norm(x - y, pn) - dist(SpaceTag.POSITIVE, linalg.exp_h(x), linalg.exp_h(y), pn)
            excesses.append(_excess(gap, 1e-9))
        lifted = sample(_lifted_interpolant(x, y), 512)
        d_u = dist(SpaceTag.UNITARY, linalg.expi(x), linalg.expi(y), 1)
        excesses.append(_excess(d_u - length(lifted, 1).length, 1e-6))
    out.append(_result(tag("exp_comparisons"), excesses, None, seeds=6))

    # the 2x2 reduction behind the trace-norm characterization
    if n == 2:
        rng = rng_from(seed, "two_by_two_reduction", n)
        excesses = []
        for signs, case in (((1.0, 0.5), "psd"), ((-0.8, -0.3), "nsd"), ((1.2, -0.7), "mixed")):
            d = np.diag(signs).astype(complex)
            c = sample(minimal_family_hermitian(d, int(rng.integers(2**63)), 2), 128)
            deltas = c.points[1:] - c.points[:-1]
            if case == "psd":
                excesses.append(_excess(float(-np.linalg.eigvalsh(deltas).min()), 1e-7))
            elif case == "nsd":
                excesses.append(_excess(float(np.linalg.eigvalsh(deltas).max()), 1e-7))
            else:
                off = float(np.abs(c.points[:, 0, 1]).max())
                excesses.append(_excess(off, 1e-7))
        out.append(_result(tag("two_by_two_reduction"), excesses, None, seeds=3))

    return out


def _lifted_interpolant(x: np.ndarray, y: np.ndarray):
    """The unitary curve t -> e^{i((1-t)X + tY)} as a generator."""
    from .spaces import CurveGenerator

    def many(ts: np.ndarray) -> np.ndarray:
        ts = np.asarray(ts, dtype=float)
        zs = (1 - ts)[:, None, None] * x[None, :, :] + ts[:, None, None] * y[None, :, :]
        w, v = np.linalg.eigh(zs)
        return np.einsum("tij,tj,tkj->tik", v, np.exp(1j * w), v.conj(), optimize=True)

    return CurveGenerator(SpaceTag.UNITARY, lambda t: many(np.array([t]))[0], many)


def run_report(seed: int, max_dim: int) -> list[CheckResult]:
    """The full named battery across n in {2, ..., max_dim}, plus controls.

    Deterministic given the seed: every check derives its own generator
    stream from (seed, check name, n).
    """
    if max_dim < 2:
        raise ValidationError("INVALID_PARAMETER", "max_dim must be at least 2")
    results: list[CheckResult] = []
    for n in range(2, max_dim + 1):
        results.extend(_battery_for_dim(seed, n))
    for name, inner in negative_control_results():
        results.append(CheckResult(
            name=f"{name}::negative_control",
            passed=not inner.passed,
            worst_violation=inner.worst_violation,
            witness=inner.witness,
            seeds_run=inner.seeds_run,
        ))
    return results


def report_to_json_dict(results: list[CheckResult], seed: int, max_dim: int) -> dict:
    return {
        "seed": int(seed),
        "max_dim": int(max_dim),
        "all_passed": all(r.passed for r in results),
        "results": [r.to_json_dict() for r in results],
    }
