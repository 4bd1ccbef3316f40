"""Constructors for the families of minimal curves, and uniqueness predicates.

The unitary family realizes the block structure

    alpha(t) = e^{it X_S}  (+)  alpha_1(t)        on  S (+) S-perp,

with S the eigenspace of the maximal-modulus eigenvalues of X = -i log(U),
the top block locked to the one-parameter group, and alpha_1 any curve whose
spectral speed stays within ||X||_inf.  DETOUR members perturb the complement
by a seeded bump  e^{it X_c} e^{i phi(t) K},  phi(t) = scale * sin^2(pi t),
with K rescaled so the speed budget is respected with margin 1e-6.

The Hermitian trace-norm family emits seeded piecewise-linear chains whose
increments are positive on the positive eigenblock of the endpoint and
negative on the negative block, so the trace-norm length telescopes to
||D||_1 exactly.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .errors import PreconditionError, ValidationError
from .linalg import INF
from .randoms import random_hermitian, rng_from
from .spaces import CurveGenerator, SpaceTag, _grassmann_gate, grassmann_log

# Relative eigenvalue gap under which an eigenvalue joins the top cluster.
CLUSTER_TOL = 1e-8
# The complement speed budget is (1 - SPEED_MARGIN) * ||X||_inf.
SPEED_MARGIN = 1e-6
# Targets with ||log U||_inf above pi - PI_TOL follow the antipodal case.
PI_TOL = 1e-9


class PerturbationMode(enum.Enum):
    GEODESIC = "geodesic"
    DETOUR = "detour"


@dataclass(frozen=True)
class PerturbationSpec:
    """Seeded description of one family member."""

    seed: int
    mode: PerturbationMode = PerturbationMode.GEODESIC
    detour_scale: float = 0.5
    sign_pattern: tuple[int, ...] | None = None

    def __post_init__(self):
        if not 0.0 <= self.detour_scale < 1.0:
            raise ValidationError("INVALID_DETOUR_SCALE", f"{self.detour_scale} not in [0, 1)")
        if self.sign_pattern is not None and any(s not in (-1, 1) for s in self.sign_pattern):
            raise ValidationError("INVALID_SIGN_PATTERN", "entries must be +1 or -1")


@dataclass(frozen=True)
class BlockSplit:
    """Split of a Hermitian X along S = ker(||X||_inf I - |X|)."""

    top_projector: np.ndarray
    top_basis: np.ndarray
    rest_basis: np.ndarray
    top_values: np.ndarray
    rest_values: np.ndarray
    norm_inf: float

    @property
    def top_part(self) -> np.ndarray:
        return np.diag(self.top_values)

    @property
    def complement_part(self) -> np.ndarray:
        return np.diag(self.rest_values)


def top_block_split(x) -> BlockSplit:
    """Split X along the eigenspace where |eigenvalue| attains ||X||_inf."""
    xm = linalg.require_hermitian(x)
    dec = linalg.eigh(xm)
    norm_inf = float(np.abs(dec.values).max())
    if norm_inf <= 1e-14:
        raise PreconditionError("ZERO_MATRIX")
    top = np.abs(dec.values) >= norm_inf * (1.0 - CLUSTER_TOL)
    top_basis = dec.vectors[:, top]
    rest_basis = dec.vectors[:, ~top]
    return BlockSplit(
        top_projector=top_basis @ top_basis.conj().T,
        top_basis=top_basis,
        rest_basis=rest_basis,
        top_values=dec.values[top],
        rest_values=dec.values[~top],
        norm_inf=norm_inf,
    )


@dataclass(frozen=True)
class UniquenessCertificate:
    unique: bool
    theta: float | None
    phases: np.ndarray
    violating_pair: tuple[float, float] | None
    reason: str


def _fit_symmetric_pair(phases: np.ndarray, theta_cap: float | None, tol: float = 1e-9) -> UniquenessCertificate:
    """Decide whether a real multiset fits {theta, -theta} within ``tol``."""
    magnitudes = np.abs(phases)
    theta_hat = float(magnitudes.max())
    spread = theta_hat - float(magnitudes.min())
    if spread > tol:
        pair = (theta_hat, float(magnitudes.min()))
        return UniquenessCertificate(False, None, phases, pair,
                                     f"phase moduli spread {spread:.3e} exceeds tolerance")
    if theta_cap is not None and theta_hat >= theta_cap - tol:
        return UniquenessCertificate(False, None, phases, (theta_hat, theta_hat),
                                     "theta at the excluded antipodal boundary")
    return UniquenessCertificate(True, theta_hat, phases, None, "spectrum fits a symmetric pair")


def is_unique_minimal_unitary(u, v) -> UniquenessCertificate:
    """True iff spec(U*V) sits in {e^{i theta}, e^{-i theta}} for one theta < pi."""
    um = linalg.require_unitary(u)
    vm = linalg.require_unitary(v)
    _, phases = linalg.eig_unitary(um.conj().T @ vm)
    return _fit_symmetric_pair(phases, theta_cap=math.pi)


def is_unique_minimal_grassmann(p, q) -> UniquenessCertificate:
    """Uniqueness through the symmetry embedding.

    The phases of S_Q S_P are twice the eigenvalues of the direct rotation X;
    uniqueness means those eigenvalues fit {theta, -theta} with theta < pi/2,
    which the gap precondition already guarantees.  For odd n a zero
    eigenvalue is forced, so only theta = 0 (P = Q) can be unique.
    """
    pm, qm = _grassmann_gate(p, q)
    n = pm.shape[0]
    s_p = 2 * pm - np.eye(n)
    s_q = 2 * qm - np.eye(n)
    _, phases = linalg.eig_unitary(s_q @ s_p)
    return _fit_symmetric_pair(phases / 2, theta_cap=None)


def _bump(ts: np.ndarray, scale: float) -> np.ndarray:
    return scale * np.sin(math.pi * ts) ** 2


def _bump_rate(ts: np.ndarray, scale: float) -> np.ndarray:
    return scale * math.pi * np.sin(2 * math.pi * ts)


def _detour_generator(rest_values: np.ndarray, norm_inf: float, spec: PerturbationSpec):
    """Seeded complement data (K eigensystem) for a DETOUR member.

    Returns (k_vectors, k_values); K is rescaled so that
    ||X_c||_inf + max|phi'| * ||K||_inf <= (1 - margin) * ||X||_inf.
    """
    m = len(rest_values)
    budget = (1.0 - SPEED_MARGIN) * norm_inf
    room = budget - (float(np.abs(rest_values).max()) if m else 0.0)
    if room <= 0:
        raise PreconditionError(
            "SPEED_BUDGET_EXCEEDED",
            "complement block already saturates the speed budget",
        )
    rng = rng_from(spec.seed, "detour", m)
    k = random_hermitian(rng, m)
    top = float(np.abs(np.linalg.eigvalsh(k)).max()) if m else 0.0
    if top > 0:
        k *= (room / math.pi) / top
    kw, kv = np.linalg.eigh(k)
    return kv, kw


def _complement_factor(ts: np.ndarray, rest_values: np.ndarray, kv: np.ndarray | None,
                       kw: np.ndarray | None, scale: float) -> np.ndarray:
    """alpha_1(t) = diag(e^{i t c}) @ e^{i phi(t) K}, batched over t."""
    ts = np.asarray(ts, dtype=float)
    drift = np.exp(1j * np.multiply.outer(ts, rest_values))
    if kv is None:
        m = len(rest_values)
        out = np.zeros((len(ts), m, m), dtype=complex)
        idx = np.arange(m)
        out[:, idx, idx] = drift
        return out
    phases = np.exp(1j * np.multiply.outer(_bump(ts, scale), kw))
    detour = (kv[None, :, :] * phases[:, None, :]) @ kv.conj().T
    return drift[:, :, None] * detour


def _check_complement_speed(rest_values: np.ndarray, kv, kw, scale: float, norm_inf: float) -> None:
    """Posterior guard: complement speed on a 2048 grid within the budget."""
    if kv is None or len(rest_values) == 0:
        return
    ts = np.linspace(0.0, 1.0, 2049)
    rates = _bump_rate(ts, scale)
    drift = np.exp(1j * np.multiply.outer(ts, rest_values))
    k = (kv * kw) @ kv.conj().T
    conj_k = drift[:, :, None] * k[None, :, :] * drift.conj()[:, None, :]
    gen = np.diag(rest_values)[None, :, :] + rates[:, None, None] * conj_k
    speeds = np.abs(np.linalg.eigvalsh(gen)).max(axis=1)
    if float(speeds.max()) > (1.0 - SPEED_MARGIN / 2) * norm_inf:
        raise PreconditionError("SPEED_BUDGET_EXCEEDED", f"max complement speed {speeds.max():.6f}")


def minimal_family_unitary(u_target, spec: PerturbationSpec) -> CurveGenerator:
    """A seeded member of the family of minimal curves from I to the target.

    GEODESIC mode returns the one-parameter group of the principal logarithm.
    DETOUR mode perturbs the complement block; when the top eigenspace is the
    whole space there is nothing to perturb and the block curve is returned.
    For antipodal targets (pi in the spectrum of |X|) the top block follows
    the sign pattern, spectrum {pi, -pi}.
    """
    um = linalg.require_unitary(u_target)
    n = um.shape[0]
    if float(np.abs(um - np.eye(n)).max()) <= 1e-12:
        raise PreconditionError("IDENTITY_TARGET")
    x = linalg.log_unitary(um)
    split = top_block_split(x)
    case_b = split.norm_inf >= math.pi - PI_TOL

    top_values = split.top_values.copy()
    if case_b:
        pattern = spec.sign_pattern if spec.sign_pattern is not None else tuple([1] * len(top_values))
        if len(pattern) != len(top_values):
            raise ValidationError(
                "INVALID_SIGN_PATTERN",
                f"need {len(top_values)} entries, got {len(pattern)}",
            )
        top_values = math.pi * np.array(pattern, dtype=float)
    elif spec.sign_pattern is not None:
        raise ValidationError("INVALID_SIGN_PATTERN", "sign_pattern applies to antipodal targets only")

    basis = np.hstack([split.top_basis, split.rest_basis])
    rest_values = split.rest_values
    kv = kw = None
    if spec.mode is PerturbationMode.DETOUR and len(rest_values) > 0 and spec.detour_scale > 0:
        kv, kw = _detour_generator(rest_values, split.norm_inf, spec)
        _check_complement_speed(rest_values, kv, kw, spec.detour_scale, split.norm_inf)

    k_top = len(top_values)

    def many(ts: np.ndarray) -> np.ndarray:
        ts = np.asarray(ts, dtype=float)
        blocks = np.zeros((len(ts), n, n), dtype=complex)
        idx = np.arange(k_top)
        blocks[:, idx, idx] = np.exp(1j * np.multiply.outer(ts, top_values))
        if n > k_top:
            blocks[:, k_top:, k_top:] = _complement_factor(ts, rest_values, kv, kw, spec.detour_scale)
        return np.einsum("ij,tjk,lk->til", basis, blocks, basis.conj(), optimize=True)

    return CurveGenerator(SpaceTag.UNITARY, lambda t: many(np.array([t]))[0], many)


@dataclass(frozen=True)
class HermitianSplit:
    """Sign split of the endpoint: positive / kernel / negative eigenspaces."""

    basis: np.ndarray
    values: np.ndarray
    positive: np.ndarray = field(repr=False)
    zero: np.ndarray = field(repr=False)
    negative: np.ndarray = field(repr=False)

    def projector(self, mask: np.ndarray) -> np.ndarray:
        cols = self.basis[:, mask]
        return cols @ cols.conj().T

    @property
    def s1(self) -> np.ndarray:
        return self.projector(self.positive)

    @property
    def s2(self) -> np.ndarray:
        return self.projector(self.zero)

    @property
    def s3(self) -> np.ndarray:
        return self.projector(self.negative)

    @property
    def positive_part(self) -> np.ndarray:
        vals = np.where(self.positive, self.values, 0.0)
        return (self.basis * vals) @ self.basis.conj().T

    @property
    def negative_part(self) -> np.ndarray:
        vals = np.where(self.negative, self.values, 0.0)
        return (self.basis * vals) @ self.basis.conj().T


def hermitian_split(d, zero_tol: float = 1e-10) -> HermitianSplit:
    dm = linalg.require_hermitian(d)
    dec = linalg.eigh(dm)
    scale = max(1.0, float(np.abs(dec.values).max()))
    zero = np.abs(dec.values) <= zero_tol * scale
    return HermitianSplit(
        basis=dec.vectors,
        values=dec.values,
        positive=(dec.values > 0) & ~zero,
        zero=zero,
        negative=(dec.values < 0) & ~zero,
    )


def _psd_chain(rng: np.random.Generator, target: np.ndarray, segments: int) -> list[np.ndarray]:
    """PSD increments B_1..B_m with sum exactly ``target`` (PSD, k x k).

    Drawn as target^(1/2) C_j target^(1/2) with random 0 <= C_j <= I whose sum
    is renormalized to the identity; redraws deterministically if the raw sum
    is close to singular.
    """
    k = target.shape[0]
    if k == 0:
        return [np.zeros((0, 0), dtype=complex) for _ in range(segments)]
    w, v = np.linalg.eigh(target)
    root = (v * np.sqrt(np.maximum(w, 0.0))) @ v.conj().T
    for _ in range(64):
        cs = []
        for _ in range(segments):
            g = rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k))
            q = np.linalg.qr(g)[0]
            cs.append((q * rng.uniform(0.0, 1.0, size=k)) @ q.conj().T)
        total = sum(cs)
        tw, tv = np.linalg.eigh(total)
        if tw[0] > 1e-10 * tw[-1]:
            break
    inv_root = (tv / np.sqrt(tw)) @ tv.conj().T
    return [root @ (inv_root @ c @ inv_root) @ root for c in cs]


def minimal_family_hermitian(d, seed: int, n_segments: int) -> CurveGenerator:
    """A seeded trace-norm minimal curve from 0 to d.

    Piecewise linear: PSD increments through the positive eigenblock of d,
    NSD increments through the negative block, identically zero on the
    kernel.  The trace-norm length telescopes to ||d||_1 exactly.
    """
    if n_segments < 1:
        raise ValidationError("INVALID_SEGMENTS", "need at least one segment")
    split = hermitian_split(d)
    w = split.basis
    n = w.shape[0]
    rng = rng_from(seed, "hermitian-family", n, n_segments)

    pos_target = np.diag(split.values[split.positive])
    neg_target = np.diag(-split.values[split.negative])
    pos_steps = _psd_chain(rng, pos_target.astype(complex), n_segments)
    neg_steps = _psd_chain(rng, neg_target.astype(complex), n_segments)

    pos_idx = np.where(split.positive)[0]
    neg_idx = np.where(split.negative)[0]
    increments = []
    for j in range(n_segments):
        full = np.zeros((n, n), dtype=complex)
        full[np.ix_(pos_idx, pos_idx)] = pos_steps[j]
        full[np.ix_(neg_idx, neg_idx)] = -neg_steps[j]
        increments.append(w @ full @ w.conj().T)
    increments = np.stack(increments) if increments else np.zeros((0, n, n), complex)
    nodes = np.concatenate([np.zeros((1, n, n), complex), np.cumsum(increments, axis=0)])

    m = n_segments

    def many(ts: np.ndarray) -> np.ndarray:
        ts = np.asarray(ts, dtype=float)
        seg = np.clip((ts * m).astype(int), 0, m - 1)
        local = ts * m - seg
        return nodes[seg] + local[:, None, None] * increments[seg]

    return CurveGenerator(SpaceTag.HERMITIAN, lambda t: many(np.array([t]))[0], many)


@dataclass(frozen=True)
class MinimalityVerdict:
    supported: bool
    failed_clause: str | None
    diagnostics: dict

    @property
    def verdict(self) -> str:
        return "SUPPORTED" if self.supported else "REFUTED"


def is_minimal_hermitian_trace(c, endpoint_basis_tolerance: float = 1e-8) -> MinimalityVerdict:
    """Structure test for trace-norm minimality of a Hermitian curve from 0.

    SUPPORTED needs (i) trace-norm length equal to ||c(1)||_1 within 1e-4
    relative, (ii) vanishing off-blocks and kernel block in the endpoint
    eigenbasis at every node, (iii) PSD increments on the positive block and
    NSD on the negative block (eigenvalue slack 1e-7).  A sampled check can
    refute minimality but only support it.
    """
    from .curves import SampledCurve, length  # local import to avoid a cycle

    if not isinstance(c, SampledCurve) or c.space is not SpaceTag.HERMITIAN:
        raise ValidationError("SPACE_MISMATCH", "need a sampled Hermitian curve")
    scale = max(1.0, float(np.abs(c.end()).max()))
    if float(np.abs(c.start()).max()) > endpoint_basis_tolerance * scale:
        raise PreconditionError("BAD_START", "curve must start at 0")

    split = hermitian_split(c.end(), zero_tol=endpoint_basis_tolerance)
    target = linalg.schatten_norm(c.end(), 1)
    measured = length(c, 1).length
    diagnostics: dict = {"length": measured, "target": target}
    if abs(measured - target) > 1e-4 * max(target, 1e-9):
        return MinimalityVerdict(False, "length", diagnostics)

    basis_blocks = [split.basis[:, split.positive], split.basis[:, split.zero], split.basis[:, split.negative]]
    coords = np.einsum("ia,tij,jb->tab", split.basis.conj(), c.points, split.basis, optimize=True)
    sizes = [b.shape[1] for b in basis_blocks]
    edges = np.concatenate([[0], np.cumsum(sizes)])
    # eigh sorts non-increasing, so coordinates come ordered positive/zero/negative.
    order = np.concatenate([
        np.where(split.positive)[0], np.where(split.zero)[0], np.where(split.negative)[0]])
    coords = coords[:, order][:, :, order]

    worst_off = 0.0
    for a in range(3):
        for b in range(3):
            if a == b and a != 1:
                continue
            block = coords[:, edges[a]:edges[a + 1], edges[b]:edges[b + 1]]
            if block.size:
                worst_off = max(worst_off, float(np.abs(block).max()))
    diagnostics["off_block"] = worst_off
    if worst_off > endpoint_basis_tolerance * scale:
        return MinimalityVerdict(False, "off_block", diagnostics)

    deltas = coords[1:] - coords[:-1]
    worst_sign = 0.0
    pos_block = deltas[:, edges[0]:edges[1], edges[0]:edges[1]]
    if pos_block.size:
        sym = (pos_block + pos_block.conj().transpose(0, 2, 1)) / 2
        worst_sign = max(worst_sign, float(-np.linalg.eigvalsh(sym).min()))
    neg_block = deltas[:, edges[2]:edges[3], edges[2]:edges[3]]
    if neg_block.size:
        sym = (neg_block + neg_block.conj().transpose(0, 2, 1)) / 2
        worst_sign = max(worst_sign, float(np.linalg.eigvalsh(sym).max()))
    diagnostics["sign_defect"] = worst_sign
    if worst_sign > 1e-7:
        return MinimalityVerdict(False, "increment_signs", diagnostics)
    return MinimalityVerdict(True, None, diagnostics)


def lift_positive(c):
    """Pointwise exp: a Hermitian curve becomes a curve in Gl(n)+.

    Trace-norm lengths match when the input is minimal; in general the lifted
    length dominates (exponential metric increasing).
    """
    from .curves import SampledCurve

    if c.space is not SpaceTag.HERMITIAN:
        raise ValidationError("SPACE_MISMATCH", "lift expects a Hermitian curve")
    w, v = np.linalg.eigh(c.points)
    lifted = np.einsum("tij,tj,tkj->tik", v, np.exp(w), v.conj(), optimize=True)
    return SampledCurve(space=SpaceTag.POSITIVE, grid=c.grid, points=lifted)


def lift_unitary(c):
    """Pointwise e^{iX}: a Hermitian curve becomes a curve in U(n).

    Requires c(0) = 0 and ||c(1)||_inf <= pi.  The lifted trace-norm length
    never exceeds the input length, with equality on minimal inputs.
    """
    from .curves import SampledCurve

    if c.space is not SpaceTag.HERMITIAN:
        raise ValidationError("SPACE_MISMATCH", "lift expects a Hermitian curve")
    if float(np.abs(c.start()).max()) > 1e-8 * max(1.0, float(np.abs(c.end()).max())):
        raise PreconditionError("BAD_START", "curve must start at 0")
    end_norm = linalg.schatten_norm(c.end(), INF)
    if end_norm > math.pi + 1e-9:
        raise PreconditionError("NORM_BOUND_EXCEEDED", f"||c(1)||_inf = {end_norm:.6f} > pi")
    w, v = np.linalg.eigh(c.points)
    lifted = np.einsum("tij,tj,tkj->tik", v, np.exp(1j * w), v.conj(), optimize=True)
    return SampledCurve(space=SpaceTag.UNITARY, grid=c.grid, points=lifted)


def minimal_family_grassmann(p, q, spec: PerturbationSpec) -> CurveGenerator:
    """A seeded member of the family of minimal projection curves P -> Q.

    The block over S_X = ker(||X||_inf I - |X|) follows the compressed
    geodesic; the complement carries a seeded conjugation detour with speed
    within ||X||_inf.  When spec(|X|) is a singleton the geodesic is the only
    minimal curve and DETOUR mode raises UNIQUE_GEODESIC_ONLY.
    """
    pm, qm = _grassmann_gate(p, q)
    n = pm.shape[0]
    x = grassmann_log(pm, qm).x
    norm_x = linalg.schatten_norm(x, INF)

    if norm_x <= 1e-12:
        if spec.mode is PerturbationMode.DETOUR:
            raise PreconditionError("UNIQUE_GEODESIC_ONLY", "P = Q admits only the constant curve")
        constant = pm.copy()

        def many_const(ts: np.ndarray) -> np.ndarray:
            return np.broadcast_to(constant, (len(np.asarray(ts)), n, n)).copy()

        return CurveGenerator(SpaceTag.GRASSMANN, lambda t: constant, many_const)

    split = top_block_split(x)
    if spec.mode is PerturbationMode.DETOUR and len(split.rest_values) == 0:
        raise PreconditionError(
            "UNIQUE_GEODESIC_ONLY",
            "spec(|X|) is a singleton: the geodesic is the unique minimal curve",
        )

    basis = np.hstack([split.top_basis, split.rest_basis])
    k_top = len(split.top_values)
    p_coords = basis.conj().T @ pm @ basis
    p_top = p_coords[:k_top, :k_top]
    p_rest = p_coords[k_top:, k_top:]

    kv = kw = None
    if spec.mode is PerturbationMode.DETOUR and spec.detour_scale > 0:
        kv, kw = _detour_generator(split.rest_values, norm_x, spec)
        _check_complement_speed(split.rest_values, kv, kw, spec.detour_scale, norm_x)

    top_values = split.top_values
    rest_values = split.rest_values

    def many(ts: np.ndarray) -> np.ndarray:
        ts = np.asarray(ts, dtype=float)
        out = np.zeros((len(ts), n, n), dtype=complex)
        ph = np.exp(1j * np.multiply.outer(ts, top_values))
        out[:, :k_top, :k_top] = ph[:, :, None] * p_top[None, :, :] * ph.conj()[:, None, :]
        if n > k_top:
            w_t = _complement_factor(ts, rest_values, kv, kw, spec.detour_scale)
            out[:, k_top:, k_top:] = w_t @ p_rest[None, :, :] @ w_t.conj().transpose(0, 2, 1)
        return np.einsum("ij,tjk,lk->til", basis, out, basis.conj(), optimize=True)

    return CurveGenerator(SpaceTag.GRASSMANN, lambda t: many(np.array([t]))[0], many)
