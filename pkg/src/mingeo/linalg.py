"""Dense complex linear algebra kernel.

Eigendecomposition, functional calculus, Schatten norms, pinching, and the
Frechet derivative of the matrix exponential.  All operations are pure
functions of ndarrays; matrices are plain complex numpy arrays validated by
the ``require_*`` constructors.

Conventions:
  * eigenvalues and singular values are sorted non-increasing;
  * phases of unitaries live in (-pi, pi], with the branch +pi at -1;
  * constructors clean up (symmetrize / re-unitarize / snap spectra) when the
    defect is within 10x the construction tolerance, and reject beyond that.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import PreconditionError, ValidationError

INF = math.inf

# Relative tolerance accepted on construction; inputs within CLEANUP_FACTOR
# times it are projected back onto the constraint set instead of rejected.
CONSTRUCTION_TOL = 1e-9
CLEANUP_FACTOR = 10.0

# Below this gap (relative), divided differences switch to the confluent limit.
CONFLUENT_TOL = 1e-8

# Phases closer to -pi than this are flipped to the +pi branch.
BRANCH_TOL = 1e-12

# Deterministic mixing coefficient for the joint diagonalization of the
# commuting pair (Re u, Im u); any irrational-ish constant works, this one is
# fixed so results are reproducible.
_UNITARY_MIX = 0.7310585786


def dagger(a: np.ndarray) -> np.ndarray:
    return a.conj().T


def as_square(a) -> np.ndarray:
    """Coerce to a square complex ndarray with finite entries."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValidationError("NOT_SQUARE", f"shape {m.shape}")
    if not np.all(np.isfinite(m.view(float))):
        raise ValidationError("NON_FINITE_ENTRIES")
    return m


def _scale(a: np.ndarray) -> float:
    return max(1.0, float(np.abs(a).max(initial=0.0)))


def hermitian_defect(a: np.ndarray) -> float:
    """Relative deviation from self-adjointness."""
    a = np.asarray(a)
    return float(np.abs(a - a.conj().T).max(initial=0.0)) / _scale(a)


def require_hermitian(a, tol: float = CONSTRUCTION_TOL) -> np.ndarray:
    """Validate and symmetrize: returns (a + a*)/2, raises NON_HERMITIAN_INPUT."""
    m = as_square(a)
    if hermitian_defect(m) > CLEANUP_FACTOR * tol:
        raise ValidationError("NON_HERMITIAN_INPUT", f"defect {hermitian_defect(m):.3e}")
    return (m + m.conj().T) / 2


def unitary_defect(a: np.ndarray) -> float:
    a = np.asarray(a)
    n = a.shape[0]
    return float(np.abs(a.conj().T @ a - np.eye(n)).max(initial=0.0))


def require_unitary(a, tol: float = CONSTRUCTION_TOL) -> np.ndarray:
    """Validate and re-unitarize via the polar factor; raises NON_UNITARY_INPUT."""
    m = as_square(a)
    if unitary_defect(m) > CLEANUP_FACTOR * tol:
        raise ValidationError("NON_UNITARY_INPUT", f"defect {unitary_defect(m):.3e}")
    w, v = np.linalg.eigh(m.conj().T @ m)
    inv_sqrt = (v / np.sqrt(w)) @ v.conj().T
    return m @ inv_sqrt


def require_positive_definite(a, tol: float = CONSTRUCTION_TOL) -> np.ndarray:
    h = require_hermitian(a, tol)
    w = np.linalg.eigvalsh(h)
    if w[0] <= 0:
        raise ValidationError("NOT_POSITIVE_DEFINITE", f"min eigenvalue {w[0]:.3e}")
    return h


def require_projection(a, tol: float = CONSTRUCTION_TOL) -> tuple[np.ndarray, int]:
    """Validate a Hermitian idempotent; returns (snapped projection, rank)."""
    h = require_hermitian(a, tol)
    defect = float(np.abs(h @ h - h).max(initial=0.0)) / _scale(h)
    if defect > CLEANUP_FACTOR * tol:
        raise ValidationError("NOT_A_PROJECTION", f"idempotency defect {defect:.3e}")
    w, v = np.linalg.eigh(h)
    snapped = np.where(w > 0.5, 1.0, 0.0)
    rank = int(round(snapped.sum()))
    return (v * snapped) @ v.conj().T, rank


@dataclass(frozen=True)
class EigenDecomposition:
    """Spectral data of a Hermitian matrix, eigenvalues non-increasing."""

    vectors: np.ndarray
    values: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.vectors * self.values) @ self.vectors.conj().T


def eigh(h, tol: float = CONSTRUCTION_TOL) -> EigenDecomposition:
    """Hermitian eigendecomposition with non-increasing eigenvalues."""
    m = require_hermitian(h, tol)
    w, v = np.linalg.eigh(m)
    return EigenDecomposition(vectors=v[:, ::-1].copy(), values=w[::-1].copy())


def _joint_refine(v: np.ndarray, ref: np.ndarray, clusters: Sequence[np.ndarray]) -> np.ndarray:
    """Re-diagonalize ``ref`` inside each eigenvector cluster of ``v``."""
    v = v.copy()
    for idx in clusters:
        if len(idx) < 2:
            continue
        block = v[:, idx]
        comp = block.conj().T @ ref @ block
        comp = (comp + comp.conj().T) / 2
        _, q = np.linalg.eigh(comp)
        v[:, idx] = block @ q
    return v


def _cluster_indices(vals: np.ndarray, gap: float) -> list[np.ndarray]:
    order = np.argsort(vals)
    groups: list[list[int]] = [[int(order[0])]]
    for i in order[1:]:
        if vals[i] - vals[groups[-1][-1]] <= gap:
            groups[-1].append(int(i))
        else:
            groups.append([int(i)])
    return [np.array(g) for g in groups]


def eig_unitary(u, tol: float = CONSTRUCTION_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a unitary: u = vectors diag(exp(i phases)) vectors*.

    Phases lie in (-pi, pi] (branch +pi at eigenvalue -1) and are sorted
    non-increasing.  Works by jointly diagonalizing the commuting Hermitian
    pair Re(u), Im(u); near-degenerate mixtures are refined per cluster.
    """
    m = require_unitary(u, tol)
    re = (m + m.conj().T) / 2
    im = (m - m.conj().T) / 2j
    combo = re + _UNITARY_MIX * im
    w, v = np.linalg.eigh(combo)
    d = v.conj().T @ m @ v
    if float(np.abs(d - np.diag(np.diag(d))).max(initial=0.0)) > 1e-8:
        # Fallback: diagonalize Re(u), then Im(u) within each Re-cluster.
        wr, v = np.linalg.eigh(re)
        v = _joint_refine(v, im, _cluster_indices(wr, 1e-7))
        d = v.conj().T @ m @ v
    diag = np.diag(d)
    phases = np.arctan2(diag.imag, diag.real)
    phases = np.where(phases <= -math.pi + BRANCH_TOL, math.pi, phases)
    order = np.argsort(-phases, kind="stable")
    return v[:, order], phases[order]


def schatten_from_singular_values(sv: np.ndarray, p: float) -> np.ndarray:
    """Schatten p-norm from singular values; sv may be batched on axis -1."""
    if p < 1:
        raise ValidationError("INVALID_SCHATTEN_INDEX", f"p = {p}")
    sv = np.abs(sv)
    if p == INF:
        return sv.max(axis=-1)
    if p == 1:
        return sv.sum(axis=-1)
    if p == 2:
        return np.sqrt((sv * sv).sum(axis=-1))
    return (sv**p).sum(axis=-1) ** (1.0 / p)


def schatten_norm(m, p: float) -> float:
    """Schatten p-norm: (sum s_j^p)^(1/p), spectral norm for p = inf."""
    a = as_square(m)
    sv = np.linalg.svd(a, compute_uv=False)
    return float(schatten_from_singular_values(sv, p))


def matrix_function(h, f: Callable[[float], float] | np.ufunc) -> np.ndarray:
    """Apply a scalar map to a Hermitian matrix by functional calculus."""
    dec = eigh(h)
    try:
        with np.errstate(all="ignore"):
            vals = np.asarray(f(dec.values), dtype=float)
        if vals.shape != dec.values.shape:
            raise TypeError
    except (TypeError, ValueError):
        try:
            vals = np.array([float(f(x)) for x in dec.values])
        except (ValueError, ArithmeticError) as exc:
            raise PreconditionError("DOMAIN_ERROR", str(exc)) from exc
    if not np.all(np.isfinite(vals)):
        raise PreconditionError("DOMAIN_ERROR", "f undefined on part of the spectrum")
    out = (dec.vectors * vals) @ dec.vectors.conj().T
    return (out + out.conj().T) / 2


def expi(x) -> np.ndarray:
    """Unitary exponential e^{iX} of a Hermitian X."""
    dec = eigh(x)
    return (dec.vectors * np.exp(1j * dec.values)) @ dec.vectors.conj().T


def exp_h(x) -> np.ndarray:
    """Positive definite exponential e^X of a Hermitian X."""
    return matrix_function(x, np.exp)


def log_pd(a) -> np.ndarray:
    """Hermitian logarithm of a positive definite matrix."""
    m = require_positive_definite(a)
    return matrix_function(m, np.log)


def log_unitary(u) -> np.ndarray:
    """The unique Hermitian X with e^{iX} = u and spectrum in (-pi, pi]."""
    vectors, phases = eig_unitary(u)
    out = (vectors * phases) @ vectors.conj().T
    return (out + out.conj().T) / 2


@dataclass(frozen=True)
class ProjectorSystem:
    """Mutually orthogonal projections summing to the identity."""

    projectors: tuple[np.ndarray, ...]

    @classmethod
    def from_matrices(cls, mats: Sequence, validate: bool = True) -> "ProjectorSystem":
        """Build a system; ``validate=False`` skips all checks (test fixtures only)."""
        arrays = tuple(as_square(m) for m in mats)
        if not validate:
            return cls(projectors=arrays)
        if not arrays:
            raise ValidationError("INVALID_PROJECTOR_SYSTEM", "empty system")
        cleaned = []
        n = arrays[0].shape[0]
        for m in arrays:
            if m.shape[0] != n:
                raise ValidationError("DIMENSION_MISMATCH")
            snapped, _ = require_projection(m)
            cleaned.append(snapped)
        for i in range(len(cleaned)):
            for j in range(i + 1, len(cleaned)):
                if np.abs(cleaned[i] @ cleaned[j]).max(initial=0.0) > CLEANUP_FACTOR * CONSTRUCTION_TOL:
                    raise ValidationError("INVALID_PROJECTOR_SYSTEM", f"projectors {i},{j} not orthogonal")
        total = sum(cleaned)
        if np.abs(total - np.eye(n)).max() > CLEANUP_FACTOR * CONSTRUCTION_TOL:
            raise ValidationError("INVALID_PROJECTOR_SYSTEM", "projectors do not sum to identity")
        return cls(projectors=tuple(cleaned))

    @property
    def dim(self) -> int:
        return self.projectors[0].shape[0]


def pinch(system: ProjectorSystem, m) -> np.ndarray:
    """Pinching operator: sum_j P_j m P_j."""
    a = as_square(m)
    if a.shape[0] != system.dim:
        raise ValidationError("DIMENSION_MISMATCH")
    out = np.zeros_like(a)
    for proj in system.projectors:
        out += proj @ a @ proj
    return out


def _exp_divided_difference_table(vals: np.ndarray) -> np.ndarray:
    """First divided differences of exp over an eigenvalue vector."""
    li = vals[:, None]
    lj = vals[None, :]
    den = li - lj
    scale = np.maximum(1.0, np.maximum(np.abs(li), np.abs(lj)))
    confluent = np.abs(den) < CONFLUENT_TOL * scale
    with np.errstate(divide="ignore", invalid="ignore"):
        table = (np.exp(li) - np.exp(lj)) / den
    return np.where(confluent, np.exp((li + lj) / 2), table)


def divided_difference_exp(h) -> np.ndarray:
    """First divided difference table exp^[1] in the eigenbasis of h.

    Entry (i, j) is (e^{l_i} - e^{l_j})/(l_i - l_j) for the non-increasing
    eigenvalues l of h, with the confluent limit e^{(l_i+l_j)/2} on
    near-coincident pairs.  The result is real symmetric with positive
    entries.
    """
    dec = eigh(h)
    return _exp_divided_difference_table(dec.values)


def frechet_exp(h, k) -> np.ndarray:
    """Derivative of the matrix exponential at h in direction k.

    Computed as the eigenbasis Hadamard product exp^[1](h) o k, which equals
    the integral  int_0^1 e^{tH} K e^{(1-t)H} dt.
    """
    hm = require_hermitian(h)
    km = as_square(k)
    if hm.shape != km.shape:
        raise ValidationError("DIMENSION_MISMATCH")
    dec = eigh(hm)
    table = _exp_divided_difference_table(dec.values)
    kt = dec.vectors.conj().T @ km @ dec.vectors
    return dec.vectors @ (table * kt) @ dec.vectors.conj().T
