"""The four metric spaces and their Finsler geometry.

H(n) with the flat Schatten-p metric, U(n) with the left-invariant metric
||X||_{p,U} = ||X||_p, Gl(n)+ with the congruence-invariant metric
||X||_{p,A} = ||A^{-1/2} X A^{-1/2}||_p, and the Grassmannian of orthogonal
projections embedded in U(n) through the symmetry P -> 2P - I.

Distances use the closed forms:
    hermitian   ||A - B||_p
    unitary     ||log(U*V)||_p            (principal branch, +pi at -1)
    positive    ||log(A^-1/2 B A^-1/2)||_p
    grassmann   ||X||_p  where Q = e^{iX} P e^{-iX} is the direct rotation
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import linalg
from .errors import PreconditionError
from .linalg import INF


class SpaceTag(enum.Enum):
    HERMITIAN = "hermitian"
    UNITARY = "unitary"
    POSITIVE = "positive"
    GRASSMANN = "grassmann"


def require_point(space: SpaceTag, a) -> np.ndarray:
    """Validate and clean a point of the tagged space."""
    if space is SpaceTag.HERMITIAN:
        return linalg.require_hermitian(a)
    if space is SpaceTag.UNITARY:
        return linalg.require_unitary(a)
    if space is SpaceTag.POSITIVE:
        return linalg.require_positive_definite(a)
    return linalg.require_projection(a)[0]


def on_space_defect(space: SpaceTag, a: np.ndarray) -> float:
    """How far a matrix is from satisfying the space invariant (relative)."""
    if space is SpaceTag.HERMITIAN:
        return linalg.hermitian_defect(a)
    if space is SpaceTag.UNITARY:
        return linalg.unitary_defect(a)
    if space is SpaceTag.POSITIVE:
        herm = linalg.hermitian_defect(a)
        w = np.linalg.eigvalsh((a + a.conj().T) / 2)
        return max(herm, float(-w[0]) if w[0] < 0 else 0.0)
    herm = linalg.hermitian_defect(a)
    idem = float(np.abs(a @ a - a).max(initial=0.0))
    return max(herm, idem)


@dataclass(frozen=True)
class CurveGenerator:
    """A curve t in [0,1] -> point matrix on the tagged space.

    ``eval_many`` evaluates a whole parameter vector at once; constructors in
    this package always supply a vectorized closed form.
    """

    space: SpaceTag
    eval: Callable[[float], np.ndarray]
    eval_many: Callable[[np.ndarray], np.ndarray] | None = None

    def __call__(self, t: float) -> np.ndarray:
        return self.eval(t)

    def at(self, ts: np.ndarray) -> np.ndarray:
        ts = np.asarray(ts, dtype=float)
        if self.eval_many is not None:
            return self.eval_many(ts)
        return np.stack([self.eval(float(t)) for t in ts])


@dataclass(frozen=True)
class GrassmannLogResult:
    """Direct rotation generator X with Q = e^{iX} P e^{-iX}, ||X||_inf < pi/2."""

    x: np.ndarray
    codiagonal_residual: float


def inv_sqrt_pd(a: np.ndarray) -> np.ndarray:
    return linalg.matrix_function(a, lambda w: w**-0.5)


def _grassmann_gate(p: np.ndarray, q: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Shared precondition checks; rank equality is tested before the gap."""
    pm, rank_p = linalg.require_projection(p)
    qm, rank_q = linalg.require_projection(q)
    if rank_p != rank_q:
        raise PreconditionError("RANK_MISMATCH", f"ranks {rank_p} != {rank_q}")
    gap = linalg.schatten_norm(pm - qm, INF)
    if gap >= 1.0:
        raise PreconditionError("GRASSMANN_TOO_FAR", f"||P - Q||_inf = {gap:.6f} >= 1")
    return pm, qm


def grassmann_log(p, q) -> GrassmannLogResult:
    """Direct rotation between two projections of equal rank.

    Uses S_Q S_P = e^{2iX}: the principal logarithm of the product of
    symmetries recovers the unique P-codiagonal generator.
    """
    pm, qm = _grassmann_gate(p, q)
    n = pm.shape[0]
    s_p = 2 * pm - np.eye(n)
    s_q = 2 * qm - np.eye(n)
    x = linalg.log_unitary(s_q @ s_p) / 2
    comp = np.eye(n) - pm
    residual = linalg.schatten_norm(pm @ x @ pm + comp @ x @ comp, INF)
    return GrassmannLogResult(x=x, codiagonal_residual=residual)


def symmetry(p) -> np.ndarray:
    """The self-adjoint unitary S_P = 2P - I."""
    pm, _ = linalg.require_projection(p)
    return 2 * pm - np.eye(pm.shape[0])


def dist(space: SpaceTag, a, b, p: float) -> float:
    """Finsler distance between two points of the tagged space."""
    if space is SpaceTag.HERMITIAN:
        am, bm = require_point(space, a), require_point(space, b)
        return linalg.schatten_norm(am - bm, p)
    if space is SpaceTag.UNITARY:
        am, bm = require_point(space, a), require_point(space, b)
        return linalg.schatten_norm(linalg.log_unitary(am.conj().T @ bm), p)
    if space is SpaceTag.POSITIVE:
        am, bm = require_point(space, a), require_point(space, b)
        r = inv_sqrt_pd(am)
        middle = linalg.require_hermitian(r @ bm @ r)
        return linalg.schatten_norm(linalg.log_pd(middle), p)
    return linalg.schatten_norm(grassmann_log(a, b).x, p)


def tangent_norm(space: SpaceTag, base, v, p: float) -> float:
    """Finsler norm of a tangent vector at a base point."""
    vm = linalg.as_square(v)
    if space is SpaceTag.POSITIVE:
        r = inv_sqrt_pd(linalg.require_positive_definite(base))
        return linalg.schatten_norm(r @ vm @ r, p)
    return linalg.schatten_norm(vm, p)


def _phase_conjugation_curve(left: np.ndarray, w: np.ndarray, v: np.ndarray) -> Callable[[np.ndarray], np.ndarray]:
    """t -> left @ diag(e^{i t w}) @ v*, vectorized over t."""
    vh = v.conj().T

    def many(ts: np.ndarray) -> np.ndarray:
        phases = np.exp(1j * np.multiply.outer(np.asarray(ts, float), w))
        return (left[None, :, :] * phases[:, None, :]) @ vh

    return many


def geodesic(space: SpaceTag, a, b) -> CurveGenerator:
    """The canonical geodesic from a to b, parametrized on [0, 1].

    Unitary targets use the principal logarithm, so the returned curve is
    minimal (||log(a* b)||_inf <= pi).
    """
    am, bm = require_point(space, a), require_point(space, b)

    if space is SpaceTag.HERMITIAN:
        diff = bm - am

        def many_h(ts: np.ndarray) -> np.ndarray:
            return am[None, :, :] + np.asarray(ts, float)[:, None, None] * diff[None, :, :]

        return CurveGenerator(space, lambda t: am + t * diff, many_h)

    if space is SpaceTag.UNITARY:
        x = linalg.log_unitary(am.conj().T @ bm)
        dec = linalg.eigh(x)
        left = am @ dec.vectors
        many_u = _phase_conjugation_curve(left, dec.values, dec.vectors)
        return CurveGenerator(space, lambda t: many_u(np.array([t]))[0], many_u)

    if space is SpaceTag.POSITIVE:
        root = linalg.matrix_function(am, np.sqrt)
        rinv = inv_sqrt_pd(am)
        middle = linalg.require_positive_definite(rinv @ bm @ rinv)
        dec = linalg.eigh(middle)
        log_w = np.log(dec.values)
        left = root @ dec.vectors
        right = dec.vectors.conj().T @ root

        def many_p(ts: np.ndarray) -> np.ndarray:
            powers = np.exp(np.multiply.outer(np.asarray(ts, float), log_w))
            return np.einsum("ij,tj,jk->tik", left, powers, right, optimize=True)

        return CurveGenerator(space, lambda t: many_p(np.array([t]))[0], many_p)

    x = grassmann_log(am, bm).x
    dec = linalg.eigh(x)
    base = dec.vectors.conj().T @ am @ dec.vectors
    v = dec.vectors

    def many_g(ts: np.ndarray) -> np.ndarray:
        # e^{itX} P e^{-itX} = V (E_t (V* P V) E_t*) V* with diagonal E_t.
        ph = np.exp(1j * np.multiply.outer(np.asarray(ts, float), dec.values))
        inner = ph[:, :, None] * base[None, :, :] * ph.conj()[:, None, :]
        return np.einsum("ij,tjk,lk->til", v, inner, v.conj(), optimize=True)

    return CurveGenerator(space, lambda t: many_g(np.array([t]))[0], many_g)
