"""Sampled matrix curves: length, reparametrization, concatenation.

Length is a per-interval sum.  For Hermitian, unitary, and Grassmann curves
the interval contribution is the chordal difference ||x_{k+1} - x_k||_p
(second order accurate for smooth curves); for positive curves it is the
exact interval distance ||log(A_k^{-1/2} A_{k+1} A_k^{-1/2})||_p, which is
exact on geodesic pieces and avoids any base-point ambiguity.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import PreconditionError
from .spaces import CurveGenerator, SpaceTag, on_space_defect

__all__ = [
    "CurveGenerator",
    "SampledCurve",
    "LengthReport",
    "sample",
    "length",
    "reparametrize_constant_speed",
    "concatenate",
    "pinch_sampled",
]

OFF_SPACE_FACTOR = 10.0


@dataclass(frozen=True)
class SampledCurve:
    """A curve stored as matrices over a strictly increasing grid on [0, 1]."""

    space: SpaceTag
    grid: np.ndarray
    points: np.ndarray

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        points = np.asarray(self.points, dtype=complex)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "points", points)
        if grid.ndim != 1 or points.ndim != 3 or len(grid) != len(points):
            raise ValueError("grid and points must align: one matrix per node")
        if grid[0] != 0.0 or grid[-1] != 1.0:
            raise ValueError("grid must start at 0 and end at 1")
        if np.any(np.diff(grid) <= 0):
            raise ValueError("grid must be strictly increasing")

    @property
    def n_intervals(self) -> int:
        return len(self.grid) - 1

    @property
    def dim(self) -> int:
        return self.points.shape[-1]

    def start(self) -> np.ndarray:
        return self.points[0]

    def end(self) -> np.ndarray:
        return self.points[-1]


@dataclass(frozen=True)
class LengthReport:
    length: float
    speed_profile: np.ndarray
    max_speed_deviation: float


def sample(g: CurveGenerator, n_steps: int) -> SampledCurve:
    """Sample a generator on the uniform grid with ``n_steps`` intervals."""
    if n_steps < 8:
        raise ValueError("n_steps must be at least 8")
    ts = np.linspace(0.0, 1.0, n_steps + 1)
    pts = g.at(ts)
    worst = max(on_space_defect(g.space, pt) for pt in pts)
    if worst > OFF_SPACE_FACTOR * linalg.CONSTRUCTION_TOL:
        raise PreconditionError("OFF_SPACE_POINT", f"worst sample defect {worst:.3e}")
    ts = ts.copy()
    ts[0], ts[-1] = 0.0, 1.0
    return SampledCurve(space=g.space, grid=ts, points=pts)


def _interval_contributions(c: SampledCurve, p: float) -> np.ndarray:
    if c.space is SpaceTag.POSITIVE:
        w, v = np.linalg.eigh(c.points[:-1])
        if np.any(w <= 0):
            raise PreconditionError("OFF_SPACE_POINT", "non-positive sample on a positive curve")
        inv_sqrt = np.einsum("kij,kj,klj->kil", v, w**-0.5, v.conj(), optimize=True)
        middle = inv_sqrt @ c.points[1:] @ inv_sqrt
        mw = np.linalg.eigvalsh((middle + middle.conj().transpose(0, 2, 1)) / 2)
        if np.any(mw <= 0):
            raise PreconditionError("OFF_SPACE_POINT", "non-positive interval ratio")
        return np.asarray(linalg.schatten_from_singular_values(np.log(mw), p), dtype=float)
    diffs = c.points[1:] - c.points[:-1]
    sv = np.linalg.svd(diffs, compute_uv=False)
    return np.asarray(linalg.schatten_from_singular_values(sv, p), dtype=float)


def length(c: SampledCurve, p: float) -> LengthReport:
    """Finsler length of a sampled curve under the Schatten-p metric."""
    if c.n_intervals < 8:
        raise ValueError("need at least 8 intervals")
    contribs = _interval_contributions(c, p)
    dts = np.diff(c.grid)
    speeds = contribs / dts
    total = float(contribs.sum())
    mean = float(speeds.mean())
    return LengthReport(
        length=total,
        speed_profile=speeds,
        max_speed_deviation=float(np.abs(speeds - mean).max()),
    )


def _dedupe(grid: np.ndarray, points: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Drop nodes that do not advance the grid; the final node always stays."""
    keep = [0]
    for k in range(1, len(grid) - 1):
        if grid[k] > grid[keep[-1]] + 1e-15:
            keep.append(k)
    if grid[-1] <= grid[keep[-1]] + 1e-15 and keep[-1] != 0:
        keep.pop()
    keep.append(len(grid) - 1)
    return grid[keep], points[keep]


def reparametrize_constant_speed(c: SampledCurve, p: float) -> SampledCurve:
    """Re-grid a curve by normalized arclength, equalizing interval speeds.

    The point set is untouched: each node is re-assigned the parameter equal
    to its cumulative length fraction, which makes every interval speed equal
    to the total length exactly.
    """
    contribs = _interval_contributions(c, p)
    total = float(contribs.sum())
    if total <= 1e-14 * max(1.0, float(np.abs(c.points).max())):
        raise PreconditionError("ZERO_LENGTH")
    cum = np.concatenate([[0.0], np.cumsum(contribs)]) / total
    cum[0], cum[-1] = 0.0, 1.0
    grid, points = _dedupe(cum, c.points)
    return SampledCurve(space=c.space, grid=grid, points=points)


def concatenate(c1: SampledCurve, c2: SampledCurve, p: float = linalg.INF) -> SampledCurve:
    """Join two curves end to start; the joint sits at t = L1 / (L1 + L2).

    The norm ``p`` only chooses where the joint lands on [0, 1]; the length of
    the result is the sum of the input lengths under any Schatten norm.
    """
    if c1.space is not c2.space:
        raise PreconditionError("SPACE_MISMATCH")
    scale = max(1.0, float(np.abs(c1.end()).max()))
    if float(np.abs(c1.end() - c2.start()).max()) > 1e-8 * scale:
        raise PreconditionError("ENDPOINT_MISMATCH")
    l1 = float(_interval_contributions(c1, p).sum())
    l2 = float(_interval_contributions(c2, p).sum())
    tau = 0.5 if l1 + l2 == 0 else l1 / (l1 + l2)
    grid = np.concatenate([c1.grid * tau, tau + (1.0 - tau) * c2.grid[1:]])
    points = np.concatenate([c1.points, c2.points[1:]])
    grid[-1] = 1.0
    grid, points = _dedupe(grid, points)
    return SampledCurve(space=c1.space, grid=grid, points=points)


def pinch_sampled(system: linalg.ProjectorSystem, c: SampledCurve) -> SampledCurve:
    """Apply a pinching operator to every node of a Hermitian curve."""
    if c.space is not SpaceTag.HERMITIAN:
        raise PreconditionError("SPACE_MISMATCH", "pinching curves is defined on H(n)")
    pinched = np.stack([linalg.pinch(system, pt) for pt in c.points])
    return SampledCurve(space=c.space, grid=c.grid, points=pinched)
