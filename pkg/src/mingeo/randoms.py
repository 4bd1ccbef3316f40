"""Seeded random matrix generators.

Everything is driven by ``numpy.random.Generator`` so identical seeds give
bit-identical streams on one platform.  Sub-seeds for named experiments are
derived with SHA-256, never with Python's salted ``hash``.
"""

from __future__ import annotations

import hashlib
import math

import numpy as np


def derive_seed(master: int, *parts) -> int:
    """Stable 64-bit sub-seed from a master seed and arbitrary labels."""
    text = ":".join([str(master), *map(str, parts)])
    digest = hashlib.sha256(text.encode()).digest()
    return int.from_bytes(digest[:8], "big")


def rng_from(seed: int, *parts) -> np.random.Generator:
    return np.random.default_rng(derive_seed(seed, *parts) if parts else seed)


def random_hermitian(rng: np.random.Generator, n: int, norm_inf: float | None = None) -> np.ndarray:
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    h = (g + g.conj().T) / 2
    if norm_inf is not None:
        top = float(np.abs(np.linalg.eigvalsh(h)).max())
        if top > 0:
            h *= norm_inf / top
    return h


def random_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    """Haar-like unitary: QR of a complex Gaussian with phase-fixed R."""
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(g)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_positive(rng: np.random.Generator, n: int, log_norm_cap: float = 3.0) -> np.ndarray:
    """exp of a random Hermitian with ||.||_inf clipped, conditioning the kernels."""
    h = random_hermitian(rng, n)
    top = float(np.abs(np.linalg.eigvalsh(h)).max())
    if top > log_norm_cap:
        h *= log_norm_cap / top
    w, v = np.linalg.eigh(h)
    return (v * np.exp(w)) @ v.conj().T


def random_projection(rng: np.random.Generator, n: int, rank: int) -> np.ndarray:
    v = random_unitary(rng, n)[:, :rank]
    return v @ v.conj().T


def random_unitary_near_identity(rng: np.random.Generator, n: int) -> np.ndarray:
    """expi(X) with ||X||_inf uniform in (0, pi/2 - 0.05): the d < pi/2 regime."""
    radius = rng.uniform(1e-3, math.pi / 2 - 0.05)
    x = random_hermitian(rng, n, norm_inf=radius)
    w, v = np.linalg.eigh(x)
    return (v * np.exp(1j * w)) @ v.conj().T
