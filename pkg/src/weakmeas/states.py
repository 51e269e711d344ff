"""Spin-1/2 operators, preset states and seeded random test objects."""

from __future__ import annotations

import numpy as np

# Basis ordering is (|+Z>, |-Z>).
SX = 0.5 * np.array([[0, 1], [1, 0]], dtype=complex)
SY = 0.5 * np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = 0.5 * np.array([[1, 0], [0, -1]], dtype=complex)
for _op in (SX, SY, SZ):
    _op.flags.writeable = False

PLUS_Z = np.array([1, 0], dtype=complex)
MINUS_Z = np.array([0, 1], dtype=complex)
PLUS_X = np.array([1, 1], dtype=complex) / np.sqrt(2)
MINUS_X = np.array([1, -1], dtype=complex) / np.sqrt(2)


def projector(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex).ravel()
    psi = psi / np.linalg.norm(psi)
    return np.outer(psi, psi.conj())


def random_pure_vector(dim: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def random_mixed_matrix(dim: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    """Convex mixture of ``rank`` random pure projectors with Dirichlet weights."""
    rank = dim if rank is None else rank
    weights = rng.dirichlet(np.ones(rank))
    rho = sum(w * projector(random_pure_vector(dim, rng)) for w in weights)
    return rho / np.trace(rho).real


def random_hermitian(dim: int, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return scale * 0.5 * (g + g.conj().T)
