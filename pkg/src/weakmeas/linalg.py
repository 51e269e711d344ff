"""Dense complex matrix helpers and Hermitian spectral calculus.

All matrices are plain ``numpy.ndarray`` objects with complex dtype. Values
handed out by this module are marked read-only so they can be shared freely.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DimensionMismatch, NonHermitianInput

HERMITIAN_TOL = 1e-10


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.flags.writeable = False
    return a


def as_matrix(m, *, square: bool = False) -> np.ndarray:
    """Coerce ``m`` to a finite 2-d complex array.

    Objects exposing a ``matrix`` attribute (density matrices, observables)
    are unwrapped. One-dimensional input is treated as a column vector.
    """
    m = np.asarray(getattr(m, "matrix", m), dtype=complex)
    if m.ndim == 1:
        m = m.reshape(-1, 1)
    if m.ndim != 2 or m.size == 0:
        raise DimensionMismatch(f"expected a non-empty 2-d array, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    if square and m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {m.shape}")
    return m


def hermitian_defect(m: np.ndarray) -> float:
    """Largest entrywise deviation ``max |M - M^dagger|``."""
    return float(np.max(np.abs(m - m.conj().T)))


def dagger(m: np.ndarray) -> np.ndarray:
    return np.asarray(m).conj().T


@dataclass(frozen=True)
class SpectralDecomposition:
    """Ascending real eigenvalues and the unitary whose columns are eigenvectors."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "eigenvalues", _frozen(np.asarray(self.eigenvalues, dtype=float)))
        object.__setattr__(self, "eigenvectors", _frozen(np.asarray(self.eigenvectors, dtype=complex)))

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]

    def reconstruct(self, values=None) -> np.ndarray:
        """``U diag(values) U^dagger``; defaults to the eigenvalues themselves."""
        u = self.eigenvectors
        v = self.eigenvalues if values is None else np.asarray(values)
        return (u * v) @ u.conj().T


def eig_hermitian(m) -> SpectralDecomposition:
    """Spectral decomposition of a Hermitian matrix.

    The input is symmetrized as ``(M + M^dagger) / 2`` before diagonalization,
    so round-off asymmetry below ``HERMITIAN_TOL`` is harmless.

    Raises
    ------
    NonHermitianInput
        If ``max |M - M^dagger|`` exceeds ``HERMITIAN_TOL``.
    """
    m = as_matrix(m, square=True)
    defect = hermitian_defect(m)
    if defect > HERMITIAN_TOL:
        raise NonHermitianInput(f"matrix is not Hermitian (max |M - M^H| = {defect:.3g})")
    w, u = np.linalg.eigh(0.5 * (m + m.conj().T))
    return SpectralDecomposition(w, u)


@dataclass(frozen=True)
class HermitianObservable:
    """A Hermitian operator together with its cached spectral decomposition."""

    matrix: np.ndarray
    spectrum: SpectralDecomposition = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        m = as_matrix(self.matrix, square=True)
        spectrum = eig_hermitian(m)
        object.__setattr__(self, "matrix", _frozen(0.5 * (m + m.conj().T)))
        object.__setattr__(self, "spectrum", spectrum)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def eigenvalues(self) -> np.ndarray:
        return self.spectrum.eigenvalues

    @property
    def eigenvectors(self) -> np.ndarray:
        return self.spectrum.eigenvectors

    def to_eigenbasis(self, m) -> np.ndarray:
        u = self.eigenvectors
        return u.conj().T @ as_matrix(m) @ u

    def from_eigenbasis(self, m) -> np.ndarray:
        u = self.eigenvectors
        return u @ np.asarray(m) @ u.conj().T


def spectral_apply(f: Callable[[float], float], obs: HermitianObservable) -> np.ndarray:
    """Operator function ``f(obs) = U diag(f(lambda_i)) U^dagger``."""
    if not isinstance(obs, HermitianObservable):
        obs = HermitianObservable(obs)
    values = np.array([f(float(x)) for x in obs.eigenvalues], dtype=float)
    if not np.all(np.isfinite(values)):
        raise ValueError("f is not finite on every eigenvalue")
    return obs.spectrum.reconstruct(values)


def expectation(rho, b) -> complex:
    """``Tr{rho B}``."""
    rho = as_matrix(rho, square=True)
    b = as_matrix(b, square=True)
    if rho.shape != b.shape:
        raise DimensionMismatch(f"shapes {rho.shape} and {b.shape} differ")
    # Tr(rho B) = sum_ij rho_ij B_ji
    return complex(np.sum(rho * b.T))


def tensor_product(a, b) -> np.ndarray:
    return np.kron(as_matrix(a), as_matrix(b))


def trace_distance(a, b) -> float:
    """``(1/2) sum |eig(a - b)|`` for Hermitian ``a`` and ``b``."""
    d = as_matrix(a, square=True) - as_matrix(b, square=True)
    w = np.linalg.eigvalsh(0.5 * (d + d.conj().T))
    return 0.5 * float(np.sum(np.abs(w)))


def commutator(a, b) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    return a @ b - b @ a
