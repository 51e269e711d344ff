"""Splitting a readout into an information step and a noise step.

Conditioning on a readout ``a`` multiplies each eigenbasis element
``rho_ij`` by a Gaussian in the midpoint ``(A_i + A_j)/2`` (information) and by
the decoherence factor of :func:`weakmeas.engine.decoherence_factor` (noise).
Dropping the noise factor leaves the quasi-state ``rho_m(a)``: Hermitian and
unit trace, but not necessarily positive.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .engine import (
    PDF_FLOOR,
    DensityMatrix,
    MeasurementModel,
    OutcomeGrid,
    _as_density,
    decoherence_matrix,
    default_grid,
    log_outcome_pdf,
)
from .errors import NegligibleOutcome, ZeroDiagonal
from .linalg import HERMITIAN_TOL, _frozen, as_matrix, hermitian_defect

DIAGONAL_TOL = 1e-12


@dataclass(frozen=True)
class QuasiDensityMatrix:
    """Unit-trace Hermitian operator that may have negative eigenvalues.

    Deliberately not a :class:`DensityMatrix`: code that relies on positivity
    should not accept one of these by accident. ``elements`` are the matrix
    elements in the eigenbasis of the measured observable, whose eigenvectors
    are the columns of ``basis``. Keeping them in that basis matters because
    the off-diagonal elements can be exponentially large.
    """

    elements: np.ndarray
    basis: np.ndarray

    def __post_init__(self):
        e = as_matrix(self.elements, square=True)
        if hermitian_defect(e) > HERMITIAN_TOL * max(1.0, float(np.max(np.abs(e)))):
            raise ValueError("quasi-state is not Hermitian")
        e = 0.5 * (e + e.conj().T)
        if abs(np.trace(e).real - 1) > 1e-10:
            raise ValueError("quasi-state trace differs from 1")
        if np.diagonal(e).real.min() < -DIAGONAL_TOL:
            raise ValueError("quasi-state has a negative diagonal entry in its basis")
        object.__setattr__(self, "elements", _frozen(e))
        object.__setattr__(self, "basis", _frozen(as_matrix(self.basis, square=True)))

    @property
    def dim(self) -> int:
        return self.elements.shape[0]

    @property
    def matrix(self) -> np.ndarray:
        """The operator in the standard basis."""
        u = self.basis
        return u @ self.elements @ u.conj().T

    def expect(self, op) -> float:
        return float(np.sum(self.matrix * as_matrix(op).T).real)


def _log_midpoint_weights(model: MeasurementModel, outcomes) -> np.ndarray:
    """``log[(2 pi d^2)^(-1/2) exp(-(m_ij - a)^2 / (2 d^2))]``, shape ``(..., dim, dim)``."""
    ev = model.eigenvalues
    mid = 0.5 * (ev[:, None] + ev[None, :])
    a = np.asarray(outcomes, dtype=float)[..., None, None]
    d2 = model.resolution ** 2
    return -0.5 * math.log(2 * math.pi * d2) - (mid - a) ** 2 / (2 * d2)


def noise_free_state(model: MeasurementModel, rho_i, outcome: float) -> QuasiDensityMatrix:
    """Information-only update ``rho_m(a)`` of ``rho_i`` for readout ``outcome``.

    Raises
    ------
    NegligibleOutcome
        If the readout density is at or below the floor.
    """
    rho_i = _as_density(rho_i)
    log_p = float(log_outcome_pdf(model, rho_i, outcome))
    if not math.exp(log_p) > PDF_FLOOR:
        raise NegligibleOutcome(f"p({outcome}) is below the floor")
    scale = np.exp(_log_midpoint_weights(model, outcome) - log_p)
    return QuasiDensityMatrix(model.to_eigenbasis(rho_i.matrix) * scale,
                              model.observable.eigenvectors)


def apply_noise(model: MeasurementModel, q: QuasiDensityMatrix) -> DensityMatrix:
    """Damp the coherences of ``q`` by the decoherence factors.

    Applied to ``noise_free_state(model, rho, a)`` this yields
    ``posterior(model, rho, a)``.
    """
    damped = q.elements * decoherence_matrix(model)
    return DensityMatrix(model.from_eigenbasis(damped))


def reconstruct_initial(model: MeasurementModel, rho_i, grid: OutcomeGrid | None = None) -> np.ndarray:
    """Quadrature of ``p(a) rho_m(a)`` over the outcome axis.

    Outcomes below the density floor carry no weight and are skipped.
    """
    rho_i = _as_density(rho_i)
    grid = default_grid(model) if grid is None else grid
    acc = np.zeros((model.dim, model.dim), dtype=complex)
    log_p = log_outcome_pdf(model, rho_i, grid.nodes)
    for a, w, lp in zip(grid.nodes, grid.weights, log_p):
        p = math.exp(lp)
        if p > PDF_FLOOR:
            acc += w * p * noise_free_state(model, rho_i, a).elements
    return model.from_eigenbasis(acc)


def positivity_condition(model: MeasurementModel, rho_i, i: int, j: int) -> float:
    """Margin ``exp(-(A_i - A_j)^2 / (4 d^2)) - |rho_ij|^2 / (rho_ii rho_jj)``.

    Indices refer to the ascending eigenvalues of the observable. A negative
    margin means the quasi-states ``rho_m(a)`` are indefinite.

    Raises
    ------
    ZeroDiagonal
        If ``rho_ii`` or ``rho_jj`` vanishes.
    """
    rho_e = model.to_eigenbasis(_as_density(rho_i).matrix)
    rii, rjj = rho_e[i, i].real, rho_e[j, j].real
    if rii <= 0 or rjj <= 0:
        raise ZeroDiagonal(f"diagonal entries ({i},{i})={rii:.3g}, ({j},{j})={rjj:.3g}")
    ev = model.eigenvalues
    bound = math.exp(-((ev[i] - ev[j]) ** 2) / (4 * model.resolution ** 2))
    return bound - abs(rho_e[i, j]) ** 2 / (rii * rjj)


def worst_positivity_margin(model: MeasurementModel, rho_i,
                            zero_tol: float = 1e-14) -> tuple[float, tuple[int, int] | None]:
    """Smallest pairwise margin and the pair attaining it.

    Pairs involving an (almost) unpopulated eigenstate are skipped. For more
    than two levels pairwise margins are necessary, not sufficient, for every
    ``rho_m(a)`` to be positive; use :func:`negativity` for a direct check.
    """
    rho_e = model.to_eigenbasis(_as_density(rho_i).matrix)
    live = [k for k in range(model.dim) if rho_e[k, k].real > zero_tol]
    worst, pair = math.inf, None
    for i, j in itertools.combinations(live, 2):
        m = positivity_condition(model, rho_i, i, j)
        if m < worst:
            worst, pair = m, (i, j)
    return worst, pair


def _elements(q) -> np.ndarray:
    return q.elements if isinstance(q, QuasiDensityMatrix) else as_matrix(q, square=True)


def purity(q) -> float:
    """``Tr{q^2}``; above 1 for quasi-states with negative eigenvalues."""
    m = _elements(q)
    return float(np.sum(m * m.T).real)


def negativity(q) -> tuple[float, float]:
    """Smallest eigenvalue and ``sum |lambda| - 1`` of a unit-trace Hermitian operator."""
    m = _elements(q)
    w = np.linalg.eigvalsh(0.5 * (m + m.conj().T))
    return float(w[0]), max(0.0, float(np.sum(np.abs(w)) - np.sum(w)))
