"""Finite-resolution measurement of a Hermitian observable.

A measurement of ``A`` with resolution ``delta`` and readout ``a`` acts on the
system through the Gaussian operator

    P(a) = (2 pi delta^2)^(-1/4) exp(-(A - a)^2 / (4 delta^2)),

which is diagonal in the eigenbasis of ``A``. Everything below therefore works
in that eigenbasis and rotates back at the end. Outcome densities and
posteriors are evaluated in log space so that readouts far out in the tails
neither underflow nor divide 0 by 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import logsumexp

from .errors import NegligibleOutcome
from .linalg import (
    HERMITIAN_TOL,
    HermitianObservable,
    _frozen,
    as_matrix,
    hermitian_defect,
)
from .states import projector

PDF_FLOOR = 1e-300
TRACE_TOL = 1e-10
POSITIVITY_TOL = 1e-10

GRID_PAD_SIGMAS = 8.0
GRID_NODES = 4001


@dataclass(frozen=True)
class DensityMatrix:
    """A physical state: Hermitian, unit trace, positive semidefinite."""

    matrix: np.ndarray

    def __post_init__(self):
        m = as_matrix(self.matrix, square=True)
        defect = hermitian_defect(m)
        if defect > HERMITIAN_TOL:
            raise ValueError(f"density matrix is not Hermitian (defect {defect:.3g})")
        m = 0.5 * (m + m.conj().T)
        tr = np.trace(m).real
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValueError(f"density matrix trace is {tr!r}, expected 1")
        lo = np.linalg.eigvalsh(m)[0]
        if lo < -POSITIVITY_TOL:
            raise ValueError(f"density matrix has negative eigenvalue {lo:.3g}")
        object.__setattr__(self, "matrix", _frozen(m))

    @classmethod
    def pure(cls, psi) -> "DensityMatrix":
        return cls(projector(psi))

    @classmethod
    def maximally_mixed(cls, dim: int) -> "DensityMatrix":
        return cls(np.eye(dim, dtype=complex) / dim)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def purity(self) -> float:
        return float(np.sum(np.abs(self.matrix) ** 2))

    def expect(self, op) -> float:
        return float(np.sum(self.matrix * as_matrix(op).T).real)


def _as_density(rho) -> DensityMatrix:
    return rho if isinstance(rho, DensityMatrix) else DensityMatrix(rho)


@dataclass(frozen=True)
class MeasurementModel:
    """An observable measured with Gaussian resolution ``resolution``."""

    observable: HermitianObservable
    resolution: float

    def __post_init__(self):
        if not isinstance(self.observable, HermitianObservable):
            object.__setattr__(self, "observable", HermitianObservable(self.observable))
        delta = float(self.resolution)
        if not (delta > 0 and math.isfinite(delta)):
            raise ValueError(f"resolution must be positive, got {self.resolution!r}")
        object.__setattr__(self, "resolution", delta)

    @property
    def dim(self) -> int:
        return self.observable.dim

    @property
    def eigenvalues(self) -> np.ndarray:
        return self.observable.eigenvalues

    def to_eigenbasis(self, m) -> np.ndarray:
        return self.observable.to_eigenbasis(m)

    def from_eigenbasis(self, m) -> np.ndarray:
        return self.observable.from_eigenbasis(m)

    def log_amplitudes(self, outcomes) -> np.ndarray:
        """``log P(a)`` eigenvalues, shape ``(..., dim)`` for outcomes of shape ``(...)``."""
        a = np.asarray(outcomes, dtype=float)[..., None]
        d2 = self.resolution ** 2
        return -0.25 * math.log(2 * math.pi * d2) - (self.eigenvalues - a) ** 2 / (4 * d2)


@dataclass(frozen=True)
class OutcomeGrid:
    """Composite Simpson rule on ``n`` equally spaced nodes of ``[lo, hi]``."""

    lo: float
    hi: float
    n: int
    nodes: np.ndarray = field(init=False, repr=False, compare=False)
    weights: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError("grid needs lo < hi")
        if self.n < 3 or self.n % 2 == 0:
            raise ValueError("Simpson grid needs an odd node count >= 3")
        nodes = np.linspace(self.lo, self.hi, self.n)
        h = (self.hi - self.lo) / (self.n - 1)
        w = np.full(self.n, 2.0)
        w[1::2] = 4.0
        w[0] = w[-1] = 1.0
        object.__setattr__(self, "nodes", _frozen(nodes))
        object.__setattr__(self, "weights", _frozen(w * h / 3))

    def integrate(self, values) -> np.ndarray:
        """Integrate samples taken at ``nodes`` along their leading axis."""
        return np.tensordot(self.weights, np.asarray(values), axes=(0, 0))


def default_grid(model: MeasurementModel, n: int = GRID_NODES,
                 pad: float = GRID_PAD_SIGMAS) -> OutcomeGrid:
    ev = model.eigenvalues
    return OutcomeGrid(ev[0] - pad * model.resolution, ev[-1] + pad * model.resolution, n)


def kraus(model: MeasurementModel, outcome: float) -> np.ndarray:
    """Generalized measurement operator ``P(a)`` for readout ``a``."""
    return model.from_eigenbasis(np.diag(np.exp(model.log_amplitudes(outcome))))


def log_outcome_pdf(model: MeasurementModel, rho, outcomes) -> np.ndarray:
    rho = _as_density(rho)
    pops = np.clip(np.diagonal(model.to_eigenbasis(rho.matrix)).real, 0.0, None)
    return logsumexp(2 * model.log_amplitudes(outcomes), b=pops, axis=-1)


def outcome_pdf(model: MeasurementModel, rho, outcome) -> float | np.ndarray:
    """Density ``p(a) = Tr{P(a)^2 rho}``; vectorized over ``outcome``."""
    p = np.exp(log_outcome_pdf(model, rho, outcome))
    return float(p) if np.ndim(p) == 0 else p


def posterior(model: MeasurementModel, rho, outcome: float) -> DensityMatrix:
    """State conditioned on readout ``outcome``: ``P rho P / p``.

    Raises
    ------
    NegligibleOutcome
        If ``p(outcome) <= PDF_FLOOR``.
    """
    rho = _as_density(rho)
    log_p = float(log_outcome_pdf(model, rho, outcome))
    if not np.exp(log_p) > PDF_FLOOR:
        raise NegligibleOutcome(f"p({outcome}) = {np.exp(log_p):.3g} is below the floor")
    lg = model.log_amplitudes(outcome)
    scale = np.exp(lg[:, None] + lg[None, :] - log_p)
    out = model.from_eigenbasis(model.to_eigenbasis(rho.matrix) * scale)
    return DensityMatrix(out / np.trace(out).real)


def weighted_branches(model: MeasurementModel, rho, outcomes) -> np.ndarray:
    """Unnormalized ``P(a) rho P(a)`` in the eigenbasis for every outcome.

    Shape ``(len(outcomes), dim, dim)``. This is ``p(a) rho_f(a)``; summing it
    with quadrature weights gives the outcome-averaged state.
    """
    rho_e = model.to_eigenbasis(_as_density(rho).matrix)
    g = np.exp(model.log_amplitudes(np.asarray(outcomes, dtype=float)))
    return g[:, :, None] * rho_e[None] * g[:, None, :]


def decoherence_factor(model: MeasurementModel, a1: float, a2: float) -> float:
    """Coherence attenuation ``exp(-(a1 - a2)^2 / (8 delta^2))``."""
    return math.exp(-((a1 - a2) ** 2) / (8 * model.resolution ** 2))


def decoherence_matrix(model: MeasurementModel) -> np.ndarray:
    ev = model.eigenvalues
    return np.exp(-((ev[:, None] - ev[None, :]) ** 2) / (8 * model.resolution ** 2))


def total_channel(model: MeasurementModel, rho) -> DensityMatrix:
    """Outcome-averaged state, from the closed-form Gaussian damping of coherences."""
    rho = _as_density(rho)
    damped = model.to_eigenbasis(rho.matrix) * decoherence_matrix(model)
    return DensityMatrix(model.from_eigenbasis(damped))


def total_channel_quadrature(model: MeasurementModel, rho, grid: OutcomeGrid | None = None) -> np.ndarray:
    """Same average as :func:`total_channel`, integrated numerically over outcomes."""
    grid = default_grid(model) if grid is None else grid
    return model.from_eigenbasis(grid.integrate(weighted_branches(model, rho, grid.nodes)))


def outcome_moments(model: MeasurementModel, rho) -> tuple[float, float]:
    """Mean and second moment of the readout distribution.

    The readout is unbiased and its second moment exceeds the system's by the
    squared resolution.
    """
    rho = _as_density(rho)
    pops = np.diagonal(model.to_eigenbasis(rho.matrix)).real
    ev = model.eigenvalues
    return float(pops @ ev), float(pops @ ev ** 2) + model.resolution ** 2


def outcome_moments_quadrature(model: MeasurementModel, rho,
                               grid: OutcomeGrid | None = None) -> tuple[float, float]:
    grid = default_grid(model) if grid is None else grid
    x = grid.nodes
    p = outcome_pdf(model, rho, x)
    return float(grid.integrate(p * x)), float(grid.integrate(p * x * x))


def completeness_defect(model: MeasurementModel, grid: OutcomeGrid | None = None) -> float:
    """``max |int P(a)^2 da - 1|`` entrywise, by quadrature."""
    grid = default_grid(model) if grid is None else grid
    g2 = np.exp(2 * model.log_amplitudes(grid.nodes))
    total = model.from_eigenbasis(np.diag(grid.integrate(g2)))
    return float(np.max(np.abs(total - np.eye(model.dim))))
