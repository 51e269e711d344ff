"""Brute-force system-plus-pointer model of the measurement.

The pointer is a Gaussian wavepacket on a uniform grid. Coupling shifts the
packet attached to each eigencomponent of the observable by its eigenvalue;
reading the pointer at ``x = a`` then leaves the system in the state given by
the amplitudes at that node. Shifts are applied by resampling the analytic
Gaussian at the displaced centre, which keeps the map exact on every node and
avoids the wraparound of an FFT translation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .engine import PDF_FLOOR, DensityMatrix, MeasurementModel, outcome_pdf, posterior
from .errors import DimensionMismatch, GridOverflow, NegligibleOutcome
from .linalg import HermitianObservable, _frozen, trace_distance
from .states import projector

GRID_PAD_SIGMAS = 10.0
DEFAULT_STEPS_PER_SIGMA = 200
OVERFLOW_TOL = 1e-9
N_PROBES = 41


@dataclass(frozen=True)
class PointerWavepacket:
    """Gaussian pointer of width ``width`` (std. dev. in x) sampled at ``x``."""

    x: np.ndarray
    amplitudes: np.ndarray
    dx: float
    width: float

    @classmethod
    def gaussian(cls, width: float, half_span: float, dx: float) -> "PointerWavepacket":
        n = int(math.ceil(half_span / dx))
        x = dx * np.arange(-n, n + 1)
        return cls(_frozen(x), _frozen(_gaussian(x, width)), dx, width)

    def shifted(self, shift: float) -> np.ndarray:
        """Amplitudes ``psi(x - shift)`` on the same grid."""
        return _gaussian(self.x - shift, self.width)

    def norm(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2) * self.dx)


def _gaussian(x, width):
    return (2 * math.pi * width ** 2) ** -0.25 * np.exp(-(x ** 2) / (4 * width ** 2)) + 0j


def pointer_for(model: MeasurementModel, dx: float | None = None) -> PointerWavepacket:
    """Default pointer grid ``[-max|A| - 10 d, max|A| + 10 d]`` with ``dx = d / 200``."""
    delta = model.resolution
    dx = delta / DEFAULT_STEPS_PER_SIGMA if dx is None else dx
    half = float(np.max(np.abs(model.eigenvalues))) + GRID_PAD_SIGMAS * delta
    return PointerWavepacket.gaussian(delta, half, dx)


@dataclass(frozen=True)
class JointState:
    """Amplitudes ``psi(x, A)`` indexed by pointer node and eigenvalue label."""

    amplitudes: np.ndarray
    x: np.ndarray
    dx: float
    eigenvectors: np.ndarray

    def norm(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2) * self.dx)

    def marginal(self) -> np.ndarray:
        """Pointer density ``sum_A |psi(x, A)|^2`` at every node."""
        return np.sum(np.abs(self.amplitudes) ** 2, axis=1)

    def node_index(self, outcome: float) -> int:
        k = int(round((outcome - self.x[0]) / self.dx))
        if not 0 <= k < self.x.shape[0]:
            raise ValueError(f"outcome {outcome} lies outside the pointer grid")
        return k


def entangle(system, obs: HermitianObservable, meter: PointerWavepacket) -> JointState:
    """Apply the pointer shift to ``system`` (a state vector in the standard basis).

    Raises
    ------
    GridOverflow
        If a populated branch loses more than ``OVERFLOW_TOL`` of its mass past
        the grid edge.
    """
    if not isinstance(obs, HermitianObservable):
        obs = HermitianObservable(obs)
    psi = np.asarray(system, dtype=complex).ravel()
    if psi.shape[0] != obs.dim:
        raise DimensionMismatch(f"state has dimension {psi.shape[0]}, observable {obs.dim}")
    psi = psi / np.linalg.norm(psi)
    coeffs = obs.eigenvectors.conj().T @ psi
    amps = np.empty((meter.x.shape[0], obs.dim), dtype=complex)
    for k, (a, c) in enumerate(zip(obs.eigenvalues, coeffs)):
        branch = meter.shifted(a)
        lost = 1.0 - float(np.sum(np.abs(branch) ** 2) * meter.dx)
        if abs(c) ** 2 * lost > OVERFLOW_TOL:
            raise GridOverflow(f"branch A={a:.6g} loses {lost:.3g} of its mass")
        amps[:, k] = branch * c
    return JointState(_frozen(amps), meter.x, meter.dx, obs.eigenvectors)


def readout(joint: JointState, outcome: float) -> tuple[float, np.ndarray]:
    """Pointer density at the node nearest ``outcome`` and the conditional system vector."""
    k = joint.node_index(outcome)
    amp = joint.amplitudes[k]
    pdf = float(np.sum(np.abs(amp) ** 2))
    if not pdf > PDF_FLOOR:
        raise NegligibleOutcome(f"pointer density at x={joint.x[k]:.6g} is {pdf:.3g}")
    return pdf, joint.eigenvectors @ (amp / math.sqrt(pdf))


@dataclass(frozen=True)
class MeterComparison:
    max_trace_distance: float
    max_pdf_discrepancy: float
    outcomes: np.ndarray
    dx: float


def probe_outcomes(model: MeasurementModel, joint: JointState, n: int = N_PROBES) -> np.ndarray:
    """``n`` pointer nodes spread over ``[A_min - 2 d, A_max + 2 d]``."""
    ev, d = model.eigenvalues, model.resolution
    targets = np.linspace(ev[0] - 2 * d, ev[-1] + 2 * d, n)
    return np.array([joint.x[joint.node_index(t)] for t in targets])


def compare_with_kraus(system, model: MeasurementModel, dx: float | None = None) -> MeterComparison:
    """Compare pointer readouts with the Gaussian-operator engine on a probe set.

    Both routes are evaluated at the same pointer nodes, so the residuals
    measure how faithfully the explicit coupling reproduces the operator
    description.
    """
    dx = model.resolution / DEFAULT_STEPS_PER_SIGMA if dx is None else dx
    if dx > model.resolution / 100:
        raise ValueError("pointer spacing must not exceed delta / 100")
    psi = np.asarray(system, dtype=complex).ravel()
    joint = entangle(psi, model.observable, pointer_for(model, dx))
    rho = DensityMatrix.pure(psi)
    outcomes = probe_outcomes(model, joint)
    worst_td = worst_pdf = 0.0
    for a in outcomes:
        pdf, vec = readout(joint, a)
        worst_pdf = max(worst_pdf, abs(pdf - outcome_pdf(model, rho, a)))
        worst_td = max(worst_td, trace_distance(projector(vec), posterior(model, rho, a).matrix))
    return MeterComparison(worst_td, worst_pdf, outcomes, dx)


def snapped_pdf_error(system, model: MeasurementModel, dx: float, outcomes) -> float:
    """Largest ``|p_pointer(nearest node) - p(a)|`` over off-grid readouts ``a``.

    Unlike :func:`compare_with_kraus`, the engine is evaluated at the requested
    outcome, so the result shrinks with the node spacing.
    """
    psi = np.asarray(system, dtype=complex).ravel()
    joint = entangle(psi, model.observable, pointer_for(model, dx))
    rho = DensityMatrix.pure(psi)
    return max(abs(readout(joint, a)[0] - outcome_pdf(model, rho, a)) for a in outcomes)


def commutator_residual(meter: PointerWavepacket) -> float:
    """L2 size of ``([x, p] - i) psi`` with a central-difference momentum.

    Any finite grid realizes the canonical commutator only approximately; this
    is reported as a diagnostic (it scales as ``dx^2``).
    """
    psi, x, dx = meter.amplitudes, meter.x, meter.dx

    def p(f):
        out = np.zeros_like(f)
        out[1:-1] = -1j * (f[2:] - f[:-2]) / (2 * dx)
        return out

    r = (x * p(psi) - p(x * psi) - 1j * psi)[1:-1]
    return float(math.sqrt(np.sum(np.abs(r) ** 2) * dx))
