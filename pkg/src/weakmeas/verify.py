"""Invariant checks run by ``weakmeas verify`` and by the test suite."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .correlation import correlation_analytic, correlation_numeric
from .engine import (
    DensityMatrix,
    MeasurementModel,
    completeness_defect,
    default_grid,
    outcome_moments,
    outcome_moments_quadrature,
    posterior,
    total_channel,
    total_channel_quadrature,
)
from .infonoise import apply_noise, noise_free_state, reconstruct_initial
from .meter import compare_with_kraus

TOLERANCES = {
    "completeness": 1e-8,
    "moments": 1e-8,
    "total_channel": 1e-8,
    "reconstruction": 1e-8,
    "factorization": 1e-10,
    "posterior_purity": 1e-9,
    "correlation": 1e-7,
    "meter_trace_distance": 1e-6,
    "meter_pdf": 1e-6,
}


@dataclass(frozen=True)
class Check:
    name: str
    residual: float
    tolerance: float
    note: str = ""

    @property
    def passed(self) -> bool:
        return bool(self.residual <= self.tolerance)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        tail = f"  ({self.note})" if self.note else ""
        return f"{status}  {self.name:<22} residual={self.residual:.3e}  tol={self.tolerance:.0e}{tail}"


def probe_outcomes(model: MeasurementModel, n: int = 21) -> np.ndarray:
    ev, d = model.eigenvalues, model.resolution
    return np.linspace(ev[0] - 3 * d, ev[-1] + 3 * d, n)


def factorization_residual(model: MeasurementModel, rho: DensityMatrix, outcomes=None) -> float:
    """Largest entrywise gap between noise-after-information and the direct posterior."""
    outcomes = probe_outcomes(model) if outcomes is None else outcomes
    worst = 0.0
    for a in outcomes:
        split = apply_noise(model, noise_free_state(model, rho, a)).matrix
        worst = max(worst, float(np.max(np.abs(split - posterior(model, rho, a).matrix))))
    return worst


def posterior_purity_residual(model: MeasurementModel, rho: DensityMatrix, outcomes=None) -> float:
    outcomes = probe_outcomes(model) if outcomes is None else outcomes
    return max(abs(posterior(model, rho, a).purity() - 1.0) for a in outcomes)


def run_checks(model: MeasurementModel, rho: DensityMatrix, b, meter: bool = True) -> list[Check]:
    grid = default_grid(model)
    checks = [Check("completeness", completeness_defect(model, grid), TOLERANCES["completeness"])]

    mean, m2 = outcome_moments(model, rho)
    mean_q, m2_q = outcome_moments_quadrature(model, rho, grid)
    checks.append(Check("moments", max(abs(mean - mean_q), abs(m2 - m2_q)), TOLERANCES["moments"]))

    tot = np.linalg.norm(total_channel_quadrature(model, rho, grid) - total_channel(model, rho).matrix)
    checks.append(Check("total_channel", float(tot), TOLERANCES["total_channel"]))

    rec = np.linalg.norm(reconstruct_initial(model, rho, grid) - rho.matrix)
    checks.append(Check("reconstruction", float(rec), TOLERANCES["reconstruction"]))

    checks.append(Check("factorization", factorization_residual(model, rho), TOLERANCES["factorization"]))

    pure = abs(rho.purity() - 1.0) < 1e-12
    if pure:
        checks.append(Check("posterior_purity", posterior_purity_residual(model, rho),
                            TOLERANCES["posterior_purity"]))

    c = abs(correlation_numeric(model, rho, b, grid) - correlation_analytic(model, rho, b))
    checks.append(Check("correlation", c, TOLERANCES["correlation"]))

    if meter:
        w, v = np.linalg.eigh(rho.matrix)
        note = "" if pure else "principal eigenvector of a mixed state"
        cmp = compare_with_kraus(v[:, -1], model)
        checks.append(Check("meter_trace_distance", cmp.max_trace_distance,
                            TOLERANCES["meter_trace_distance"], note))
        checks.append(Check("meter_pdf", cmp.max_pdf_discrepancy, TOLERANCES["meter_pdf"], note))
    return checks
