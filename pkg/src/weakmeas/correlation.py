"""Correlation between the squared readout and a second observable.

``C(a^2; <B>)`` is the covariance, over the readout distribution, of ``a^2``
with the post-measurement expectation of ``B``. It is computed two ways: by
quadrature of the defining integral, and from the closed-form operator
expression evaluated on the outcome-averaged state.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .engine import (
    MeasurementModel,
    OutcomeGrid,
    _as_density,
    default_grid,
    outcome_pdf,
    total_channel,
    weighted_branches,
)
from .errors import DimensionMismatch
from .infonoise import _log_midpoint_weights
from .linalg import HermitianObservable
from .states import SX, SZ

FLAG_TOL = 1e-7


@dataclass(frozen=True)
class CorrelationReport:
    numeric_value: float
    analytic_value: float
    resolution: float
    observable: str = ""
    other: str = ""

    @property
    def discrepancy(self) -> float:
        return abs(self.numeric_value - self.analytic_value)

    @property
    def flagged(self) -> bool:
        return self.discrepancy > FLAG_TOL

    def as_dict(self) -> dict:
        return {
            "numeric": self.numeric_value,
            "analytic": self.analytic_value,
            "discrepancy": self.discrepancy,
            "flagged": self.flagged,
            "delta": self.resolution,
            "observable": self.observable,
            "B": self.other,
        }


def _b_matrix(b) -> np.ndarray:
    return b.matrix if isinstance(b, HermitianObservable) else HermitianObservable(b).matrix


def correlation_numeric(model: MeasurementModel, rho_i, b, grid: OutcomeGrid | None = None) -> float:
    """Quadrature of ``int p(a) <B>_f(a) a^2 da - <B>_f (delta^2 + <A^2>_f)``.

    The outcome-averaged state is also obtained by quadrature here, so this
    path shares nothing with :func:`correlation_analytic` beyond the model.
    """
    grid = default_grid(model) if grid is None else grid
    b_e = model.to_eigenbasis(_b_matrix(b))
    a = model.eigenvalues
    branches = weighted_branches(model, rho_i, grid.nodes)  # p(a) rho_f(a)
    # Tr{rho B} = sum_ij rho_ij B_ji
    b_per_node = np.einsum("nij,ji->n", branches, b_e).real
    first = float(grid.integrate(b_per_node * grid.nodes ** 2))
    rho_tot = grid.integrate(branches)
    b_tot = float(np.einsum("ij,ji->", rho_tot, b_e).real)
    a2_tot = float(np.einsum("ii,i->", rho_tot, a ** 2).real)
    return first - b_tot * (model.resolution ** 2 + a2_tot)


def correlation_analytic(model: MeasurementModel, rho_i, b) -> float:
    """``(1/4) <A^2 B + 2 A B A + B A^2>_f - <A^2>_f <B>_f`` on the averaged state."""
    bm = _b_matrix(b)
    am = model.observable.matrix
    rho_f = total_channel(model, rho_i)
    a2 = am @ am
    sym = a2 @ bm + 2 * am @ bm @ am + bm @ a2
    return 0.25 * rho_f.expect(sym) - rho_f.expect(a2) * rho_f.expect(bm)


def correlation_report(model: MeasurementModel, rho_i, b, grid: OutcomeGrid | None = None,
                       observable: str = "", other: str = "") -> CorrelationReport:
    return CorrelationReport(
        numeric_value=correlation_numeric(model, rho_i, b, grid),
        analytic_value=correlation_analytic(model, rho_i, b),
        resolution=model.resolution,
        observable=observable,
        other=other,
    )


def spin_correlation_identity(rho_i, delta: float, noise_free: bool = False,
                              grid: OutcomeGrid | None = None) -> tuple[float, float]:
    """Both sides of the spin-1/2 ``s_z``-readout / ``s_x`` correlation identity.

    Returns ``(lhs, rhs)`` with
    ``lhs = avg(a^2 <s_x>) - avg(a^2) avg(<s_x>)`` and
    ``rhs = -(1/4) avg(<s_x>)``, averages taken over ``p(a)`` by quadrature.

    With ``noise_free=True`` the post-measurement states are replaced by the
    quasi-states ``rho_m(a)``; the identity still holds but ``avg(<s_x>)`` is
    then the undamped initial value.
    """
    rho_i = _as_density(rho_i)
    if rho_i.dim != 2:
        raise DimensionMismatch("the spin identity needs a two-level state")
    model = MeasurementModel(HermitianObservable(SZ), delta)
    grid = default_grid(model) if grid is None else grid
    x = grid.nodes
    sx_e = model.to_eigenbasis(SX)
    if noise_free:
        rho_e = model.to_eigenbasis(rho_i.matrix)
        branches = np.exp(_log_midpoint_weights(model, x)) * rho_e[None]
    else:
        branches = weighted_branches(model, rho_i, x)
    p_sx = np.einsum("nij,ji->n", branches, sx_e).real  # p(a) <s_x>(a)
    p = outcome_pdf(model, rho_i, x)
    avg_sx = float(grid.integrate(p_sx))
    avg_a2 = float(grid.integrate(p * x ** 2))
    lhs = float(grid.integrate(p_sx * x ** 2)) - avg_a2 * avg_sx
    return lhs, -0.25 * avg_sx
