"""Closed forms for an ``s_z`` readout on the spin-1/2 state ``|+X>``.

These are written out directly and do not call the generic engine, so that
agreement between the two is a genuine cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class SpinScenario:
    delta: float
    outcome: float

    def __post_init__(self):
        if not self.delta > 0:
            raise ValueError("delta must be positive")

    @property
    def x(self) -> float:
        """The recurring argument ``s / (2 delta^2)``."""
        return self.outcome / (2 * self.delta ** 2)


def _log_cosh(x):
    x = np.abs(x)
    return x + np.log1p(np.exp(-2 * x)) - math.log(2)


def spin_pdf(s: SpinScenario) -> float:
    """``(2 pi d^2)^(-1/2) exp(-(s^2 + 1/4) / (2 d^2)) cosh(s / (2 d^2))``."""
    d2 = s.delta ** 2
    log_p = (-0.5 * math.log(2 * math.pi * d2)
             - (s.outcome ** 2 + 0.25) / (2 * d2) + float(_log_cosh(s.x)))
    return math.exp(log_p)


def spin_noise_free_expectations(s: SpinScenario) -> tuple[float, float, float]:
    """``(<s_x>, <s_y>, <s_z>)`` on the noise-free quasi-state."""
    x = s.x
    # exp(1/(8 d^2)) / (2 cosh x), the sech form avoids sqrt(1 - tanh^2) cancellation
    sx = 0.5 * math.exp(1 / (8 * s.delta ** 2) - float(_log_cosh(x)))
    return sx, 0.0, 0.5 * math.tanh(x)


def spin_final_expectations(s: SpinScenario) -> tuple[float, float, float]:
    """``(<s_x>, <s_y>, <s_z>)`` after the full measurement; always on the radius-1/2 circle."""
    x = s.x
    return 0.5 * math.exp(-float(_log_cosh(x))), 0.0, 0.5 * math.tanh(x)


def spin_purity_at_zero(delta: float) -> float:
    """Purity of the quasi-state after readout 0: ``1/2 + exp(1/(4 d^2))/2``."""
    if not delta > 0:
        raise ValueError("delta must be positive")
    return 0.5 + 0.5 * math.exp(1 / (4 * delta ** 2))


def ellipse_semi_axes(delta: float) -> tuple[float, float]:
    """Semi-axes (x, z) of the noise-free expectation locus."""
    return 0.5 * math.exp(1 / (8 * delta ** 2)), 0.5


def figure1_outcomes(delta: float, n: int) -> np.ndarray:
    """``n`` outcomes spaced evenly in ``tanh(s / (2 d^2))`` over the open interval (-1, 1)."""
    k = np.arange(1, n + 1)
    t = (2 * k - (n + 1)) / (n + 1)
    return 2 * delta ** 2 * np.arctanh(t)


def count_local_maxima(values) -> int:
    """Number of ``+ -> -`` sign changes of the first difference; flat steps are ignored."""
    signs = np.sign(np.diff(np.asarray(values, dtype=float)))
    signs = signs[signs != 0]
    return int(np.sum((signs[:-1] > 0) & (signs[1:] < 0)))
