import math

import numpy as np
import pytest

from conftest import spin_model
from weakmeas import DensityMatrix, HermitianObservable, MeasurementModel, posterior, trace_distance
from weakmeas.engine import decoherence_factor
from weakmeas.errors import GridOverflow
from weakmeas.meter import (
    PointerWavepacket,
    commutator_residual,
    compare_with_kraus,
    entangle,
    pointer_for,
    readout,
    snapped_pdf_error,
)
from weakmeas.states import PLUS_X, PLUS_Z, SX, projector, random_hermitian, random_pure_vector


def test_pointer_normalized():
    meter = pointer_for(spin_model(0.5))
    assert meter.norm() == pytest.approx(1.0, abs=1e-10)
    assert meter.dx == pytest.approx(0.5 / 200)
    var = np.sum(meter.x ** 2 * np.abs(meter.amplitudes) ** 2) * meter.dx
    assert var == pytest.approx(0.25, rel=1e-10)


def test_entangle_eigenstate_is_product():
    model = spin_model(0.5)
    joint = entangle(PLUS_Z, model.observable, pointer_for(model))
    # eigenvalue order is ascending: column 0 is -1/2, column 1 is +1/2
    assert np.max(np.abs(joint.amplitudes[:, 0])) < 1e-15
    density = np.abs(joint.amplitudes[:, 1]) ** 2
    assert joint.x[np.argmax(density)] == pytest.approx(0.5, abs=joint.dx)


def test_entangle_plus_x_two_branches():
    model = spin_model(0.5)
    joint = entangle(PLUS_X, model.observable, pointer_for(model))
    w = np.sum(np.abs(joint.amplitudes) ** 2, axis=0) * joint.dx
    np.testing.assert_allclose(w, [0.5, 0.5], atol=1e-12)
    centers = [np.sum(joint.x * np.abs(joint.amplitudes[:, k]) ** 2) * joint.dx / w[k] for k in range(2)]
    np.testing.assert_allclose(centers, [-0.5, 0.5], atol=1e-12)


def test_branch_overlap_is_decoherence_factor():
    model = spin_model(0.5)
    meter = pointer_for(model)
    overlap = np.sum(meter.shifted(0.5).conj() * meter.shifted(-0.5)).real * meter.dx
    assert overlap == pytest.approx(decoherence_factor(model, 0.5, -0.5), abs=1e-12)
    assert overlap == pytest.approx(math.exp(-0.5), abs=1e-12)


def test_entangle_preserves_norm(rng):
    for dim in (2, 3, 5):
        obs = HermitianObservable(random_hermitian(dim, rng))
        model = MeasurementModel(obs, 0.3)
        joint = entangle(random_pure_vector(dim, rng), obs, pointer_for(model))
        assert joint.norm() == pytest.approx(1.0, abs=1e-10)
        assert np.sum(joint.marginal()) * joint.dx == pytest.approx(1.0, abs=1e-8)


def test_entangle_grid_overflow():
    model = spin_model(0.5)
    narrow = PointerWavepacket.gaussian(0.5, 1.0, 0.005)
    with pytest.raises(GridOverflow):
        entangle(PLUS_X, model.observable, narrow)


def test_readout_center_plus_x():
    model = spin_model(0.5)
    joint = entangle(PLUS_X, model.observable, PointerWavepacket.gaussian(0.5, 6.0, 1e-3))
    pdf, vec = readout(joint, 0.0)
    assert trace_distance(projector(vec), projector(PLUS_X)) < 1e-6
    assert projector(vec)[0, 1].real * 2 == pytest.approx(
        posterior(model, DensityMatrix.pure(PLUS_X), 0.0).expect(SX) * 2, abs=1e-12)


def test_readout_eigenstate_everywhere():
    model = spin_model(0.3)
    joint = entangle(PLUS_Z, model.observable, pointer_for(model))
    for a in (-1.0, 0.0, 0.5, 2.0):
        _, vec = readout(joint, a)
        assert abs(abs(vec[0]) - 1) < 1e-14


def test_readout_outside_grid():
    model = spin_model(0.3)
    joint = entangle(PLUS_X, model.observable, pointer_for(model))
    with pytest.raises(ValueError):
        readout(joint, 100.0)


def test_compare_spin():
    cmp = compare_with_kraus(PLUS_X, spin_model(0.5), dx=1e-3)
    assert len(cmp.outcomes) == 41
    assert cmp.max_trace_distance < 1e-6
    assert cmp.max_pdf_discrepancy < 1e-6


def test_compare_eigenstate_exact():
    cmp = compare_with_kraus(PLUS_Z, spin_model(0.5))
    assert cmp.max_trace_distance < 1e-13


def test_compare_random_dim4(rng):
    obs = HermitianObservable(random_hermitian(4, rng))
    cmp = compare_with_kraus(random_pure_vector(4, rng), MeasurementModel(obs, 0.4))
    assert cmp.max_trace_distance < 1e-6
    assert cmp.max_pdf_discrepancy < 1e-6


def test_compare_rejects_coarse_grid():
    with pytest.raises(ValueError):
        compare_with_kraus(PLUS_X, spin_model(0.5), dx=0.01)


@pytest.mark.parametrize("delta", [0.2, 0.5])
def test_snap_error_first_order(delta):
    """Snapping to the nearest node costs p' * offset; offsets of dx/3 then dx/6 halve the error."""
    model = spin_model(delta)
    dx = delta / 100
    probes = dx * np.round(np.linspace(-0.5 - 2 * delta, 0.5 + 2 * delta, 41) / dx) + dx / 3
    coarse = snapped_pdf_error(PLUS_X, model, dx, probes)
    fine = snapped_pdf_error(PLUS_X, model, dx / 2, probes)
    assert coarse / fine == pytest.approx(2.0, rel=0.01)
    assert fine < coarse


def test_commutator_residual_second_order():
    model = spin_model(0.5)
    r1 = commutator_residual(pointer_for(model, dx=0.01))
    r2 = commutator_residual(pointer_for(model, dx=0.005))
    assert r1 / r2 == pytest.approx(4.0, rel=0.01)
