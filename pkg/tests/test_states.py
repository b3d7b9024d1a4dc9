import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qmeasure import errors
from qmeasure.randomness import rand_density, rand_hermitian, rand_state, substream
from qmeasure.states import (
    CompositeDims,
    DensityMatrix,
    StateVector,
    as_density,
    as_state,
    mix,
    partial_trace,
    projector_of,
    tensor_state,
    validate_density,
)

from conftest import assert_close


def test_state_vector_requires_unit_norm():
    with pytest.raises(errors.NotNormalized):
        StateVector(np.array([1.0, 1.0]))


def test_state_vector_normalized_constructor():
    psi = StateVector.normalized([1, 1])
    assert_close(psi.amplitudes, np.array([1, 1]) / np.sqrt(2))
    with pytest.raises(errors.NotNormalized):
        StateVector.normalized([0, 0])


def test_state_vector_is_immutable():
    psi = StateVector(np.array([1.0, 0.0]))
    with pytest.raises(ValueError):
        psi.amplitudes[0] = 0.0


def test_projector_of_superposition():
    p = projector_of(StateVector.normalized([0, 1, 1]))
    want = np.zeros((3, 3))
    want[1:, 1:] = 0.5
    assert_close(p.matrix, want)


@given(phase=st.floats(0, 2 * np.pi))
@settings(max_examples=30, deadline=None)
def test_projector_phase_invariant(phase):
    psi = rand_state(4, substream(5))
    rotated = np.exp(1j * phase) * psi
    assert_close(projector_of(rotated).matrix, projector_of(psi).matrix, atol=1e-12)


def test_density_matrix_validation_order():
    with pytest.raises(errors.NotHermitian):
        DensityMatrix(np.array([[0.5, 1.0], [0.0, 0.5]]))
    with pytest.raises(errors.NotPositive):
        DensityMatrix(np.diag([2.0, -1.0]))
    with pytest.raises(errors.TraceNotOne):
        DensityMatrix(np.diag([0.6, 0.6]))


def test_validate_density_passes_good_state():
    rho = validate_density(np.diag([0.25, 0.75]))
    assert isinstance(rho, DensityMatrix)


def test_projector_from_raw_amplitudes():
    rho = projector_of([0.6, 0.8])
    assert_close(rho.matrix, [[0.36, 0.48], [0.48, 0.64]])


def test_as_state_passthrough_and_coercion():
    psi = StateVector(np.array([1.0, 0.0]))
    assert as_state(psi) is psi
    coerced = as_state([0, 1j])
    assert_close(coerced.amplitudes, [0, 1j])


def test_as_density_passthrough():
    rho = DensityMatrix(np.eye(2) / 2)
    assert as_density(rho) is rho
    assert_close(as_density(np.eye(3) / 3).matrix, np.eye(3) / 3)


def test_mix_two_pure_states():
    up = projector_of([1, 0])
    down = projector_of([0, 1])
    rho = mix([0.36, 0.64], [up, down])
    assert_close(rho.matrix, np.diag([0.36, 0.64]))


def test_mix_accepts_raw_matrices():
    rho = mix([0.5, 0.5], [np.eye(2) / 2, np.diag([1.0, 0.0])])
    assert_close(rho.matrix, np.diag([0.75, 0.25]))


def test_mix_rejects_bad_weights():
    up = projector_of([1, 0])
    with pytest.raises(errors.BadWeights):
        mix([0.5, 0.6], [up, up])
    with pytest.raises(errors.BadWeights):
        mix([1.5, -0.5], [up, up])
    with pytest.raises(errors.BadWeights):
        mix([], [])
    with pytest.raises(errors.BadWeights):
        mix([0.5, 0.5], [up])


def test_mix_rejects_dimension_mismatch():
    with pytest.raises(errors.DimMismatch):
        mix([0.5, 0.5], [projector_of([1, 0]), projector_of([1, 0, 0])])


@given(w=st.floats(0.01, 0.99))
@settings(max_examples=30, deadline=None)
def test_mix_trace_is_one(w):
    rng = substream(23)
    rho = mix([w, 1 - w], [rand_density(3, rng), rand_density(3, rng)])
    assert abs(np.trace(rho.matrix) - 1) < 1e-12


def test_tensor_state_ordering():
    # system index is the slow factor
    sys = StateVector.normalized([1, 1])
    app = StateVector(np.array([1.0, 0.0]))
    joint = tensor_state(sys, app)
    assert_close(joint.amplitudes, np.array([1, 0, 1, 0]) / np.sqrt(2))


def test_partial_trace_bell_state():
    bell = projector_of(StateVector.normalized([1, 0, 0, 1]))
    dims = CompositeDims(2, 2)
    assert_close(partial_trace(bell, dims, "system").matrix, np.eye(2) / 2)
    assert_close(partial_trace(bell, dims, "apparatus").matrix, np.eye(2) / 2)


def test_partial_trace_product_state():
    sys = rand_state(3, substream(31))
    app = rand_state(2, substream(32))
    joint = projector_of(tensor_state(sys, app))
    rho_s = partial_trace(joint, CompositeDims(3, 2), "system")
    assert_close(rho_s.matrix, projector_of(sys).matrix, atol=1e-12)


@pytest.mark.parametrize("case", range(6))
def test_partial_trace_defining_property(case):
    # Tr(rho_S X) must equal Tr(rho (X (x) I)) for every system observable X
    rng = substream(37, case)
    ds, da = int(rng.integers(2, 4)), int(rng.integers(2, 4))
    rho = rand_density(ds * da, rng)
    reduced = partial_trace(rho, CompositeDims(ds, da), "system")
    for _ in range(4):
        x = rand_hermitian(ds, rng)
        lifted = np.kron(x, np.eye(da))
        assert abs(np.trace(reduced.matrix @ x) - np.trace(rho @ lifted)) < 1e-10


def test_partial_trace_rejects_wrong_dims():
    rho = rand_density(6, substream(41))
    with pytest.raises(errors.DimMismatch):
        partial_trace(rho, CompositeDims(2, 2), "system")


def test_partial_trace_rejects_unknown_factor():
    rho = rand_density(4, substream(43))
    with pytest.raises(errors.ValidationError):
        partial_trace(rho, CompositeDims(2, 2), "environment")


def test_composite_dims_total():
    assert CompositeDims(3, 4).total == 12
    with pytest.raises(errors.ValidationError):
        CompositeDims(0, 2)
