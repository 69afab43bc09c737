import itertools

import numpy as np
import pytest

from relstate import (
    DensityOperator,
    HilbertStructure,
    RawVector,
    StateVector,
    SubsystemEvent,
    apply_subsystem_unitary,
    embed,
    partial_scalar_product,
    partial_trace,
    tensor_product,
)
from relstate.errors import DegenerateTrace, InvalidState, NonUnitary, StructureMismatch
from relstate.random_states import random_mixed_state, random_projector, random_pure_state, random_unitary
from relstate.tensor_core import canonical_phase, expansion_coefficients

from conftest import D_H, S2, UP


# -- brute-force references ---------------------------------------------------


def loop_partial_trace(rho, dims, keep):
    """Sum rho[(i, n), (i', n)] over traced multi-indices, one entry at a time."""
    keep = sorted(keep)
    traced = [k for k in range(len(dims)) if k not in keep]
    kdims = [dims[k] for k in keep]
    tdims = [dims[k] for k in traced]
    dk = int(np.prod(kdims))
    out = np.zeros((dk, dk), dtype=complex)
    for a, ka in enumerate(itertools.product(*map(range, kdims))):
        for b, kb in enumerate(itertools.product(*map(range, kdims))):
            for t in itertools.product(*map(range, tdims)):
                row = [0] * len(dims)
                col = [0] * len(dims)
                for pos, k in enumerate(keep):
                    row[k], col[k] = ka[pos], kb[pos]
                for pos, k in enumerate(traced):
                    row[k] = col[k] = t[pos]
                out[a, b] += rho[np.ravel_multi_index(row, dims), np.ravel_multi_index(col, dims)]
    return out


def loop_kron3(a, b, c):
    da, db, dc = len(a), len(b), len(c)
    n = da * db * dc
    out = np.zeros((n, n), dtype=complex)
    for i, j, k in itertools.product(range(da), range(db), range(dc)):
        for i2, j2, k2 in itertools.product(range(da), range(db), range(dc)):
            out[(i * db + j) * dc + k, (i2 * db + j2) * dc + k2] = a[i, i2] * b[j, j2] * c[k, k2]
    return out


# -- HilbertStructure ---------------------------------------------------------


def test_structure_rejects_bad_dims():
    with pytest.raises(StructureMismatch):
        HilbertStructure(())
    with pytest.raises(StructureMismatch):
        HilbertStructure((2, 1))


def test_flat_index_round_trip():
    s = HilbertStructure((2, 3, 4))
    assert s.total_dim == 24
    for i in range(s.total_dim):
        assert s.flatten(s.unflatten(i)) == i
    # subsystem 0 is most significant
    assert s.flatten((1, 0, 0)) == 12
    assert s.flatten((0, 1, 0)) == 4
    assert s.unflatten(23) == (1, 2, 3)


def test_values_are_immutable():
    psi = StateVector.basis((2, 2), 0)
    with pytest.raises(ValueError):
        psi.amplitudes[0] = 2
    with pytest.raises(AttributeError):
        psi.structure = HilbertStructure((4,))


def test_validation_is_explicit():
    raw = StateVector(HilbertStructure((2,)), [1.0, 1.0])
    with pytest.raises(InvalidState):
        raw.validate()
    with pytest.raises(InvalidState):
        DensityOperator((2,), np.diag([0.5, 0.6])).validate()
    with pytest.raises(InvalidState):
        DensityOperator((2,), np.diag([1.5, -0.5])).validate()
    with pytest.raises(InvalidState):
        SubsystemEvent(0, np.diag([1.0, 0.5])).validate()


# -- tensor_product -----------------------------------------------------------


def test_tensor_product_basis():
    r = tensor_product(StateVector.basis(2, 0), StateVector.basis(2, 0))
    assert r.structure.dims == (2, 2)
    np.testing.assert_array_equal(r.amplitudes, [1, 0, 0, 0])


def test_tensor_product_distributes():
    plus = StateVector(HilbertStructure((2,)), S2 * np.array([1, 1]))
    r = tensor_product(plus, StateVector.basis(2, 1))
    np.testing.assert_allclose(r.amplitudes, [0, S2, 0, S2], atol=1e-15)


def test_tensor_product_elementwise(rng):
    a = random_pure_state((3,), rng)
    b = random_pure_state((2,), rng)
    r = tensor_product(a, b)
    assert isinstance(r, StateVector)
    for i in range(3):
        for j in range(2):
            assert r.amplitudes[i * 2 + j] == pytest.approx(a.amplitudes[i] * b.amplitudes[j], abs=1e-15)
    assert r.norm == pytest.approx(1.0, abs=1e-12)


def test_tensor_product_of_raw_vectors_stays_raw():
    r = tensor_product(RawVector(2, [2, 0]), StateVector.basis(2, 1))
    assert not isinstance(r, StateVector)
    assert r.norm == pytest.approx(2.0)


# -- partial_trace ------------------------------------------------------------


def test_partial_trace_product_state(rng):
    a = random_pure_state((2,), rng)
    b = random_pure_state((3,), rng)
    rho = tensor_product(a, b).density()
    np.testing.assert_allclose(partial_trace(rho, [0]).matrix, a.density().matrix, atol=1e-12)
    np.testing.assert_allclose(partial_trace(rho, [1]).matrix, b.density().matrix, atol=1e-12)


def test_partial_trace_bell(bell_state):
    expected = loop_partial_trace(bell_state.density().matrix, (2, 2), [0])
    np.testing.assert_allclose(expected, np.diag([0.5, 0.5]), atol=1e-15)
    np.testing.assert_allclose(partial_trace(bell_state, [0]).matrix, expected, atol=1e-15)
    np.testing.assert_allclose(partial_trace(bell_state.density(), [0]).matrix, expected, atol=1e-15)


@pytest.mark.parametrize("dims,keep", [
    ((2, 3), [0]), ((2, 3), [1]), ((2, 2, 3), [0, 2]), ((2, 3, 2), [1]), ((3, 2, 2), [2, 0]),
])
def test_partial_trace_matches_loops(rng, dims, keep):
    rho = random_mixed_state(dims, rng)
    expected = loop_partial_trace(rho.matrix, dims, keep)
    got = partial_trace(rho, keep)
    assert got.structure.dims == tuple(dims[k] for k in sorted(keep))
    np.testing.assert_allclose(got.matrix, expected, atol=1e-13)


def test_partial_trace_composes(rng):
    rho = random_mixed_state((2, 2, 2), rng)
    step = partial_trace(partial_trace(rho, [0, 1]), [0])
    np.testing.assert_allclose(step.matrix, partial_trace(rho, [0]).matrix, atol=1e-13)


def test_partial_trace_degenerate(bell_state):
    with pytest.raises(DegenerateTrace):
        partial_trace(bell_state, [])
    with pytest.raises(DegenerateTrace):
        partial_trace(bell_state, [0, 1])
    with pytest.raises(StructureMismatch):
        partial_trace(bell_state, [2])


# -- partial_scalar_product ---------------------------------------------------


def test_psp_extracts_factor(rng):
    a = random_pure_state((3,), rng)
    psi = tensor_product(a, StateVector.basis(2, 0))
    r = partial_scalar_product(RawVector(2, [1, 0]), psi, 1)
    assert not isinstance(r, StateVector)
    np.testing.assert_allclose(r.amplitudes, a.amplitudes, atol=1e-15)


def test_psp_which_way(which_way_state):
    r = partial_scalar_product(RawVector(2, D_H), which_way_state, 1)
    np.testing.assert_allclose(r.amplitudes, S2 * UP, atol=1e-15)


def test_psp_double_loop(rng):
    phi = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    psi = random_pure_state((2, 3), rng)
    r = partial_scalar_product(RawVector(3, phi), psi, 1)
    for k in range(2):
        expected = sum(np.conj(phi[l]) * psi.amplitudes[k * 3 + l] for l in range(3))
        assert r.amplitudes[k] == pytest.approx(expected, abs=1e-14)


def test_psp_on_first_factor(rng):
    phi = random_pure_state((2,), rng)
    psi = random_pure_state((2, 3, 2), rng)
    r = partial_scalar_product(phi, psi, 0)
    t = psi.amplitudes.reshape(2, 3, 2)
    assert r.structure.dims == (3, 2)
    np.testing.assert_allclose(r.amplitudes, (np.conj(phi.amplitudes[0]) * t[0] + np.conj(phi.amplitudes[1]) * t[1]).ravel(), atol=1e-14)


def test_psp_dimension_mismatch(bell_state):
    with pytest.raises(StructureMismatch):
        partial_scalar_product(RawVector(3, [1, 0, 0]), bell_state, 1)


def test_expansion_in_identity_bases_matches_psp(rng):
    psi = random_pure_state((3, 2), rng)
    phi = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    coeffs = expansion_coefficients(phi, psi.amplitudes.reshape(3, 2), np.eye(3), np.eye(2))
    np.testing.assert_allclose(coeffs, partial_scalar_product(RawVector(2, phi), psi, 1).amplitudes, atol=1e-14)


# -- embed ----------------------------------------------------------------------


def test_embed_identity():
    s = HilbertStructure((2, 3, 2))
    np.testing.assert_array_equal(embed(SubsystemEvent.identity(1, 3), s), np.eye(12))


def test_embed_pattern():
    m = embed(SubsystemEvent(1, np.diag([1, 0])), HilbertStructure((2, 2)))
    np.testing.assert_array_equal(m, np.diag([1, 0, 1, 0]))


def test_embed_matches_triple_loop(rng):
    q = random_projector(3, rng, rank=2)
    s = HilbertStructure((2, 3, 2))
    got = embed(SubsystemEvent(1, q), s)
    np.testing.assert_allclose(got, loop_kron3(np.eye(2), q, np.eye(2)), atol=1e-15)
    np.testing.assert_allclose(got @ got, got, atol=1e-12)


def test_embed_mismatch():
    with pytest.raises(StructureMismatch):
        embed(SubsystemEvent(1, np.eye(3)), HilbertStructure((2, 2)))
    with pytest.raises(StructureMismatch):
        embed(SubsystemEvent(2, np.eye(2)), HilbertStructure((2, 2)))


# -- apply_subsystem_unitary ----------------------------------------------------


def test_unitary_identity(rng):
    psi = random_pure_state((2, 3), rng)
    out = apply_subsystem_unitary(psi, np.eye(3), 1)
    np.testing.assert_allclose(out.amplitudes, psi.amplitudes)


def test_unitary_hadamard():
    h = S2 * np.array([[1, 1], [1, -1]])
    out = apply_subsystem_unitary(StateVector.basis(2, 0), h, 0)
    np.testing.assert_allclose(out.amplitudes, [S2, S2], atol=1e-15)


def test_unitary_leaves_other_reduced_state(rng):
    psi = random_pure_state((2, 3, 2), rng)
    u = random_unitary(3, rng)
    out = apply_subsystem_unitary(psi, u, 1)
    assert out.norm == pytest.approx(1.0, abs=1e-12)
    np.testing.assert_allclose(
        partial_trace(out, [0, 2]).matrix, partial_trace(psi, [0, 2]).matrix, atol=1e-13
    )
    # against the full-space Kronecker action
    full = np.kron(np.kron(np.eye(2), u), np.eye(2))
    np.testing.assert_allclose(out.amplitudes, full @ psi.amplitudes, atol=1e-13)


def test_non_unitary_rejected(rng):
    psi = random_pure_state((2, 2), rng)
    with pytest.raises(NonUnitary):
        apply_subsystem_unitary(psi, np.array([[1, 1], [0, 1]]), 0)


def test_canonical_phase():
    v = np.exp(1j * 0.7) * np.array([0.6, 0.8j])
    c = canonical_phase(v)
    assert c[1].imag == pytest.approx(0, abs=1e-15)
    assert c[1].real > 0
