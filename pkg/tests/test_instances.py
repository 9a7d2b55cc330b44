"""Instance constructions: the worked example, random families, the shift."""

import numpy as np
import pytest

import oracle
from seqmeas import criteria, instances
from seqmeas.exceptions import (
    DimensionMismatchError,
    NotUnitaryError,
    RankOutOfRangeError,
)
from seqmeas.linalg import Subspace, is_projector, is_unitary
from seqmeas.measurement import validate_pair


@pytest.mark.parametrize("theta", [0.0, 0.25, np.pi / 4, 1.3, np.pi / 2])
def test_example_matches_oracle_matrices(theta):
    pair = instances.example_pair_theta(theta)
    p1, u1, p2, u2 = oracle.rotation_pair_matrices(theta)
    assert np.linalg.norm(pair.a.projector - p1) < 1e-15
    assert np.linalg.norm(pair.a.unitary - u1) < 1e-15
    assert np.linalg.norm(pair.b.projector - p2) < 1e-15
    assert np.linalg.norm(pair.b.unitary - u2) < 1e-15
    validate_pair(pair)


def test_example_pair_validates_block():
    with pytest.raises(DimensionMismatchError):
        instances.example_pair(np.eye(2, dtype=complex))
    with pytest.raises(NotUnitaryError):
        instances.example_pair(2.0 * np.eye(3, dtype=complex))


def test_example_pair_general_block():
    u3 = instances.random_unitary(3, seed=77)
    pair = instances.example_pair(u3)
    validate_pair(pair)
    assert np.linalg.norm(pair.a.unitary[:3, :3] - u3) < 1e-15
    assert abs(pair.a.unitary[3, 3] - 1.0) < 1e-15
    assert criteria.adjacent_repeatability(pair.a).holds
    assert criteria.aba_repeatability(pair).holds


@pytest.mark.parametrize("dim", [1, 3, 6])
def test_random_unitary_is_unitary_and_seeded(dim):
    u1 = instances.random_unitary(dim, seed=4)
    u2 = instances.random_unitary(dim, seed=4)
    u3 = instances.random_unitary(dim, seed=5)
    assert is_unitary(u1)
    assert np.array_equal(u1, u2)
    if dim > 1:
        assert np.linalg.norm(u1 - u3) > 1e-3


@pytest.mark.parametrize("dim,rank", [(4, 0), (4, 2), (4, 4)])
def test_random_projector_rank(dim, rank):
    p = instances.random_projector(dim, rank, seed=6)
    assert is_projector(p)
    assert abs(np.trace(p).real - rank) < 1e-9


def test_random_projector_rejects_bad_rank():
    with pytest.raises(RankOutOfRangeError):
        instances.random_projector(3, 4, seed=0)
    with pytest.raises(RankOutOfRangeError):
        instances.random_projector(3, -1, seed=0)


def test_random_unitary_preserving_subspace():
    p = instances.random_projector(5, 2, seed=10)
    sub = Subspace.from_projector(p)
    u = instances.random_unitary_preserving(sub, seed=11)
    assert is_unitary(u)
    away = np.eye(5, dtype=complex) - p
    assert np.linalg.norm(away @ u @ p) < 1e-12
    assert np.linalg.norm(p @ u @ away) < 1e-12


@pytest.mark.parametrize("dims", [(1, 1, 1, 0), (2, 1, 1, 1), (2, 2, 0, 1), (3, 0, 2, 1)])
def test_random_aba_pair_satisfies_three_conditions(dims, seed=21):
    pair = instances.random_aba_pair(dims, seed=seed)
    validate_pair(pair)
    assert criteria.adjacent_repeatability(pair.a).residual < 1e-12
    assert criteria.adjacent_repeatability(pair.b).residual < 1e-12
    assert criteria.aba_repeatability(pair).residual < 1e-12


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_random_aba_pair_breaks_bab_generically(seed):
    pair = instances.random_aba_pair((2, 1, 1, 1), seed=seed)
    assert criteria.bab_repeatability(pair).residual > 1e-4
    assert criteria.order_effect_magnitude(pair) > 1e-6


@pytest.mark.parametrize("dims", [(1, 1, 1, 0), (2, 1, 1, 1), (1, 2, 2, 1)])
def test_random_fully_repeatable_pair(dims):
    pair = instances.random_fully_repeatable_pair(dims, seed=13)
    validate_pair(pair)
    for check in (
        criteria.adjacent_repeatability(pair.a),
        criteria.adjacent_repeatability(pair.b),
        criteria.aba_repeatability(pair),
        criteria.bab_repeatability(pair),
    ):
        assert check.residual < 1e-12
    assert criteria.order_effect_magnitude(pair) < 1e-12


def test_random_pair_dims_validation():
    with pytest.raises(DimensionMismatchError):
        instances.random_aba_pair((0, 1, 1, 1), seed=0)
    with pytest.raises(DimensionMismatchError):
        instances.random_fully_repeatable_pair((1, -1, 1, 1), seed=0)


def test_truncated_shift_matches_oracle():
    inst = instances.truncated_shift(0.5, 6)
    m_ref, e_ref = oracle.truncated_shift_matrices(0.5, 6)
    assert np.array_equal(inst.shift, m_ref)
    assert np.array_equal(inst.effect, e_ref)


def test_truncated_shift_action_on_basis():
    inst = instances.truncated_shift(0.3 + 0.4j, 5)
    m = inst.shift
    e1 = np.eye(5, dtype=complex)[:, 0]
    assert np.linalg.norm(m @ e1 - (0.3 + 0.4j) * np.eye(5, dtype=complex)[:, 1]) < 1e-15
    for k in range(1, 4):
        ek = np.eye(5, dtype=complex)[:, k]
        assert np.linalg.norm(m @ ek - np.eye(5, dtype=complex)[:, k + 1]) < 1e-15
    assert np.linalg.norm(m @ np.eye(5, dtype=complex)[:, 4]) == 0.0


def test_truncated_shift_effect_spectrum():
    inst = instances.truncated_shift(0.5, 6)
    diag = np.real(np.diag(inst.effect))
    assert np.allclose(diag, [0.25, 1.0, 1.0, 1.0, 1.0, 0.0], atol=1e-15)
    assert not is_projector(inst.effect)


def test_truncated_shift_absorption_residuals():
    inst = instances.truncated_shift(0.5, 6)
    assert instances.absorption_residual(inst) == 1.0
    assert instances.interior_absorption_residual(inst) == 0.0
    # the residual does not depend on the amplitude
    for a in (0.0, 0.25, 1.0, 0.3 + 0.4j):
        other = instances.truncated_shift(a, 6)
        assert instances.absorption_residual(other) == 1.0
        assert instances.interior_absorption_residual(other) == 0.0


@pytest.mark.parametrize("a", [0.0, 1.0, 1j])
def test_truncated_shift_boundary_amplitudes_give_projectors(a):
    inst = instances.truncated_shift(a, 6)
    assert is_projector(inst.effect)


def test_truncated_shift_size_validation():
    with pytest.raises(DimensionMismatchError):
        instances.truncated_shift(0.5, 2)


def test_shift_json_shape():
    inst = instances.truncated_shift(0.5, 4)
    data = instances.shift_to_json(inst)
    assert data["amplitude"] == [0.5, 0.0]
    assert data["size"] == 4
    assert len(data["M"]) == 16 and len(data["E"]) == 16
