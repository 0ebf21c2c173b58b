import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from einpinch.berger import (
    BergerData,
    FrameRotation,
    berger_blocks,
    berger_to_tensor,
    feasibility_violations,
    find_berger_frame,
    frame_from_pair,
    induced_rotations,
    random_rotation,
    rotate_tensor,
    verify_berger_properties,
)
from einpinch.curvature import (
    CurvatureTensor4,
    blocks_to_profile,
    blocks_to_tensor,
    min_max_sectional,
    model_space,
    random_einstein_blocks,
    tensor_sectional,
    tensor_to_blocks,
)
from einpinch.errors import DomainError, NotEinsteinError
from einpinch.search import sample_berger_data

seeds = st.integers(0, 2**32 - 1)


def test_frame_rotation_validation():
    FrameRotation(np.eye(4))
    with pytest.raises(DomainError):
        FrameRotation(np.diag([1.0, 1.0, 1.0, -1.0]))
    with pytest.raises(DomainError):
        FrameRotation(2 * np.eye(4))


def test_rotation_examples(rng):
    s4 = model_space("S4")
    assert np.allclose(rotate_tensor(s4, np.eye(4)).comp, s4.comp)
    assert np.allclose(rotate_tensor(s4, random_rotation(rng)).comp, s4.comp, atol=1e-14)
    cp2 = model_space("CP2")
    rotated = rotate_tensor(cp2, random_rotation(rng))
    assert min_max_sectional(tensor_to_blocks(rotated)) == pytest.approx((1 / 6, 2 / 3))


def test_rotation_matches_direct_evaluation(rng):
    t = blocks_to_tensor(random_einstein_blocks(rng))
    Q = random_rotation(rng).Q
    r = rotate_tensor(t, Q)
    e = np.eye(4)
    for i, j in ((0, 1), (0, 2), (1, 3)):
        assert tensor_sectional(r, e[i], e[j])[0] == pytest.approx(tensor_sectional(t, Q[:, i], Q[:, j])[0])


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_frame_from_pair_inverts_induced_action(seed):
    rng = np.random.default_rng(seed)
    from scipy.spatial.transform import Rotation
    U = Rotation.random(random_state=rng).as_matrix()
    V = Rotation.random(random_state=rng).as_matrix()
    Q = frame_from_pair(U, V)
    assert np.abs(Q.T @ Q - np.eye(4)).max() < 1e-12
    assert np.linalg.det(Q) == pytest.approx(1.0)
    Sp, Sm = induced_rotations(Q)
    np.testing.assert_allclose(Sp, U, atol=1e-10)
    np.testing.assert_allclose(Sm, V, atol=1e-10)


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_induced_action_is_homomorphism(seed):
    rng = np.random.default_rng(seed)
    P, Q = random_rotation(rng).Q, random_rotation(rng).Q
    sp_pq, sm_pq = induced_rotations(P @ Q)
    sp_p, sm_p = induced_rotations(P)
    sp_q, sm_q = induced_rotations(Q)
    np.testing.assert_allclose(sp_pq, sp_p @ sp_q, atol=1e-12)
    np.testing.assert_allclose(sm_pq, sm_p @ sm_q, atol=1e-12)
    assert np.linalg.det(sp_p) == pytest.approx(1.0)


def test_s4_frame_is_degenerate():
    found = find_berger_frame(model_space("S4"))
    assert found.degenerate
    np.testing.assert_allclose(found.data.as_tuple(), (1 / 3, 1 / 3, 1 / 3, 0, 0), atol=1e-12)


def test_cp2_frame(rng):
    t = rotate_tensor(model_space("CP2"), random_rotation(rng))
    found = find_berger_frame(t)
    np.testing.assert_allclose(found.data.as_tuple(), (1 / 6, 1 / 6, 2 / 3, 1 / 6, 1 / 6), atol=1e-12)
    assert verify_berger_properties(t, found.frame).ok


def test_cp2_standard_frame_is_not_adapted():
    check = verify_berger_properties(model_space("CP2"), np.eye(4))
    assert not check.min_plane and not check.max_plane
    assert check.residuals["min_plane"] > 1e-3


def test_cp2_random_frames_are_not_adapted(rng):
    t = model_space("CP2")
    for _ in range(20):
        check = verify_berger_properties(t, random_rotation(rng))
        assert not check.ok
        assert max(check.residuals.values()) > 1e-3


def test_s2xs2_matches_berger_tensor():
    t = model_space("S2xS2")
    found = find_berger_frame(t)
    assert found.degenerate
    d = BergerData(0.0, 0.0, 1.0, 0.0, 0.0)
    np.testing.assert_allclose(found.data.as_tuple(), d.as_tuple(), atol=1e-12)
    np.testing.assert_allclose(rotate_tensor(t, found.frame).comp, berger_to_tensor(d).comp, atol=1e-12)


def test_berger_tensor_examples():
    s4 = berger_to_tensor(BergerData(1 / 3, 1 / 3, 1 / 3, 0, 0))
    np.testing.assert_allclose(s4.comp, model_space("S4").comp, atol=1e-15)
    cp2 = berger_to_tensor(BergerData(1 / 6, 1 / 6, 2 / 3, 1 / 6, 1 / 6))
    assert min_max_sectional(tensor_to_blocks(cp2)) == pytest.approx((1 / 6, 2 / 3))
    np.testing.assert_allclose(blocks_to_profile(tensor_to_blocks(cp2)).a, [0, 0, 2], atol=1e-14)


@pytest.mark.parametrize("data, violated", [
    ((0.5, 0.3, 0.2, 0, 0), "m<=k13"),
    ((0.2, 0.3, 0.6, 0, 0), "trace"),
    ((0.0, 0.2, 0.8, 0.5, 0.0), "|x-y|<=k13-m"),
])
def test_infeasible_data(data, violated):
    d = BergerData(*data)
    assert violated in feasibility_violations(d)
    with pytest.raises(DomainError):
        berger_to_tensor(d)


def test_berger_blocks_spectrum():
    d = BergerData(-0.1, 0.4, 0.7, 0.05, -0.02)
    b = berger_blocks(d)
    np.testing.assert_allclose(np.diag(b.A), 2 * np.array([-0.15, 0.42, 0.73]))
    np.testing.assert_allclose(np.diag(b.C), 2 * np.array([-0.05, 0.38, 0.67]))


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_round_trip_property(seed):
    rng = np.random.default_rng(seed)
    d = sample_berger_data(rng, 1)[0]
    t = rotate_tensor(berger_to_tensor(d), random_rotation(rng))
    found = find_berger_frame(t)
    np.testing.assert_allclose(found.data.as_tuple(), d.as_tuple(), atol=1e-9)
    assert np.linalg.det(found.frame.Q) > 0
    assert verify_berger_properties(t, found.frame).ok


def test_read_data_matches_tensor_entries(rng):
    d = sample_berger_data(rng, 1)[0]
    r = berger_to_tensor(d).comp
    assert r[0, 1, 0, 1] == pytest.approx(d.m)
    assert -r[0, 1, 2, 3] == pytest.approx(d.x)
    assert -r[0, 2, 3, 1] == pytest.approx(d.y)
    assert r[0, 3, 1, 2] == pytest.approx(d.r1423)


def test_not_einstein_rejected():
    comp = np.array(model_space("S4").comp)
    comp[0, 1, 0, 1] += 0.1
    comp[1, 0, 1, 0] += 0.1
    comp[0, 1, 1, 0] -= 0.1
    comp[1, 0, 0, 1] -= 0.1
    with pytest.raises(NotEinsteinError) as info:
        find_berger_frame(CurvatureTensor4(comp))
    assert info.value.b_norm == pytest.approx(0.1)


def test_data_dict_round_trip():
    d = BergerData(-0.1, 0.4, 0.7, 0.05, -0.02)
    assert BergerData.from_dict(d.to_dict()) == d
