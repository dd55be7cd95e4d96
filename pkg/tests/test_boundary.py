import numpy as np
import pytest

from flattori.boundary import (
    BoundaryForm,
    MeasuredFlatFoliation,
    boundary_act,
    boundary_scale,
    foliation_from_form,
    foliation_measure,
    form_from_foliation,
    rescaled,
    sequence_limit,
)
from flattori.errors import DimensionMismatch, DomainError, EmptySequence, NotUnimodular, ZeroForm
from flattori.geodesics import geodesic_path
from flattori.space import HomotopyClass, class_length
from helpers import random_psd_singular, random_sl, random_spd


def kernel_projector(Q, tol=1e-9):
    w, v = np.linalg.eigh(Q)
    K = v[:, w <= tol]
    return K @ K.T


def test_boundary_form_validation():
    BoundaryForm(np.diag([1.0, 0.0]))
    with pytest.raises(DomainError):
        BoundaryForm(np.diag([2.0, 0.0]))
    with pytest.raises(DomainError):
        BoundaryForm(np.diag([1.0, 0.5]))
    with pytest.raises(DomainError):
        BoundaryForm(np.diag([1.0, -0.1]))
    np.testing.assert_array_equal(BoundaryForm.normalized(np.diag([3.0, 0.0])).Q, np.diag([1.0, 0.0]))
    with pytest.raises(ZeroForm):
        BoundaryForm.normalized(np.zeros((3, 3)))


def test_foliation_examples():
    F = foliation_from_form(BoundaryForm(np.diag([1.0, 0.0])))
    np.testing.assert_array_equal(F.leaf_basis, [[0.0], [1.0]])
    assert len(F.blocks) == 1
    np.testing.assert_array_equal(F.blocks[0][0], [[1.0], [0.0]])
    assert F.weights == [1.0]

    F = foliation_from_form(np.diag([1.0, 0.25, 0.0]))
    np.testing.assert_array_equal(F.leaf_basis, [[0.0], [0.0], [1.0]])
    assert F.weights == [1.0, 0.5]
    np.testing.assert_array_equal(F.blocks[1][0], [[0.0], [1.0], [0.0]])


def test_foliation_rejects_interior_and_zero():
    with pytest.raises(DomainError):
        foliation_from_form(np.eye(2))
    with pytest.raises(ZeroForm):
        foliation_from_form(np.zeros((2, 2)))


def test_clusters_repeated_eigenvalues(rng):
    q, _ = np.linalg.qr(rng.normal(size=(4, 4)))
    Q = q @ np.diag([1.0, 1.0, 0.09, 0.0]) @ q.T
    F = foliation_from_form(Q)
    assert [B.shape[1] for B, _ in F.blocks] == [2, 1]
    assert F.weights == pytest.approx([1.0, 0.3], abs=1e-12)
    np.testing.assert_allclose(F.blocks[0][0] @ F.blocks[0][0].T, q[:, :2] @ q[:, :2].T, atol=1e-12)


def test_form_from_foliation_examples():
    e = np.eye(3)
    F = MeasuredFlatFoliation(e[:, [2]], ((e[:, [0]], 1.0), (e[:, [1]], 0.5)))
    np.testing.assert_array_equal(form_from_foliation(F).Q, np.diag([1.0, 0.25, 0.0]))
    F = MeasuredFlatFoliation(np.eye(2)[:, [1]], ((np.eye(2)[:, [0]], 1.0),))
    np.testing.assert_array_equal(form_from_foliation(F).Q, np.diag([1.0, 0.0]))


def test_rotated_blocks_give_congruent_forms(rng):
    q, _ = np.linalg.qr(rng.normal(size=(3, 3)))
    F = MeasuredFlatFoliation(q[:, [2]], ((q[:, [0]], 1.0), (q[:, [1]], 0.5)))
    np.testing.assert_allclose(form_from_foliation(F).Q, q @ np.diag([1.0, 0.25, 0.0]) @ q.T, atol=1e-15)


def test_foliation_validation():
    e = np.eye(3)
    with pytest.raises(DomainError):
        MeasuredFlatFoliation(e[:, [2]], ((e[:, [0]], 0.5), (e[:, [1]], 1.0)))
    with pytest.raises(DomainError):
        MeasuredFlatFoliation(e[:, [2]], ((e[:, [0]], 1.0),))
    with pytest.raises(DomainError):
        MeasuredFlatFoliation(e[:, [0]], ((e[:, [0]], 1.0), (e[:, [1]], 0.5)))
    with pytest.raises(DomainError):
        MeasuredFlatFoliation(np.zeros((3, 0)), ((e, 1.0),))


def test_round_trip(rng):
    for _ in range(200):
        n = int(rng.integers(2, 6))
        Q = BoundaryForm.normalized(random_psd_singular(rng, n, int(rng.integers(1, n))))
        F = foliation_from_form(Q)
        assert np.abs(form_from_foliation(F).Q - Q.Q).max() <= 1e-9
        np.testing.assert_allclose(F.leaf_basis @ F.leaf_basis.T, kernel_projector(Q.Q), atol=1e-9)


def test_measure_examples():
    F = foliation_from_form(np.diag([1.0, 0.0]))
    assert foliation_measure(F, HomotopyClass((3, 5))) == 3.0
    assert foliation_measure(F, HomotopyClass((0, 5))) == 0.0
    F = foliation_from_form(np.diag([1.0, 0.25, 0.0]))
    assert foliation_measure(F, [0.0, 4.0, 0.0]) == 2.0
    assert foliation_measure(F, [3.0, 0.0, 0.0]) == 3.0
    with pytest.raises(DimensionMismatch):
        foliation_measure(F, [1.0, 2.0])


def test_measure_matches_length_formula(rng):
    Q = BoundaryForm.normalized(random_psd_singular(rng, 4, 2))
    F = foliation_from_form(Q)
    m = rng.integers(-6, 7, size=(30, 4)).astype(float)
    np.testing.assert_allclose(foliation_measure(F, m), class_length(Q.Q, m), atol=1e-12)
    leaf = F.leaf_basis @ rng.normal(size=2)
    assert foliation_measure(F, leaf) <= 1e-14


def test_boundary_act_examples():
    Q = BoundaryForm(np.diag([1.0, 0.0]))
    np.testing.assert_array_equal(boundary_act(np.eye(2), Q).Q, Q.Q)
    np.testing.assert_allclose(boundary_act([[1.0, 0.0], [1.0, 1.0]], Q).Q, np.full((2, 2), 0.5), atol=1e-15)
    with pytest.raises(DimensionMismatch):
        boundary_act(np.eye(3), Q)
    with pytest.raises(NotUnimodular):
        boundary_act(2 * np.eye(2), Q)


def test_boundary_act_properties(rng):
    for _ in range(50):
        n = int(rng.integers(2, 6))
        rank = int(rng.integers(1, n))
        Q = BoundaryForm.normalized(random_psd_singular(rng, n, rank))
        g1, g2 = random_sl(rng, n), random_sl(rng, n)
        lhs = boundary_act(g1, boundary_act(g2, Q)).Q
        np.testing.assert_allclose(lhs, boundary_act(g1 @ g2, Q).Q, atol=1e-8)
        gQ = boundary_act(g1, Q)
        assert np.linalg.matrix_rank(gQ.Q, tol=1e-9) == rank
        # kernel vectors m of Q become m g^{-1}
        K = foliation_from_form(Q).leaf_basis.T @ np.linalg.inv(g1)
        assert np.abs(K @ gQ.Q).max() <= 1e-9
        Kq, _ = np.linalg.qr(K.T)
        np.testing.assert_allclose(Kq @ Kq.T, kernel_projector(gQ.Q), atol=1e-9)


def test_measure_equivariance(rng):
    for _ in range(50):
        n = int(rng.integers(2, 6))
        Q = random_psd_singular(rng, n, int(rng.integers(1, n)))
        g = random_sl(rng, n)
        gQ, c = boundary_scale(g, Q)
        F, gF = foliation_from_form(Q), foliation_from_form(gQ)
        m = rng.integers(-5, 6, size=(10, n)).astype(float)
        scale = foliation_from_form(Q).weights[0]
        lhs = foliation_measure(gF, m) * np.sqrt(c)
        rhs = foliation_measure(F, m @ g) * np.sqrt(jacobi_top(Q))
        np.testing.assert_allclose(lhs, rhs, atol=1e-8)


def jacobi_top(Q):
    return np.linalg.eigvalsh(Q)[-1]


def test_limit_diagonal_blow_up():
    seq = [np.diag([2.0**i, 2.0**-i]) for i in range(1, 21)]
    res = sequence_limit(seq, 3, 1e-8)
    assert res.kind == "boundary"
    assert np.array_equal(res.form.Q, np.diag([1.0, 0.0]))


def test_limit_constant(rng):
    X = random_spd(rng, 3)
    res = sequence_limit([X] * 5, 3, 1e-10)
    assert res.kind == "interior"
    np.testing.assert_allclose(res.form.X, X, atol=1e-12)


def test_limit_moving_geodesic():
    p = geodesic_path(np.eye(2), np.diag([4.0, 0.25]))
    seq = [p.points(i / 20) for i in range(1, 21)]
    res = sequence_limit(seq, 3, 1e-8)
    assert res.kind == "none"
    assert res.spread > 1e-8


def test_limit_along_extended_ray(rng):
    V, U = random_spd(rng, 3), random_spd(rng, 3)
    p = geodesic_path(V, U)
    seq = [p.points(float(s)) for s in range(1, 41)]
    res = sequence_limit(seq, 3, 1e-6)
    assert res.kind == "boundary"
    # the limit direction is V^{1/2} times the top eigenvector of W
    w, P = np.linalg.eigh(p.W)
    top = p.V_half @ P[:, -1]
    expected = np.outer(top, top) / (top @ top)
    np.testing.assert_allclose(res.form.Q, expected, atol=1e-6)
    kernel = np.linalg.solve(p.V_half, P[:, 0])
    assert np.abs(res.form.Q @ kernel).max() <= 1e-6


def test_limit_errors():
    with pytest.raises(EmptySequence):
        sequence_limit([], 2, 1e-8)
    with pytest.raises(DomainError):
        sequence_limit([np.eye(2)], 2, 1e-8)
    with pytest.raises(DomainError):
        sequence_limit([np.eye(2)] * 3, 1, 1e-8)
    with pytest.raises(DomainError):
        sequence_limit([np.eye(2)] * 3, 2, 0.0)


def test_rescaled_top_is_one(rng):
    X = random_spd(rng, 4, 1.0, 10)
    np.testing.assert_allclose(np.linalg.eigvalsh(rescaled(X))[:, -1], 1.0, atol=1e-14)
