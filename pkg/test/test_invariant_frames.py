import numpy as np
import pytest
import sympy

from algebra_kernel import GaussianVector
from complex_structures import ComplexSubalgebra, is_integrable, is_subalgebra
from conftest import read_json
from errors import DimensionError, NotSubalgebraError, SingularityError
from invariant_frames import (
    FrameInput,
    FramePair,
    bracket_matrix,
    frame_relation_residual,
    frame_structure,
    frame_vectors,
    lemma2_verify,
    random_frame_pair,
    realify_complex,
    s_operator,
)

SWAP = [[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]]


def identity_frame():
    return FrameInput.model_validate(read_json("frame_identity.json")).to_frame()


def test_frame_vectors_identity():
    u, v, w = frame_vectors(identity_frame())
    assert u == GaussianVector((1, 0, 0, 0, 0, 0), (0, 1, 0, 0, 0, 0))
    assert v == GaussianVector((0, 0, 1, 0, 0, 0), (0, 0, 0, 1, 0, 0))
    assert w == GaussianVector((0, 0, 0, 0, 1, 0), (0, 0, 0, 0, 0, 1))


def test_frame_vectors_numeric():
    fp = FramePair(np.array([[2.0, 0.0], [0.0, 1.0]]), np.eye(4))
    u, _, _ = frame_vectors(fp)
    assert np.allclose(u, [2, 1j, 0, 0, 0, 0])


def test_bracket_matrix_identity():
    bm = bracket_matrix(identity_frame())
    assert bm.A == sympy.diag(-1, 1)
    assert bm.to_pairs() == [[[-1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [1.0, 0.0]]]


def test_bracket_matrix_examples():
    assert bracket_matrix(FramePair(sympy.eye(2), 2 * sympy.eye(4))).A == sympy.diag(-1, 1)
    assert bracket_matrix(FramePair(sympy.eye(2), sympy.Matrix(SWAP))).A == sympy.diag(1, -1)
    assert bracket_matrix(FramePair(sympy.diag(3, 1), sympy.eye(4))).A == sympy.diag(-2, 2)


def test_bracket_matrix_numeric_matches_exact():
    numeric = bracket_matrix(FramePair(np.diag([3.0, 1.0]), np.eye(4)))
    assert np.allclose(numeric.to_numpy(), np.diag([-2, 2]))


def test_s_operator():
    assert s_operator() == sympy.diag(-1, -1, 1, 1)
    assert s_operator(identity_frame()) == sympy.diag(-1, -1, 1, 1)
    assert s_operator(FramePair(sympy.eye(2), sympy.Matrix(SWAP))) == sympy.diag(1, 1, -1, -1)


def test_realify_complex():
    assert np.allclose(realify_complex(np.array([[1j]])), [[0, 1], [-1, 0]])
    assert np.allclose(realify_complex(np.diag([2, -1])), np.diag([2, 2, -1, -1]))


def test_lemma2_identity():
    report = lemma2_verify(identity_frame())
    assert report.valid
    assert report.eigenvalues == [[-1.0, 0.0], [1.0, 0.0]]
    assert report.frame_relation_residual == 0.0


def test_lemma2_scaled_q():
    report = lemma2_verify(FramePair(sympy.diag(3, 1), sympy.eye(4)))
    assert report.valid
    assert np.allclose(report.eigenvalues, [[-2, 0], [2, 0]])


def test_lemma2_swapped_blocks():
    fp = FramePair(sympy.eye(2), sympy.Matrix(SWAP))
    report = lemma2_verify(fp)
    assert report.valid
    assert frame_relation_residual(fp, bracket_matrix(fp)) == 0.0


def test_lemma2_nonsymmetric_q():
    fp = FrameInput.model_validate(read_json("frame_nonsymmetric.json")).to_frame()
    assert bracket_matrix(fp).A == sympy.diag(-1 - sympy.I, 1 + sympy.I)
    report = lemma2_verify(fp)
    assert not report.valid
    assert not report.q_symmetric
    assert not report.eigenvalues_match
    assert report.conjugator is None


def test_zero_trace_q_is_rejected():
    report = lemma2_verify(FramePair(sympy.diag(1, -1), sympy.eye(4)))
    assert not report.trace_nonzero
    assert not report.valid


def test_random_frames_satisfy_conjugacy():
    rng = np.random.default_rng(0)
    for _ in range(500):
        fp = random_frame_pair(rng)
        report = lemma2_verify(fp, tol=1e-8)
        assert report.valid, report
        K = np.array(report.conjugator)
        A = bracket_matrix(fp, tol=1e-8).to_numpy().real
        q = abs(fp.q)
        assert np.allclose(np.linalg.solve(K, A @ K), np.diag([-q, q]), atol=1e-8)


def test_random_frames_span_subalgebras(real_form):
    rng = np.random.default_rng(1)
    for _ in range(50):
        fp = random_frame_pair(rng, exact=True)
        assert is_subalgebra(real_form, ComplexSubalgebra(frame_vectors(fp)))
        assert is_integrable(real_form, frame_structure(fp))


def test_frame_outside_subalgebra():
    P = [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]]
    with pytest.raises(NotSubalgebraError):
        bracket_matrix(FramePair(sympy.eye(2), sympy.Matrix(P)))
    with pytest.raises(NotSubalgebraError):
        bracket_matrix(FramePair(np.eye(2), np.array(P, dtype=float)))


def test_frame_validation():
    with pytest.raises(SingularityError):
        FramePair(sympy.Matrix([[1, 1], [1, 1]]), sympy.eye(4))
    with pytest.raises(SingularityError):
        FramePair(np.eye(2), np.diag([1.0, 1.0, 1.0, 0.0]))
    with pytest.raises(DimensionError):
        FramePair(sympy.eye(3), sympy.eye(4))


def test_frame_json():
    fp = FramePair(sympy.Matrix([["1/2", 0], [0, 1]]), sympy.eye(4))
    again = FrameInput.model_validate(fp.to_json()).to_frame()
    assert again.exact
    assert again.Q == fp.Q


def test_frame_vectors_scaling():
    u, _, _ = frame_vectors(FramePair(2 * sympy.eye(2), sympy.eye(4)))
    assert u == GaussianVector((2, 0, 0, 0, 0, 0), (0, 2, 0, 0, 0, 0))

    _, v, w = frame_vectors(FramePair(sympy.eye(2), sympy.diag(3, 3, -5, -5)))
    assert v == GaussianVector((0, 0, 3, 0, 0, 0), (0, 0, 0, 3, 0, 0))
    assert w == GaussianVector((0, 0, 0, 0, -5, 0), (0, 0, 0, 0, 0, -5))
    assert bracket_matrix(FramePair(sympy.eye(2), sympy.diag(3, 3, -5, -5))).A == sympy.diag(-1, 1)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_report_flags_are_plain_bools(seed):
    fp = random_frame_pair(np.random.default_rng(seed))
    dumped = lemma2_verify(fp, tol=1e-8).model_dump()
    for name in ("q_symmetric", "trace_nonzero", "eigenvalues_match", "frame_relation_holds", "valid"):
        assert type(dumped[name]) is bool, name
