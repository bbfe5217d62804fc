import numpy as np
import pytest
from hypothesis import given

from conftest import basis, cgauss, dims, seeds
from framekit.errors import DimensionMismatch, NotKFrame, NotMFrame, PreconditionError, PropositionViolation
from framekit.examples import (
    interleaved_minimal,
    nonminimal_counterexample,
    projection_pair,
    random_frame,
    random_isometry,
    random_rank_map,
    random_unitary,
)
from framekit.frame_core import FrameSequence, analysis, frame_operator, spectrum, synthesis
from framekit.hilbert import SuperVector, adjoint, direct_sum_map
from framekit.kframe import canonical_kdual, is_kframe, kframe_image
from framekit.superframe import (
    SuperFramePair,
    combine,
    disjointness_sufficient,
    dual_combination_equivalence,
    frame_operator_identity,
    is_super_klframe,
    is_super_minimal,
    is_super_onb,
    minimality_sufficient,
    necessary_component_check,
    onb_dual,
    onb_dual_is_onb,
    operator_identity_deviations,
    range_condition_necessary,
    split,
    strongly_disjoint_failures,
    super_bessel_check,
    super_dual_split,
)


def _pair(rng, d1, d2, m):
    return SuperFramePair.from_matrices(cgauss(rng, (d1, m)), cgauss(rng, (d2, m)))


def test_pair_requires_equal_counts():
    with pytest.raises(DimensionMismatch):
        SuperFramePair.from_matrices(np.ones((2, 3)), np.ones((2, 2)))


def test_combine_layout():
    p = SuperFramePair.from_matrices([[1.0]], [[1.0]])
    assert np.array_equal(combine(p).matrix, [[1.0], [1.0]])


@given(seeds, dims, dims)
def test_combine_split_roundtrip_and_identities(seed, d1, d2):
    rng = np.random.default_rng(seed)
    p = _pair(rng, d1, d2, int(rng.integers(1, 10)))
    back = split(combine(p), d1)
    assert np.array_equal(back.left.matrix, p.left.matrix) and np.array_equal(back.right.matrix, p.right.matrix)
    assert np.array_equal(synthesis(combine(p)), np.vstack([synthesis(p.left), synthesis(p.right)]))
    x, y = cgauss(rng, d1), cgauss(rng, d2)
    theta = analysis(combine(p)) @ SuperVector(x, y).flatten()
    assert np.allclose(theta, analysis(p.left) @ x + analysis(p.right) @ y)
    s = frame_operator(combine(p)) @ SuperVector(x, y).flatten()
    t1, t2 = synthesis(p.left), synthesis(p.right)
    expect = np.concatenate([frame_operator(p.left) @ x + t1 @ analysis(p.right) @ y,
                             frame_operator(p.right) @ y + t2 @ analysis(p.left) @ x])
    assert np.allclose(s, expect)
    assert max(operator_identity_deviations(p).values()) <= 1e-12
    assert frame_operator_identity(p)


@given(seeds, dims, dims)
def test_bessel_bound_bookkeeping(seed, d1, d2):
    rng = np.random.default_rng(seed)
    p = _pair(rng, d1, d2, int(rng.integers(1, 10)))
    assert super_bessel_check(p)
    b = spectrum(combine(p))[-1]
    assert b <= 2 * max(spectrum(p.left)[-1], spectrum(p.right)[-1]) * (1 + 1e-12)


def test_bessel_bound_examples():
    zero = SuperFramePair.from_matrices(np.zeros((2, 2)), np.zeros((3, 2)))
    assert super_bessel_check(zero) and spectrum(combine(zero))[-1] == 0.0
    onb = SuperFramePair.from_matrices(np.eye(3), np.eye(3))
    assert spectrum(combine(onb))[-1] == pytest.approx(2.0)


def test_disjoint_pair_has_block_diagonal_frame_operator():
    _, _, f1, f2 = projection_pair(8)
    s = frame_operator(combine(SuperFramePair(f1, f2)))
    assert not np.any(s[:8, 8:])


@given(seeds, dims, dims)
def test_necessary_component_inequalities(seed, d1, d2):
    rng = np.random.default_rng(seed)
    d = d1 + d2
    m = random_rank_map(rng, d, d, int(rng.integers(0, d + 1)))
    f = kframe_image(random_frame(rng, d, d + 1), m)
    assert necessary_component_check(f, m, d1) == (True, True)


def test_necessary_component_check_errors():
    f = FrameSequence(np.array([[1.0], [0.0], [0.0]]))
    with pytest.raises(NotMFrame):
        necessary_component_check(f, np.eye(3), 1)
    assert necessary_component_check(f, np.zeros((3, 3)), 1) == (True, True)


def test_worked_examples():
    p_op, q_op, f1, f2 = projection_pair(8)
    p = SuperFramePair(f1, f2)
    assert disjointness_sufficient(p, p_op, q_op)
    assert is_super_klframe(p, p_op, q_op).verdict
    assert not minimality_sufficient(p, p_op, q_op)  # ranks 2 + 4 < 8

    k, l, p = interleaved_minimal(3)
    rep = is_super_klframe(p, k, l)
    assert rep.verdict and rep.is_minimal and not rep.violations
    assert minimality_sufficient(p, k, l)
    assert range_condition_necessary(p, k, l) == (True, True)

    k, l, p = nonminimal_counterexample(3)
    rep = is_super_klframe(p, k, l)
    assert not rep.verdict and rep.necessary_ranges[1] is False
    assert "range_condition_necessary[1] failed" in rep.notes


def test_identical_components():
    rng = np.random.default_rng(4)
    f = random_frame(rng, 3, 5)
    p = SuperFramePair(f, f)
    k, l = cgauss(rng, (3, 3)), np.zeros((3, 3))
    assert not is_super_klframe(p, k, l).verdict
    assert is_super_klframe(p, np.zeros((3, 3)), l).verdict
    assert not disjointness_sufficient(p, np.eye(3), np.eye(3))


def test_zero_component_is_disjoint_from_anything():
    rng = np.random.default_rng(1)
    f = random_frame(rng, 3, 4)
    p = SuperFramePair(FrameSequence(np.zeros((2, 4))), f)
    assert disjointness_sufficient(p, np.zeros((2, 2)), np.eye(3))
    with pytest.raises(NotKFrame):
        disjointness_sufficient(p, np.eye(2), np.eye(3))


def test_range_conditions_trivial_for_zero_operators():
    rng = np.random.default_rng(6)
    p = _pair(rng, 2, 3, 4)
    assert range_condition_necessary(p, np.zeros((2, 2)), np.zeros((3, 3))) == (True, True)


def test_minimal_component_forces_other_operator_to_vanish():
    rng = np.random.default_rng(8)
    x = FrameSequence(cgauss(rng, (4, 3)))  # independent, hence minimal
    k = synthesis(x) @ cgauss(rng, (3, 4))
    y = FrameSequence(cgauss(rng, (2, 3)))
    assert not is_super_klframe(SuperFramePair(x, y), k, np.eye(2)).verdict
    assert range_condition_necessary(SuperFramePair(x, y), k, np.eye(2))[1] is False


def test_super_minimality():
    rng = np.random.default_rng(9)
    lm, rm = cgauss(rng, (2, 4)), cgauss(rng, (3, 4))
    assert is_super_minimal(SuperFramePair.from_matrices(lm, rm))
    lm[:, 1] = 0
    rm[:, 1] = 0
    assert not is_super_minimal(SuperFramePair.from_matrices(lm, rm))


def test_complementary_zero_left_component():
    u = random_unitary(np.random.default_rng(2), 3)
    p = SuperFramePair(FrameSequence(np.zeros((2, 3))), FrameSequence(u))
    assert minimality_sufficient(p, np.zeros((2, 2)), np.eye(3))


def test_dual_split_and_combination():
    k, l, p = interleaved_minimal(2)
    kl = direct_sum_map(k, l)
    dual = split(canonical_kdual(combine(p), kl), 4)
    assert super_dual_split(p, dual, k, l) == (True, True)
    comp = SuperFramePair(canonical_kdual(p.left, k), canonical_kdual(p.right, l))
    assert dual_combination_equivalence(p, comp, k, l)

    rng = np.random.default_rng(3)
    f = random_frame(rng, 3, 5)
    same = SuperFramePair(f, f)
    kk, ll = cgauss(rng, (3, 3)), cgauss(rng, (3, 3))
    duals = SuperFramePair(canonical_kdual(f, kk), canonical_kdual(f, ll))
    assert not dual_combination_equivalence(same, duals, kk, ll)

    z = SuperFramePair(FrameSequence(np.zeros((3, 5))), FrameSequence(np.zeros((3, 5))))
    assert dual_combination_equivalence(same, z, np.zeros((3, 3)), np.zeros((3, 3)))
    assert super_dual_split(same, z, np.zeros((3, 3)), np.zeros((3, 3))) == (True, True)


def test_dual_split_preconditions():
    rng = np.random.default_rng(5)
    f = random_frame(rng, 2, 3)
    p = SuperFramePair(f, f)
    with pytest.raises(PreconditionError):
        super_dual_split(p, p, np.eye(2), np.eye(2))


def test_orthonormal_components_never_combine_orthonormally():
    rng = np.random.default_rng(0)
    p = SuperFramePair.from_matrices(random_isometry(rng, 4, 3), random_isometry(rng, 3, 3))
    t = synthesis(combine(p))
    assert np.allclose(np.diag(t.conj().T @ t).real, 2.0)


def test_super_onb_with_one_zero_operator():
    u = random_unitary(np.random.default_rng(7), 3)
    p = SuperFramePair(FrameSequence(np.zeros((2, 3))), FrameSequence(u))
    assert is_super_onb(p, np.zeros((2, 2)), np.eye(3))
    bad = SuperFramePair(FrameSequence(np.vstack([basis(3, 1), np.zeros(3)])), FrameSequence(u))
    assert not is_super_onb(bad, np.zeros((2, 2)), np.eye(3))
    with pytest.raises(PreconditionError):
        onb_dual_is_onb(p, np.zeros((2, 2)), np.eye(3))


@given(seeds, dims, dims)
def test_unitary_case_dual_is_orthonormal_and_pair_strongly_disjoint(seed, d1, d2):
    rng = np.random.default_rng(seed)
    v = random_unitary(rng, d1 + d2)
    p = SuperFramePair.from_matrices(v[:d1], v[d1:])
    k, l = random_unitary(rng, d1), random_unitary(rng, d2)
    # unitary K, L make the frame operator the identity, so the pair is a K⊕L-orthonormal basis
    assert is_super_onb(p, k, l)
    assert onb_dual_is_onb(p, k, l)
    assert strongly_disjoint_failures(p) == []
    dual = onb_dual(p, k, l)
    assert np.allclose(dual.left.matrix, adjoint(k) @ p.left.matrix)


def test_partial_isometry_breaks_the_coisometry_equivalence():
    # interleaved pair: K, L are partial isometries that are not onto, yet the dual is orthonormal
    k, l, p = interleaved_minimal(1)
    assert is_super_onb(p, k, l)
    assert onb_dual_is_onb(p, k, l, check=False)
    with pytest.raises(PropositionViolation):
        onb_dual_is_onb(p, k, l)
    assert strongly_disjoint_failures(p)


def test_super_onb_precondition():
    rng = np.random.default_rng(1)
    p = _pair(rng, 2, 2, 3)
    with pytest.raises(PreconditionError):
        onb_dual_is_onb(p, np.eye(2), np.eye(2))


def test_components_of_constructed_klframe():
    rng = np.random.default_rng(12)
    k, l = cgauss(rng, (3, 3)), random_rank_map(rng, 2, 2, 1)
    p = split(kframe_image(random_frame(rng, 5, 7), direct_sum_map(k, l)), 3)
    rep = is_super_klframe(p, k, l)
    assert rep.verdict and rep.left_kframe and rep.right_kframe and not rep.violations
    assert is_kframe(p.left, k).verdict
    assert rep.to_dict()["verdict"] is True
