import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import basis, cgauss, dims, seeds
from framekit.errors import NotAFrame, NotKFrame, ZeroK
from framekit.examples import random_frame, random_isometry, random_rank_map, random_unitary, shift_kframe
from framekit.frame_core import FrameSequence, frame_operator, synthesis
from framekit.hilbert import adjoint, is_coisometry, psd_dominance
from framekit.kframe import (
    canonical_kdual,
    dual_solution_dimension,
    is_k_minimal,
    is_k_orthonormal_basis,
    is_kframe,
    is_zero_map,
    kframe_bounds,
    kframe_image,
    optimal_lower_bound,
    verify_kdual,
)


@given(seeds, dims)
def test_every_frame_is_a_kframe(seed, d):
    rng = np.random.default_rng(seed)
    f = random_frame(rng, d, d + int(rng.integers(0, 4)))
    assert is_kframe(f, cgauss(rng, (d, d))).verdict


@pytest.mark.parametrize("d", [2, 3, 7])
def test_shift_is_parseval_kframe(d):
    k, f = shift_kframe(d)
    cert = is_kframe(f, k)
    assert cert.verdict and cert.parseval
    assert kframe_bounds(f, k) == pytest.approx((1.0, 1.0), abs=1e-12)


def test_single_vector_is_not_an_identity_frame():
    f = FrameSequence.from_vectors([basis(2, 1)])
    cert = is_kframe(f, np.eye(2))
    assert not cert.verdict and not cert.via_psd and not cert.via_range
    with pytest.raises(NotKFrame):
        kframe_bounds(f, np.eye(2))


def test_zero_operator_is_unconstrained():
    f = FrameSequence(np.zeros((2, 3)))
    cert = is_kframe(f, np.zeros((2, 2)))
    assert cert.verdict and cert.unconstrained and math.isinf(cert.lower)
    assert cert.to_dict()["lower"] == "unconstrained"
    with pytest.raises(ZeroK):
        kframe_bounds(f, np.zeros((2, 2)))
    assert is_zero_map(np.zeros((3, 3))) and not is_zero_map(np.eye(3) * 1e-300)
    assert math.isinf(optimal_lower_bound(np.eye(2), np.zeros((2, 2))))
    assert optimal_lower_bound(np.zeros((2, 2)), np.eye(2)) == 0.0


def test_optimal_bound_accounts_for_coupling_outside_the_range_of_k():
    # S = [[2,1],[1,1]], K = diag(1,0): the best A is 1/(S^-1)_11 = 1, not S_11 = 2
    s = np.array([[2.0, 1.0], [1.0, 1.0]])
    f = FrameSequence(np.linalg.cholesky(s))
    k = np.diag([1.0, 0.0])
    assert np.allclose(frame_operator(f), s)
    assert kframe_bounds(f, k)[0] == pytest.approx(1.0, rel=1e-12)
    assert psd_dominance(1.0 * k @ k.T, s) and not psd_dominance(1.001 * k @ k.T, s)


def test_optimal_bound_against_rayleigh_sampling():
    # brute-force minimum of <Sx,x>/||K*x||^2 over 10^5 unit vectors in C^2
    rng = np.random.default_rng(11)
    for _ in range(5):
        k = cgauss(rng, (2, 2))
        f = kframe_image(random_frame(rng, 2, 4), k)
        a_opt, _ = kframe_bounds(f, k)
        x = cgauss(rng, (2, 100_000))
        x /= np.linalg.norm(x, axis=0)
        s = frame_operator(f)
        num = np.real(np.sum(x.conj() * (s @ x), axis=0))
        den = np.sum(np.abs(k.conj().T @ x) ** 2, axis=0)
        brute = np.min(num / den)
        assert brute >= a_opt * (1 - 1e-9)
        assert brute == pytest.approx(a_opt, rel=1e-3)


@given(seeds, dims)
def test_optimal_bound_of_image_under_invertible_k(seed, d):
    # for {K x_n} with K invertible, A K K* <= K S K* iff A <= lambda_min(S)
    rng = np.random.default_rng(seed)
    f = random_frame(rng, d, d + 2)
    k = random_unitary(rng, d) @ np.diag(rng.uniform(0.5, 2.0, d))
    a_opt, _ = kframe_bounds(kframe_image(f, k), k)
    assert a_opt == pytest.approx(np.linalg.eigvalsh(frame_operator(f))[0], rel=1e-8)


@given(seeds, dims, st.integers(1, 10))
def test_semidefinite_and_range_routes_agree(seed, d, m):
    rng = np.random.default_rng(seed)
    f = FrameSequence(random_rank_map(rng, d, m, int(rng.integers(0, min(d, m) + 1))))
    k = random_rank_map(rng, d, d, int(rng.integers(0, d + 1)))
    if rng.random() < 0.5:
        k = synthesis(f) @ cgauss(rng, (m, d))
    cert = is_kframe(f, k)
    assert cert.via_psd == cert.via_range == cert.verdict


@given(seeds, dims)
def test_defining_inequality_at_reported_bounds(seed, d):
    rng = np.random.default_rng(seed)
    k = random_rank_map(rng, d, d, int(rng.integers(1, d + 1)))
    f = kframe_image(random_frame(rng, d, d + 1), k)
    a, b = kframe_bounds(f, k)
    for _ in range(50):
        x = cgauss(rng, d)
        total = np.sum(np.abs(synthesis(f).conj().T @ x) ** 2)
        assert a * np.linalg.norm(k.conj().T @ x) ** 2 <= total * (1 + 1e-8) + 1e-14
        assert total <= b * np.linalg.norm(x) ** 2 * (1 + 1e-8)


def test_canonical_dual_examples():
    u = random_unitary(np.random.default_rng(3), 3)
    f = FrameSequence(u)
    assert np.allclose(canonical_kdual(f, np.eye(3)).matrix, u)

    f = FrameSequence.from_vectors([basis(2, 1), basis(2, 1)])
    p = np.diag([1.0, 0.0])
    dual = canonical_kdual(f, p)
    assert np.allclose(dual.matrix, np.array([[0.5, 0.5], [0, 0]]))
    assert verify_kdual(f, dual, p)

    k, f = shift_kframe(4)
    dual = canonical_kdual(f, k)
    assert np.allclose(dual.matrix, adjoint(k) @ f.matrix)
    for j in range(4):
        e = basis(4, j + 1)
        rec = sum(np.vdot(fn, e) * xn for fn, xn in zip(dual.vectors, f.vectors))
        assert np.allclose(rec, k @ e)


def test_zero_dual_is_rejected():
    k, f = shift_kframe(3)
    assert not verify_kdual(f, FrameSequence(np.zeros((3, 3))), k)


@given(seeds, dims)
def test_canonical_dual_is_a_kstar_frame(seed, d):
    rng = np.random.default_rng(seed)
    k = cgauss(rng, (d, d))
    f = random_frame(rng, d, d + int(rng.integers(0, 4)))
    dual = canonical_kdual(f, k)
    assert verify_kdual(f, dual, k)
    assert is_kframe(dual, adjoint(k)).verdict


@given(seeds, dims)
def test_interchange_holds_exactly_for_self_adjoint_k(seed, d):
    rng = np.random.default_rng(seed)
    g = cgauss(rng, (d, d))
    f = random_frame(rng, d, d + 1)
    herm = (g + g.conj().T) / 2
    assert verify_kdual(canonical_kdual(f, herm), f, herm, check=False)
    skew = herm + 1j * np.eye(d)
    assert not verify_kdual(canonical_kdual(f, skew), f, skew, check=False)


def test_minimality_examples():
    k, full = shift_kframe(4)
    f = FrameSequence(full.matrix[:, :3])  # {e2, e3, e4}
    assert is_k_minimal(f, k)
    assert not is_k_minimal(full, k)
    assert dual_solution_dimension(full) == 4
    twice = FrameSequence.from_vectors([basis(2, 1), basis(2, 1)])
    assert not is_k_minimal(twice, np.diag([1.0, 0.0]))
    with pytest.raises(NotKFrame):
        is_k_minimal(twice, np.eye(2))


@given(seeds, dims, st.integers(1, 10))
def test_minimal_iff_unique_dual(seed, d, m):
    rng = np.random.default_rng(seed)
    f = FrameSequence(cgauss(rng, (d, m)))
    k = synthesis(f) @ cgauss(rng, (m, d))
    minimal = is_k_minimal(f, k)
    assert minimal == (dual_solution_dimension(f) == 0) == (np.linalg.matrix_rank(f.matrix) == m)


def test_k_orthonormal_basis_examples():
    u = random_unitary(np.random.default_rng(5), 3)
    assert is_k_orthonormal_basis(FrameSequence(u), np.eye(3))
    half = FrameSequence.from_vectors([basis(2, 1) / 2, basis(2, 2)])
    assert not is_k_orthonormal_basis(half, np.eye(2))
    k, full = shift_kframe(4)
    assert is_k_orthonormal_basis(FrameSequence(full.matrix[:, :3]), k)


def test_kframe_image():
    rng = np.random.default_rng(2)
    f = random_frame(rng, 3, 5)
    assert np.array_equal(kframe_image(f, np.eye(3)).matrix, f.matrix)
    zero = kframe_image(f, np.zeros((3, 3)))
    assert not np.any(zero.matrix) and is_kframe(zero, np.zeros((3, 3))).verdict
    with pytest.raises(NotAFrame):
        kframe_image(random_frame(rng, 3, 2), np.eye(3))


@given(seeds, dims)
def test_k_onb_dual_image_tracks_partial_isometry_not_coisometry(seed, d):
    # A K-orthonormal basis forces K to be a partial isometry, and then {K* x_n}
    # is always a K*-orthonormal basis, whether or not K is onto.
    rng = np.random.default_rng(seed)
    r = int(rng.integers(1, d + 1))
    q, w = random_isometry(rng, d, r), random_isometry(rng, d, r)
    k = q @ w.conj().T
    assert is_k_orthonormal_basis(FrameSequence(q), k)
    assert np.allclose(k @ adjoint(k) @ k, k)
    assert is_k_orthonormal_basis(FrameSequence(adjoint(k) @ q), adjoint(k))
    assert is_coisometry(k) == (r == d)
