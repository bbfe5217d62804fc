"""Named randomized property batteries with replayable counterexample capture.

Every registered property draws ``trials`` independent instances.  Trial
``i`` of property ``name`` under master seed ``s`` uses its own generator
``default_rng(trial_seed)`` where ``trial_seed`` is the first 64-bit word of
``SeedSequence([s, crc32(name), i])``, so any single trial can be replayed
from ``(name, trial_seed, i)`` alone and serial and parallel runs agree.
Structured trial families cycle deterministically through their branches by
``i mod k``.
"""

from __future__ import annotations

import json
import zlib
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import examples as ex
from .errors import FramekitError, NotAFrame, UnknownProperty
from .frame_core import FrameSequence, analysis, frame_operator, spectrum, synthesis
from .hilbert import (
    DEFAULT_TOL,
    Matrix,
    SuperVector,
    ToleranceConfig,
    adjoint,
    as_map,
    direct_sum_map,
    douglas_constant,
    douglas_factor,
    inner,
    is_coisometry,
    is_isometry,
    kernel_basis,
    opnorm,
    projections,
    psd_dominance,
    range_inclusion,
    super_inner,
)
from .instance_io import Instance
from .kframe import (
    canonical_kdual,
    dual_solution_dimension,
    is_k_minimal,
    is_k_orthonormal_basis,
    is_kframe,
    is_zero_map,
    kframe_image,
    verify_kdual,
)
from .superframe import (
    SuperFramePair,
    combine,
    disjointness_sufficient,
    dual_combination_equivalence,
    is_super_klframe,
    is_super_minimal,
    is_super_onb,
    minimality_sufficient,
    necessary_component_check,
    onb_dual,
    onb_dual_is_onb,
    operator_identity_deviations,
    ranges_complementary,
    split,
    strongly_disjoint_failures,
    super_bessel_check,
    super_dual_split,
)

__all__ = [
    "PropertyCase",
    "Failure",
    "PropertyReport",
    "SuiteConfig",
    "SuiteReport",
    "REGISTRY",
    "registered_names",
    "trial_seed",
    "run_property",
    "run_suite",
    "replay",
]

M_MAX = 12


# ---------------------------------------------------------------------------
# trial plumbing

class _Counterexample(Exception):
    def __init__(self, observed: str, expected: str):
        super().__init__(f"observed {observed}, expected {expected}")
        self.observed = observed
        self.expected = expected


class Trial:
    """One seeded instance: random source, size limits and a record of the objects drawn."""

    def __init__(self, seed: int, index: int, dims_max: int, tol: ToleranceConfig):
        self.rng = np.random.default_rng(seed)
        self.index = index
        self.dims_max = dims_max
        self.tol = tol
        self.instance = Instance(tolerance=tol, tolerance_overridden=True)

    def branch(self, k: int) -> int:
        return self.index % k

    def dim(self, lo: int = 1, hi: int | None = None) -> int:
        hi = max(lo, min(self.dims_max if hi is None else hi, self.dims_max))
        return int(self.rng.integers(lo, hi + 1))

    def count(self, lo: int = 1, hi: int = M_MAX) -> int:
        return int(self.rng.integers(lo, max(lo, hi) + 1))

    def op(self, name: str, a) -> Matrix:
        a = as_map(a)
        self.instance.operators[name] = a
        return a

    def frame(self, name: str, f: FrameSequence) -> FrameSequence:
        self.instance.frames[name] = f
        return f

    def pair(self, name: str, p: SuperFramePair) -> SuperFramePair:
        left, right = f"{name}_left", f"{name}_right"
        self.instance.frames[left] = p.left
        self.instance.frames[right] = p.right
        self.instance.pairs[name] = p
        self.instance.pair_refs[name] = (left, right)
        return p

    def expect(self, condition: bool, observed, expected) -> None:
        if not condition:
            raise _Counterexample(str(observed), str(expected))


def trial_seed(master_seed: int, name: str, index: int) -> int:
    seq = np.random.SeedSequence([master_seed, zlib.crc32(name.encode()), index])
    return int(seq.generate_state(1, np.uint64)[0])


# ---------------------------------------------------------------------------
# shared instance builders

def _rank_map(t: Trial, rows: int, cols: int, rank: int | None = None) -> Matrix:
    if rank is None:
        rank = int(t.rng.integers(0, min(rows, cols) + 1))
    return ex.random_rank_map(t.rng, rows, cols, rank)


def _nonzero_map(t: Trial, d: int) -> Matrix:
    return _rank_map(t, d, d, int(t.rng.integers(1, d + 1)))


def _frame(t: Trial, d: int) -> FrameSequence:
    """Generic frame: at least d vectors."""
    return ex.random_frame(t.rng, d, t.count(d, M_MAX))


def _kframe_case(t: Trial, d: int) -> tuple[FrameSequence, Matrix]:
    """A K-frame drawn from one of three families (frame, short sequence, frame image)."""
    b = int(t.rng.integers(0, 3))
    if b == 0 or d == 1:
        return _frame(t, d), _rank_map(t, d, d)
    if b == 1:
        f = ex.random_frame(t.rng, d, t.count(1, d - 1))
        return f, synthesis(f) @ _rank_map(t, f.count, d)
    k = _rank_map(t, d, d)
    return kframe_image(_frame(t, d), k), k


def _orthogonal_pieces(t: Trial, m: int, r1: int, r2: int) -> tuple[Matrix, Matrix]:
    """Two ``m x r`` isometries with mutually orthogonal ranges."""
    u = ex.random_unitary(t.rng, m)
    return u[:, :r1], u[:, r1:r1 + r2]


def _disjoint_pair(t: Trial, d1: int, d2: int, complementary: bool) -> tuple[SuperFramePair, Matrix, Matrix]:
    """Pair with orthogonal analysis ranges of ranks r1, r2, plus K, L with ranges inside R(T1), R(T2)."""
    r1, r2 = t.dim(1, d1), t.dim(1, d2)
    m = r1 + r2 if complementary else r1 + r2 + t.count(1, max(1, M_MAX - r1 - r2))
    u1, u2 = _orthogonal_pieces(t, m, r1, r2)
    t1 = ex.complex_gaussian(t.rng, (d1, r1)) @ u1.conj().T
    t2 = ex.complex_gaussian(t.rng, (d2, r2)) @ u2.conj().T
    k = t1 @ _rank_map(t, m, d1)
    l = t2 @ _rank_map(t, m, d2)
    return SuperFramePair.from_matrices(t1, t2), k, l


def _k_onb(t: Trial, d: int, r: int) -> tuple[FrameSequence, Matrix]:
    """Orthonormal system Q of r vectors and K = Q W* with W an isometry, so that S = K K*."""
    q = ex.random_isometry(t.rng, d, r)
    w = ex.random_isometry(t.rng, d, r)
    return FrameSequence(q), q @ w.conj().T


def _super_onb(t: Trial, d1: int, d2: int, r1: int, r2: int) -> tuple[SuperFramePair, Matrix, Matrix]:
    """K⊕L-orthonormal basis whose combined vectors mix both summands."""
    q1, q2 = ex.random_isometry(t.rng, d1, r1), ex.random_isometry(t.rng, d2, r2)
    v = ex.random_unitary(t.rng, r1 + r2)
    left, right = q1 @ v[:r1], q2 @ v[r1:]
    k = q1 @ ex.random_isometry(t.rng, d1, r1).conj().T
    l = q2 @ ex.random_isometry(t.rng, d2, r2).conj().T
    return SuperFramePair.from_matrices(left, right), k, l


def _hermitian(t: Trial, d: int) -> Matrix:
    v = ex.random_unitary(t.rng, d)
    lam = t.rng.standard_normal(d) * (t.rng.random(d) < 0.75)
    return (v * lam) @ v.conj().T


# ---------------------------------------------------------------------------
# property bodies

def _thm_1_1_douglas(t: Trial) -> None:
    d, n = t.dim(), t.dim()
    rank_l = int(t.rng.integers(0, min(d, n) + 1))
    l = t.op("L", _rank_map(t, d, n, rank_l))
    planted = t.branch(2) == 0 or rank_l == d
    if planted:
        k = t.op("K", l @ ex.complex_gaussian(t.rng, (n, d)))
    else:
        k = t.op("K", _nonzero_map(t, d))
    incl = range_inclusion(k, l, t.tol)
    t.expect(incl.verdict == planted, f"inclusion {incl.verdict}", f"inclusion {planted}")
    kk, ll = k @ k.conj().T, l @ l.conj().T
    if planted:
        x = douglas_factor(k, l, t.tol)
        res = opnorm(k - l @ x)
        t.expect(res <= 1e-8 * opnorm(k) or res == 0.0, f"factor residual {res:.3e}", "<= 1e-8 ||K||")
        c = douglas_constant(k, l, t.tol)
        t.expect(psd_dominance(kk, c * (1 + 1e-6) * ll, t.tol), "KK* not majorized at the Douglas constant",
                 "KK* <= c LL*")
        if c > 0:
            t.expect(not psd_dominance(kk, c * (1 - 1e-2) * ll, t.tol),
                     "majorization below the Douglas constant", "c optimal")
        return
    # a direction killed by L* but not by K* rules out both majorization and factorization
    ker = kernel_basis(adjoint(l), t.tol).vectors
    proj = ker @ (ker.conj().T @ k)
    j = int(np.argmax(np.linalg.norm(proj, axis=0)))
    w = proj[:, j]
    t.expect(np.linalg.norm(k.conj().T @ w) > 1e-6 * opnorm(k) * np.linalg.norm(w), "no separating direction",
             "x with L*x = 0 and K*x != 0")
    lsq = np.linalg.lstsq(l, k, rcond=None)[0]
    res = opnorm(k - l @ lsq)
    t.expect(res > 1e-6 * opnorm(k), f"least-squares residual {res:.3e}", "K not in the range of L")


def _prop_1_7_iff_1_9(t: Trial) -> None:
    b = t.branch(6)
    d = t.dim(2) if b in (1, 2) else t.dim()
    if b == 0:
        f, k, expected = _frame(t, d), _rank_map(t, d, d), True
    elif b in (1, 2):
        f = ex.random_frame(t.rng, d, t.count(1, d - 1))
        if b == 1:
            k, expected = _rank_map(t, d, d, d), False
        else:
            k, expected = synthesis(f) @ _rank_map(t, f.count, d), True
    elif b in (3, 4):
        m = t.count(1, M_MAX)
        s = int(t.rng.integers(0, min(d, m)))  # rank strictly below d
        tm = _rank_map(t, d, m, s)
        if s == 0:
            tm[:, 0] = 0.0
        f = FrameSequence(tm)
        g = ex.complex_gaussian(t.rng, (d, d))
        basis = kernel_basis(adjoint(tm), t.tol).vectors  # complement of R(T)
        p_out = basis @ basis.conj().T
        inside = (np.eye(d) - p_out) @ g
        if b == 3:
            k, expected = inside + p_out @ g, False
        else:
            k, expected = inside, True
    else:
        f, k, expected = _frame(t, d) if t.rng.random() < 0.5 else ex.random_frame(t.rng, d, t.count()), \
            np.zeros((d, d), dtype=np.complex128), True
    t.frame("F", f)
    t.op("K", k)
    cert = is_kframe(f, k, t.tol)
    t.expect(cert.via_psd == cert.via_range, f"psd {cert.via_psd}, range {cert.via_range}", "agreement")
    t.expect(cert.verdict == expected, f"verdict {cert.verdict}", f"verdict {expected}")
    if not cert.verdict or cert.unconstrained:
        return
    a, bnd = cert.lower, cert.upper
    tm = synthesis(f)
    for _ in range(50):
        x = ex.complex_gaussian(t.rng, d)
        lhs = a * np.linalg.norm(k.conj().T @ x) ** 2
        mid = np.linalg.norm(tm.conj().T @ x) ** 2
        rhs = bnd * np.linalg.norm(x) ** 2
        t.expect(lhs <= mid + 1e-8 * max(lhs, mid), f"A||K*x||^2={lhs:.6g} > {mid:.6g}", "lower inequality")
        t.expect(mid <= rhs + 1e-8 * max(mid, rhs), f"sum={mid:.6g} > B||x||^2={rhs:.6g}", "upper inequality")
    t.expect(not psd_dominance(a * (1 + 1e-3) * (k @ k.conj().T), frame_operator(f), t.tol),
             "lower inequality still holds at 1.001 A", "A optimal")


def _prop_1_10_kdual(t: Trial) -> None:
    d = t.dim()
    f, k = _kframe_case(t, d)
    t.frame("F", f)
    t.op("K", k)
    fd = t.frame("Fd", canonical_kdual(f, k, t.tol))
    t.expect(verify_kdual(f, fd, k, t.tol), "canonical dual fails reconstruction", "K x = sum <x,f_n> x_n")
    # column-by-column reconstruction with explicit inner products
    for j in range(d):
        e = np.zeros(d, dtype=np.complex128)
        e[j] = 1.0
        rec = sum(inner(e, fn) * xn for fn, xn in zip(fd.vectors, f.vectors))
        err = np.linalg.norm(rec - k[:, j])
        t.expect(err <= 1e-8 * max(opnorm(k), 1.0), f"column {j} error {err:.3e}", "K e_j reconstructed")
    if not is_zero_map(k):
        zero = FrameSequence(np.zeros_like(fd.matrix))
        t.expect(not verify_kdual(f, zero, k, t.tol), "zero sequence accepted as K-dual", "rejected")


def _remark_1_11_interchange(t: Trial) -> None:
    d = t.dim()
    selfadjoint = t.branch(2) == 0
    if selfadjoint:
        k = _hermitian(t, d)
        f = _frame(t, d) if t.rng.random() < 0.5 else ex.random_frame(t.rng, d, t.count())
        if not is_kframe(f, k, t.tol).verdict:
            p = kernel_basis(adjoint(synthesis(f)), t.tol).vectors
            proj = np.eye(d) - p @ p.conj().T
            k = proj @ k @ proj
    else:
        k = ex.complex_gaussian(t.rng, (d, d))
        if d == 1:
            k = k * 0 + 1j  # a non-real scalar is not self-adjoint
        f = _frame(t, d)
    t.op("K", k)
    t.frame("F", f)
    fd = t.frame("Fd", canonical_kdual(f, k, t.tol))
    swapped = verify_kdual(fd, f, k, t.tol, check=False)
    t.expect(swapped == selfadjoint, f"interchanged reconstruction {swapped}", f"{selfadjoint} (K self-adjoint: {selfadjoint})")


def _prop_1_12_image(t: Trial) -> None:
    d = t.dim(2) if t.branch(4) == 3 else t.dim()
    k = t.op("K", _rank_map(t, d, d))
    if t.branch(4) == 3:
        f = t.frame("F", ex.random_frame(t.rng, d, t.count(1, d - 1)))
        try:
            kframe_image(f, k, t.tol)
        except NotAFrame:
            return
        t.expect(False, "image computed for a non-frame", "NotAFrame")
    f = t.frame("F", _frame(t, d))
    cert = is_kframe(kframe_image(f, k, t.tol), k, t.tol)
    t.expect(cert.verdict, "image is not a K-frame", "K-frame")


def _prop_1_15_unique_dual(t: Trial) -> None:
    b = t.branch(3)
    d = t.dim()
    if b == 0:
        f = ex.random_frame(t.rng, d, t.count(1, d))
    elif b == 1:
        f = ex.random_frame(t.rng, d, t.count(d + 1, M_MAX))
    else:
        m = ex.complex_gaussian(t.rng, (d, t.count(1, M_MAX - 1)))
        f = FrameSequence(np.insert(m, int(t.rng.integers(0, m.shape[1] + 1)), 0.0, axis=1))
    k = synthesis(f) @ _rank_map(t, f.count, d)
    t.frame("F", f)
    t.op("K", k)
    minimal = is_k_minimal(f, k, t.tol)
    dim = dual_solution_dimension(f, t.tol)
    full = np.linalg.matrix_rank(synthesis(f)) == f.count
    t.expect(minimal == (dim == 0) == full, f"minimal {minimal}, dual dimension {dim}, full column rank {full}",
             "all three agree")
    theta = analysis(canonical_kdual(f, k, t.tol))
    if minimal:
        lsq = np.linalg.lstsq(synthesis(f), k, rcond=None)[0]
        err = opnorm(theta - lsq)
        t.expect(err <= 1e-8 * max(opnorm(lsq), 1.0), f"dual differs from the unique solution by {err:.3e}", "unique")
    else:
        n = kernel_basis(synthesis(f), t.tol).vectors
        other = theta + n @ ex.complex_gaussian(t.rng, (n.shape[1], d))
        ok = verify_kdual(f, FrameSequence(adjoint(other)), k, t.tol, check=False)
        t.expect(ok and opnorm(other - theta) > 1e-6, "no second K-dual", "a distinct second K-dual")


def _prop_1_18_onb_dual(t: Trial) -> None:
    d = t.dim()
    f, k = _k_onb(t, d, t.dim(1, d))
    t.frame("F", f)
    t.op("K", k)
    t.expect(is_k_orthonormal_basis(f, k, t.tol), "not a K-orthonormal basis", "K-orthonormal basis")
    dual = FrameSequence(adjoint(k) @ synthesis(f))
    t.expect(verify_kdual(f, dual, k, t.tol), "{K* x_n} is not a K-dual", "K-dual")
    t.expect(is_k_minimal(f, k, t.tol), "K-dual not unique", "unique K-dual")
    err = opnorm(canonical_kdual(f, k, t.tol).matrix - dual.matrix)
    t.expect(err <= 1e-8, f"canonical dual differs from {{K* x_n}} by {err:.3e}", "equal")


def _prop_1_19_coisometry(t: Trial) -> None:
    surjective = t.branch(2) == 0
    d = t.dim() if surjective else t.dim(2)
    f, k = _k_onb(t, d, d if surjective else t.dim(1, d - 1))
    t.frame("F", f)
    t.op("K", k)
    image = FrameSequence(adjoint(k) @ synthesis(f))
    lhs = is_k_orthonormal_basis(image, adjoint(k), t.tol)
    rhs = is_coisometry(k, t.tol)
    t.expect(lhs == rhs, f"{{K* x_n}} K*-orthonormal basis: {lhs}; K co-isometry: {rhs}", "equal")


def _prop_2_1(t: Trial) -> None:
    d1, d2 = t.dim(), t.dim()
    p1, p2 = projections(d1, d2)
    for p in (p1, p2):
        t.expect(opnorm(p @ p - p) == 0.0 and opnorm(p - adjoint(p)) == 0.0, "not an orthogonal projection",
                 "P^2 = P = P*")
    t.expect(opnorm(p1 + p2 - np.eye(d1 + d2)) == 0.0, "P1 + P2 != I", "P1 + P2 = I")
    x, y = ex.complex_gaussian(t.rng, d1), ex.complex_gaussian(t.rng, d2)
    v = SuperVector(x, y).flatten()
    t.expect(np.array_equal(p1 @ v, SuperVector(x, np.zeros(d2)).flatten()), "P1(x+y) != x+0", "x ⊕ 0")
    t.expect(np.array_equal(p2 @ v, SuperVector(np.zeros(d1), y).flatten()), "P2(x+y) != 0+y", "0 ⊕ y")


def _random_pair(t: Trial, d1: int, d2: int, m: int | None = None) -> SuperFramePair:
    m = t.count() if m is None else m
    left = ex.complex_gaussian(t.rng, (d1, m)) * (t.rng.random() > 0.1)
    right = ex.complex_gaussian(t.rng, (d2, m)) * (t.rng.random() > 0.1)
    return SuperFramePair.from_matrices(left, right)


def _prop_2_2(t: Trial) -> None:
    d1, d2 = t.dim(), t.dim()
    p = t.pair("P", _random_pair(t, d1, d2))
    t.expect(super_bessel_check(p, t.tol), "Bessel bound bookkeeping fails", "max(B1,B2) <= B <= 2 max(B1,B2)")
    b = 2 * max(spectrum(p.left)[-1], spectrum(p.right)[-1])
    for _ in range(10):
        u = SuperVector(ex.complex_gaussian(t.rng, d1), ex.complex_gaussian(t.rng, d2))
        total = sum(abs(super_inner(u, SuperVector(xn, yn))) ** 2 for xn, yn in zip(p.left.vectors, p.right.vectors))
        bound = b * super_inner(u, u).real
        t.expect(total <= bound * (1 + 1e-10) + 1e-12, f"sum {total:.6g} > {bound:.6g}", "2 max(B1,B2) bound")


def _prop_2_3(t: Trial) -> None:
    p = t.pair("P", _random_pair(t, t.dim(), t.dim()))
    dev = operator_identity_deviations(p)
    t.expect(max(dev.values()) <= 1e-10, f"deviations {dev}", "<= 1e-10")


def _prop_2_4(t: Trial) -> None:
    d1, d2 = t.dim(), t.dim()
    m = t.op("M", _rank_map(t, d1 + d2, d1 + d2))
    f = t.frame("F", kframe_image(_frame(t, d1 + d2), m, t.tol))
    ok = necessary_component_check(f, m, d1, t.tol)
    t.expect(all(ok), f"component inequalities {ok}", "(True, True)")


def _cor_2_5(t: Trial) -> None:
    b = t.branch(3)
    d1 = t.dim(2) if b == 1 else t.dim()
    d2 = t.dim()
    k, l = t.op("K", _rank_map(t, d1, d1)), t.op("L", _rank_map(t, d2, d2))
    if b == 0:
        p = split(kframe_image(_frame(t, d1 + d2), direct_sum_map(k, l), t.tol), d1)
    elif b == 1:
        k = t.op("K", _rank_map(t, d1, d1, d1))
        m = t.count(1, d1 - 1)
        p = _random_pair(t, d1, d2, m)
        p = SuperFramePair(FrameSequence(ex.complex_gaussian(t.rng, (d1, m))), p.right)
    else:
        p = _random_pair(t, d1, d2)
    t.pair("P", p)
    rep = is_super_klframe(p, k, l, t.tol)
    t.expect(not rep.violations, "; ".join(rep.violations), "no violations")
    if rep.verdict:
        t.expect(rep.left_kframe and rep.right_kframe, (rep.left_kframe, rep.right_kframe), "both components pass")
    if b == 0:
        t.expect(rep.verdict, "constructed K⊕L-frame rejected", "verdict True")
    if b == 1:
        t.expect(not rep.left_kframe and not rep.verdict, (rep.left_kframe, rep.verdict), "(False, False)")


def _cor_2_6(t: Trial) -> None:
    d1, d2 = t.dim(), t.dim()
    k, l = t.op("K", _rank_map(t, d1, d1)), t.op("L", _rank_map(t, d2, d2))
    base = t.frame("base", _frame(t, d1 + d2))
    p = t.pair("P", split(kframe_image(base, direct_sum_map(k, l), t.tol), d1))
    left, right = is_kframe(p.left, k, t.tol).verdict, is_kframe(p.right, l, t.tol).verdict
    whole = is_kframe(combine(p), direct_sum_map(k, l), t.tol).verdict
    t.expect(left and right and whole, (left, right, whole), "(True, True, True)")


def _lemma_2_7(t: Trial) -> None:
    d1, d2 = t.dim(), t.dim()
    k, l = t.op("K", ex.complex_gaussian(t.rng, (d1, d1))), t.op("L", ex.complex_gaussian(t.rng, (d2, d2)))
    t.expect(np.array_equal(adjoint(direct_sum_map(k, l)), direct_sum_map(adjoint(k), adjoint(l))),
             "(K⊕L)* != K*⊕L*", "equal")
    u = SuperVector(ex.complex_gaussian(t.rng, d1), ex.complex_gaussian(t.rng, d2))
    v = SuperVector(ex.complex_gaussian(t.rng, d1), ex.complex_gaussian(t.rng, d2))
    lhs = super_inner(SuperVector(k @ u.left, l @ u.right), v)
    rhs = super_inner(u, SuperVector(adjoint(k) @ v.left, adjoint(l) @ v.right))
    scale = max(opnorm(k), opnorm(l)) * np.linalg.norm(u.flatten()) * np.linalg.norm(v.flatten())
    t.expect(abs(lhs - rhs) <= 1e-12 * scale, f"|difference| {abs(lhs - rhs):.3e}", "adjoint identity")


def _prop_2_8(t: Trial) -> None:
    d = t.dim()
    f = t.frame("F", ex.random_frame(t.rng, d, t.count()))
    zero = t.branch(6) == 5
    if zero:
        k = l = np.zeros((d, d), dtype=np.complex128)
    else:
        k, l = _rank_map(t, d, d), _rank_map(t, d, d)
        if is_zero_map(k) and is_zero_map(l):
            k = _nonzero_map(t, d)
    t.op("K", k)
    t.op("L", l)
    rep = is_super_klframe(t.pair("P", SuperFramePair(f, f)), k, l, t.tol)
    t.expect(rep.verdict == zero, f"verdict {rep.verdict}", f"verdict {zero} (K = L = 0: {zero})")
    t.expect(not rep.violations, "; ".join(rep.violations), "no violations")


def _prop_2_10_sufficiency(t: Trial) -> None:
    b = t.branch(4)
    d1, d2 = t.dim(), t.dim()
    if b in (0, 1):
        p, k, l = _disjoint_pair(t, d1, d2, complementary=b == 1)
    elif b == 2:
        p, k, l = _disjoint_pair(t, d1, d2, complementary=False)
        p = SuperFramePair(FrameSequence(np.zeros_like(p.left.matrix)), p.right)
        k = np.zeros((d1, d1), dtype=np.complex128)
    else:
        p = _random_pair(t, d1, d2)
        p = SuperFramePair(FrameSequence(p.left.matrix + 0.5), FrameSequence(p.right.matrix + 0.5))
        k = synthesis(p.left) @ _rank_map(t, p.count, d1)
        l = synthesis(p.right) @ _rank_map(t, p.count, d2)
    t.pair("P", p)
    t.op("K", k)
    t.op("L", l)
    orth = disjointness_sufficient(p, k, l, t.tol)
    t.expect(orth == (b != 3), f"orthogonal ranges {orth}", f"{b != 3}")
    rep = is_super_klframe(p, k, l, t.tol)
    t.expect(not rep.violations, "; ".join(rep.violations), "no violations")


def _prop_2_12(t: Trial) -> None:
    b = t.branch(3)
    d1, d2 = t.dim(), t.dim()
    if b == 0:
        p = _random_pair(t, d1, d2, t.count(1, d1 + d2))
    elif b == 1:
        p = _random_pair(t, d1, d2, t.count(d1 + d2 + 1, max(d1 + d2 + 1, M_MAX)))
    else:
        p = _random_pair(t, d1, d2, t.count(1, d1 + d2))
        j = int(t.rng.integers(0, p.count))
        lm, rm = p.left.matrix.copy(), p.right.matrix.copy()
        lm[:, j] = 0.0
        rm[:, j] = 0.0
        p = SuperFramePair.from_matrices(lm, rm)
    t.pair("P", p)
    minimal = is_super_minimal(p, t.tol)
    n1 = kernel_basis(synthesis(p.left), t.tol).vectors
    n2 = kernel_basis(synthesis(p.right), t.tol).vectors
    both = np.hstack([n1, n2])
    joint = np.linalg.matrix_rank(both) if both.size else 0
    meet = n1.shape[1] + n2.shape[1] - joint
    rank = np.linalg.matrix_rank(np.vstack([p.left.matrix, p.right.matrix]))
    t.expect(minimal == (meet == 0) == (rank == p.count),
             f"minimal {minimal}, dim(N1 ∩ N2) {meet}, stacked rank {rank}/{p.count}", "all agree")
    if b == 2:
        t.expect(not minimal, "common zero pair but minimal", "not minimal")


def _lemma_2_13(t: Trial) -> None:
    b = t.branch(3)
    d1, d2 = t.dim(), t.dim()
    a, c = t.dim(1, d1), t.dim(1, d2)
    m = a + c + (1 if b == 1 else 0)
    u = ex.random_unitary(t.rng, m)
    basis_a = u[:, :a] @ ex.complex_gaussian(t.rng, (a, a))
    if b == 2:
        basis_b = ex.complex_gaussian(t.rng, (m, c))
    else:
        basis_b = u[:, a:a + c] @ ex.complex_gaussian(t.rng, (c, c))
    # synthesis maps whose analysis ranges are span(basis_a), span(basis_b)
    t1 = ex.complex_gaussian(t.rng, (d1, a)) @ basis_a.conj().T
    t2 = ex.complex_gaussian(t.rng, (d2, c)) @ basis_b.conj().T
    p = t.pair("P", SuperFramePair.from_matrices(t1, t2))
    qa, _ = np.linalg.qr(basis_a)
    qb, _ = np.linalg.qr(basis_b)
    direct = opnorm(qa @ qa.conj().T - (np.eye(m) - qb @ qb.conj().T)) <= 1e-8
    got = ranges_complementary(p, t.tol)
    t.expect(got == direct == (b == 0), f"rank rendering {got}, projector test {direct}", f"{b == 0}")


def _prop_2_14(t: Trial) -> None:
    complementary = t.branch(2) == 0
    p, k, l = _disjoint_pair(t, t.dim(), t.dim(), complementary)
    t.pair("P", p)
    t.op("K", k)
    t.op("L", l)
    ok = minimality_sufficient(p, k, l, t.tol)
    t.expect(ok == complementary, f"sufficient condition {ok}", f"{complementary}")
    if not complementary:
        t.expect(not is_super_minimal(p, t.tol), "orthogonal but incomplete ranges gave a minimal pair",
                 "combined synthesis has a kernel")


def _prop_2_16(t: Trial) -> None:
    b = t.branch(3)
    d1, d2 = t.dim(), t.dim()
    if b == 0:
        k, l = _rank_map(t, d1, d1), _rank_map(t, d2, d2)
        p = split(kframe_image(_frame(t, d1 + d2), direct_sum_map(k, l), t.tol), d1)
    elif b == 1:
        m = t.count(1, d1)
        p = _random_pair(t, d1, d2, m)
        p = SuperFramePair(FrameSequence(ex.complex_gaussian(t.rng, (d1, m))), p.right)
        k, l = synthesis(p.left) @ _rank_map(t, m, d1), _nonzero_map(t, d2)
    else:
        p = _random_pair(t, d1, d2)
        k, l = _rank_map(t, d1, d1), _rank_map(t, d2, d2)
    t.pair("P", p)
    t.op("K", k)
    t.op("L", l)
    rep = is_super_klframe(p, k, l, t.tol)
    t.expect(not rep.violations, "; ".join(rep.violations), "no violations")
    if rep.verdict:
        t.expect(all(rep.necessary_ranges), f"range conditions {rep.necessary_ranges}", "(True, True)")
    if b == 0:
        t.expect(rep.verdict, "constructed K⊕L-frame rejected", "verdict True")
    if b == 1:
        t.expect(not rep.verdict and not rep.necessary_ranges[1], (rep.verdict, rep.necessary_ranges),
                 "verdict False with the second range condition failing")


def _cor_2_17(t: Trial) -> None:
    b = t.branch(3)
    d1, d2 = t.dim(), t.dim()
    # b == 2 mirrors b == 1 with the roles of the summands exchanged
    da, db = (d2, d1) if b == 2 else (d1, d2)
    m = t.count(1, da)
    minimal = FrameSequence(ex.complex_gaussian(t.rng, (da, m)))
    k = synthesis(minimal) @ _rank_map(t, m, da, int(t.rng.integers(1, min(m, da) + 1)))
    if b == 0:
        other, l = FrameSequence(np.zeros((db, m), dtype=np.complex128)), np.zeros((db, db), dtype=np.complex128)
    else:
        other, l = FrameSequence(ex.complex_gaussian(t.rng, (db, m))), _nonzero_map(t, db)
    if b == 2:
        p, k, l = SuperFramePair(other, minimal), l, k
    else:
        p = SuperFramePair(minimal, other)
    t.pair("P", p)
    t.op("K", k)
    t.op("L", l)
    rep = is_super_klframe(p, k, l, t.tol)
    t.expect(rep.verdict == (b == 0), f"verdict {rep.verdict}", f"{b == 0}")
    if rep.verdict:
        if is_k_minimal(p.left, k, t.tol):
            t.expect(is_zero_map(l), "left K-minimal, combined frame, L != 0", "L = 0")
        if is_k_minimal(p.right, l, t.tol):
            t.expect(is_zero_map(k), "right L-minimal, combined frame, K != 0", "K = 0")


def _klframe_case(t: Trial, d1: int, d2: int) -> tuple[SuperFramePair, Matrix, Matrix]:
    if t.rng.random() < 0.5:
        k, l = _rank_map(t, d1, d1), _rank_map(t, d2, d2)
        return split(kframe_image(_frame(t, d1 + d2), direct_sum_map(k, l), t.tol), d1), k, l
    return _disjoint_pair(t, d1, d2, complementary=t.rng.random() < 0.5)


def _prop_2_20(t: Trial) -> None:
    b = t.branch(3)
    d1, d2 = t.dim(), t.dim()
    if b == 2:
        p = _random_pair(t, d1, d2)
        k, l = np.zeros((d1, d1), dtype=np.complex128), np.zeros((d2, d2), dtype=np.complex128)
        pd = SuperFramePair.from_matrices(np.zeros_like(p.left.matrix), np.zeros_like(p.right.matrix))
    else:
        p, k, l = _klframe_case(t, d1, d2)
        kl = direct_sum_map(k, l)
        theta = analysis(canonical_kdual(combine(p), kl, t.tol))
        if b == 1:
            n = kernel_basis(synthesis(combine(p)), t.tol).vectors
            theta = theta + n @ ex.complex_gaussian(t.rng, (n.shape[1], d1 + d2))
        pd = split(FrameSequence(adjoint(theta)), d1)
    t.pair("P", p)
    t.pair("D", pd)
    t.op("K", k)
    t.op("L", l)
    out = super_dual_split(p, pd, k, l, t.tol)
    t.expect(all(out), f"component duals {out}", "(True, True)")


def _prop_2_21(t: Trial) -> None:
    b = t.branch(4)
    d1, d2 = t.dim(), t.dim()
    expected = None
    if b == 0:
        p, k, l = _disjoint_pair(t, d1, d2, complementary=t.rng.random() < 0.5)
        expected = True
    elif b == 1:
        f = _frame(t, d1)
        d2 = d1
        p, k, l = SuperFramePair(f, f), _nonzero_map(t, d1), _nonzero_map(t, d1)
        expected = False
    elif b == 2:
        m = t.count(max(d1, d2), M_MAX)
        p = SuperFramePair.from_matrices(ex.complex_gaussian(t.rng, (d1, m)), ex.complex_gaussian(t.rng, (d2, m)))
        k, l = _rank_map(t, d1, d1), _rank_map(t, d2, d2)
    else:
        p = _random_pair(t, d1, d2)
        k, l = np.zeros((d1, d1), dtype=np.complex128), np.zeros((d2, d2), dtype=np.complex128)
        expected = True
    if b == 3:
        pd = SuperFramePair.from_matrices(np.zeros_like(p.left.matrix), np.zeros_like(p.right.matrix))
    else:
        pd = SuperFramePair(canonical_kdual(p.left, k, t.tol), canonical_kdual(p.right, l, t.tol))
    t.pair("P", p)
    t.pair("D", pd)
    t.op("K", k)
    t.op("L", l)
    combined = dual_combination_equivalence(p, pd, k, l, t.tol)
    if expected is not None:
        t.expect(combined == expected, f"combined dual {combined}", f"{expected}")


def _prop_2_22(t: Trial) -> None:
    d1, d2 = t.dim(), t.dim()
    m = t.dim(1, min(d1, d2))
    p = t.pair("P", SuperFramePair.from_matrices(ex.random_isometry(t.rng, d1, m), ex.random_isometry(t.rng, d2, m)))
    tm = synthesis(combine(p))
    diag = np.real(np.diag(tm.conj().T @ tm))
    t.expect(np.max(np.abs(diag - 2.0)) <= 1e-12, f"squared norms {diag}", "all equal to 2")


def _prop_2_23(t: Trial) -> None:
    b = t.branch(4)
    d1, d2 = t.dim(), t.dim()
    expected = True
    if b in (0, 3):
        f, l = _k_onb(t, d2, t.dim(1, d2))
        left = np.zeros((d1, f.count), dtype=np.complex128)
        if b == 3:
            left[:, 0] = ex.complex_gaussian(t.rng, d1)
            expected = False
        p, k = SuperFramePair(FrameSequence(left), f), np.zeros((d1, d1), dtype=np.complex128)
    elif b == 1:
        f, k = _k_onb(t, d1, t.dim(1, d1))
        p, l = SuperFramePair(f, FrameSequence(np.zeros((d2, f.count), dtype=np.complex128))), \
            np.zeros((d2, d2), dtype=np.complex128)
    else:
        p, k, l = _super_onb(t, d1, d2, t.dim(1, d1), t.dim(1, d2))
    t.pair("P", p)
    t.op("K", k)
    t.op("L", l)
    got = is_super_onb(p, k, l, t.tol)
    t.expect(got == expected, f"K⊕L-orthonormal basis {got}", f"{expected}")


def _isometry_lemma(t: Trial, predicate: Callable[[Matrix, ToleranceConfig], bool]) -> None:
    b = t.branch(3)
    d1, d2 = t.dim(), t.dim(2)
    k = ex.random_unitary(t.rng, d1)
    if b == 0:
        l, expected = ex.random_unitary(t.rng, d2), True
    elif b == 1:
        l, expected = ex.random_partial_isometry(t.rng, d2, t.dim(0, d2 - 1)), False
    else:
        k, l = ex.complex_gaussian(t.rng, (d1, d1)), ex.complex_gaussian(t.rng, (d2, d2))
        expected = False
    if t.rng.random() < 0.5:
        k, l = l, k
    t.op("K", k)
    t.op("L", l)
    whole = predicate(direct_sum_map(k, l), t.tol)
    parts = predicate(k, t.tol) and predicate(l, t.tol)
    t.expect(whole == parts == expected, f"direct sum {whole}, components {parts}", f"{expected}")


def _lemma_2_24(t: Trial) -> None:
    _isometry_lemma(t, is_isometry)


def _lemma_2_25(t: Trial) -> None:
    _isometry_lemma(t, is_coisometry)


def _onb_dims(t: Trial) -> tuple[int, int, int, int]:
    """Dimensions and ranks for a K⊕L-orthonormal basis; even trials use full ranks (unitary K, L)."""
    if t.branch(2) == 0:
        d1, d2 = t.dim(), t.dim()
        return d1, d2, d1, d2
    d1, d2 = t.dim(2), t.dim()
    return d1, d2, t.dim(1, d1 - 1), t.dim(1, d2)


def _prop_2_26(t: Trial) -> None:
    d1, d2, r1, r2 = _onb_dims(t)
    p, k, l = _super_onb(t, d1, d2, r1, r2)
    t.pair("P", p)
    t.op("K", k)
    t.op("L", l)
    got = onb_dual_is_onb(p, k, l, t.tol)
    if t.branch(2) == 0:
        t.expect(got, "dual of a unitary case is not an orthonormal basis", "True")


def _cor_2_27(t: Trial) -> None:
    d1, d2, r1, r2 = _onb_dims(t)
    p, k, l = _super_onb(t, d1, d2, r1, r2)
    t.pair("P", p)
    t.op("K", k)
    t.op("L", l)
    t.pair("D", onb_dual(p, k, l))
    if onb_dual_is_onb(p, k, l, t.tol, check=False):
        problems = strongly_disjoint_failures(p, t.tol)
        t.expect(not problems, "; ".join(problems), "complete strongly disjoint pair of Parseval frames")


# ---------------------------------------------------------------------------
# registry

@dataclass(frozen=True)
class _Property:
    body: Callable[[Trial], None]
    default_trials: int
    summary: str


REGISTRY: dict[str, _Property] = {
    "thm_1_1_douglas": _Property(_thm_1_1_douglas, 100, "range inclusion, majorization and factorization agree"),
    "prop_1_7_iff_1_9": _Property(_prop_1_7_iff_1_9, 200, "semidefinite and range K-frame tests agree"),
    "prop_1_10_kdual": _Property(_prop_1_10_kdual, 100, "canonical K-dual reconstructs K and is a K*-frame"),
    "remark_1_11_interchange": _Property(_remark_1_11_interchange, 100, "roles of frame and dual swap iff K = K*"),
    "prop_1_12_image": _Property(_prop_1_12_image, 200, "{K x_n} is a K-frame for a frame {x_n}"),
    "prop_1_15_unique_dual": _Property(_prop_1_15_unique_dual, 100, "K-minimal iff the K-dual is unique"),
    "prop_1_18_onb_dual": _Property(_prop_1_18_onb_dual, 100, "a K-orthonormal basis has the unique dual {K* x_n}"),
    "prop_1_19_coisometry": _Property(_prop_1_19_coisometry, 50, "{K* x_n} is a K*-orthonormal basis iff K is a co-isometry"),
    "prop_2_1": _Property(_prop_2_1, 50, "coordinate projections of the direct sum"),
    "prop_2_2": _Property(_prop_2_2, 100, "Bessel bounds of combined and component sequences"),
    "prop_2_3": _Property(_prop_2_3, 100, "synthesis, analysis and frame operator block identities"),
    "prop_2_4": _Property(_prop_2_4, 100, "component inequalities of an M-frame on the direct sum"),
    "cor_2_5": _Property(_cor_2_5, 200, "components of a K⊕L-frame are a K-frame and an L-frame"),
    "cor_2_6": _Property(_cor_2_6, 100, "image of a frame under K⊕L splits into K- and L-frames"),
    "lemma_2_7": _Property(_lemma_2_7, 50, "(K⊕L)* = K*⊕L*"),
    "prop_2_8": _Property(_prop_2_8, 120, "{x_n ⊕ x_n} is a K⊕L-frame iff K = L = 0"),
    "prop_2_10_sufficiency": _Property(_prop_2_10_sufficiency, 100, "orthogonal analysis ranges give a K⊕L-frame"),
    "prop_2_12": _Property(_prop_2_12, 100, "combined minimality iff N(T1) ∩ N(T2) = 0"),
    "lemma_2_13": _Property(_lemma_2_13, 100, "closure(A) = B-perp as orthogonality plus complementary rank"),
    "prop_2_14": _Property(_prop_2_14, 100, "complementary analysis ranges give a K⊕L-minimal frame"),
    "prop_2_16": _Property(_prop_2_16, 200, "necessary range conditions R(K) ⊆ T1(N(T2)), R(L) ⊆ T2(N(T1))"),
    "cor_2_17": _Property(_cor_2_17, 200, "a minimal component forces the other operator to vanish"),
    "prop_2_20": _Property(_prop_2_20, 100, "a K⊕L-dual splits into a K-dual and an L-dual"),
    "prop_2_21": _Property(_prop_2_21, 100, "component duals combine iff the cross terms vanish"),
    "prop_2_22": _Property(_prop_2_22, 50, "combined orthonormal systems have squared norms 2"),
    "prop_2_23": _Property(_prop_2_23, 100, "structure of K⊕L-orthonormal bases"),
    "lemma_2_24": _Property(_lemma_2_24, 50, "K⊕L isometry iff K and L isometries"),
    "lemma_2_25": _Property(_lemma_2_25, 50, "K⊕L co-isometry iff K and L co-isometries"),
    "prop_2_26": _Property(_prop_2_26, 50, "dual of a K⊕L-orthonormal basis is orthonormal iff K, L co-isometries"),
    "cor_2_27": _Property(_cor_2_27, 50, "orthonormal dual forces a complete strongly disjoint pair"),
}


def registered_names() -> list[str]:
    return list(REGISTRY)


# ---------------------------------------------------------------------------
# running

@dataclass(frozen=True)
class PropertyCase:
    name: str
    trials: int | None = None
    dims_max: int = 6
    seed: int = 0
    tol: ToleranceConfig = DEFAULT_TOL

    def __post_init__(self):
        if self.name not in REGISTRY:
            raise UnknownProperty(self.name)
        if self.trials is not None and self.trials < 1:
            raise ValueError(f"trials must be positive, got {self.trials}")
        if self.dims_max < 1:
            raise ValueError(f"dims_max must be positive, got {self.dims_max}")
        if not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")

    @property
    def n_trials(self) -> int:
        return REGISTRY[self.name].default_trials if self.trials is None else self.trials


@dataclass(frozen=True)
class Failure:
    property: str
    seed: int
    index: int
    instance: dict
    observed: str
    expected: str

    def to_dict(self) -> dict:
        return {"property": self.property, "seed": self.seed, "index": self.index, "instance": self.instance,
                "observed": self.observed, "expected": self.expected}


@dataclass
class PropertyReport:
    name: str
    trials: int
    passed: int = 0
    failures: list[Failure] = field(default_factory=list)

    @property
    def failed(self) -> int:
        return len(self.failures)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {"name": self.name, "trials": self.trials, "passed": self.passed, "failed": self.failed,
                "failures": [f.to_dict() for f in self.failures]}


def _run_trial(name: str, seed: int, index: int, dims_max: int, tol: ToleranceConfig) -> Failure | None:
    t = Trial(seed, index, dims_max, tol)
    try:
        REGISTRY[name].body(t)
    except _Counterexample as exc:
        observed, expected = exc.observed, exc.expected
    except (FramekitError, np.linalg.LinAlgError, ValueError) as exc:
        observed, expected = f"{type(exc).__name__}: {exc}", "no error"
    else:
        return None
    return Failure(name, seed, index, t.instance.to_json_dict(), observed, expected)


def run_property(case: PropertyCase) -> PropertyReport:
    if case.name not in REGISTRY:
        raise UnknownProperty(case.name)
    report = PropertyReport(case.name, case.n_trials)
    for i in range(case.n_trials):
        failure = _run_trial(case.name, trial_seed(case.seed, case.name, i), i, case.dims_max, case.tol)
        if failure is None:
            report.passed += 1
        else:
            report.failures.append(failure)
    return report


def replay(name: str, seed: int, index: int, dims_max: int = 6, tol: ToleranceConfig = DEFAULT_TOL) -> Failure | None:
    """Rerun a single trial from a failure record; None when it passes."""
    if name not in REGISTRY:
        raise UnknownProperty(name)
    return _run_trial(name, seed, index, dims_max, tol)


@dataclass(frozen=True)
class SuiteConfig:
    names: tuple[str, ...] | None = None
    seed: int = 0
    trials: int | None = None
    dims_max: int = 6
    tol: ToleranceConfig = DEFAULT_TOL

    def cases(self) -> list[PropertyCase]:
        names = registered_names() if self.names is None else list(self.names)
        return [PropertyCase(n, self.trials, self.dims_max, self.seed, self.tol) for n in names]


@dataclass
class SuiteReport:
    seed: int
    dims_max: int
    tol: ToleranceConfig
    properties: list[PropertyReport]

    @property
    def total_trials(self) -> int:
        return sum(p.trials for p in self.properties)

    @property
    def total_failures(self) -> int:
        return sum(p.failed for p in self.properties)

    @property
    def ok(self) -> bool:
        return self.total_failures == 0

    @property
    def failures(self) -> list[Failure]:
        return [f for p in self.properties for f in p.failures]

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "seed": self.seed,
            "dims_max": self.dims_max,
            "tolerance": self.tol.to_dict(),
            "total_trials": self.total_trials,
            "total_failures": self.total_failures,
            "properties": [p.to_dict() for p in self.properties],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":")) + "\n"

    def pretty(self) -> str:
        width = max(len(p.name) for p in self.properties) if self.properties else 8
        lines = [f"{'property':<{width}}  trials  passed  failed"]
        for p in self.properties:
            lines.append(f"{p.name:<{width}}  {p.trials:>6}  {p.passed:>6}  {p.failed:>6}")
        lines.append(f"{'total':<{width}}  {self.total_trials:>6}  {self.total_trials - self.total_failures:>6}"
                     f"  {self.total_failures:>6}")
        for f in self.failures[:20]:
            lines.append(f"FAIL {f.property} seed={f.seed} index={f.index}: {f.observed} (expected {f.expected})")
        if len(self.failures) > 20:
            lines.append(f"... {len(self.failures) - 20} more failures")
        return "\n".join(lines) + "\n"


def run_suite(config: SuiteConfig = SuiteConfig()) -> SuiteReport:
    return SuiteReport(config.seed, config.dims_max, config.tol, [run_property(c) for c in config.cases()])
