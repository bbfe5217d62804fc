"""Sequences ``{x_n ⊕ y_n}`` on a direct sum ``H1 ⊕ H2`` and their K⊕L-frame properties.

Operations that come with a guaranteed consequence (a sufficient condition
implying a frame, a frame implying a necessary condition, ...) check that
consequence at runtime.  Report-returning operations record a failed
consequence in ``violations``; bool-returning ones raise
:class:`PropositionViolation` unless called with ``check=False``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.typing import ArrayLike

from .errors import DimensionMismatch, NotKFrame, NotMFrame, PreconditionError, PropositionViolation
from .frame_core import FrameKind, FrameSequence, analysis, frame_bounds, frame_operator, spectrum, synthesis
from .hilbert import (
    DEFAULT_TOL,
    Matrix,
    ToleranceConfig,
    adjoint,
    as_map,
    block_components,
    direct_sum_map,
    is_coisometry,
    kernel_basis,
    numerical_rank,
    opnorm,
    psd_dominance,
    range_inclusion,
    super_inner,
    SuperVector,
)
from .kframe import (
    KFrameCertificate,
    is_k_minimal,
    is_k_orthonormal_basis,
    is_kframe,
    is_zero_map,
    verify_kdual,
)

__all__ = [
    "SuperFramePair",
    "SuperCheckReport",
    "combine",
    "split",
    "super_bessel_check",
    "operator_identity_deviations",
    "frame_operator_identity",
    "necessary_component_check",
    "is_super_klframe",
    "analysis_ranges_orthogonal",
    "disjointness_sufficient",
    "range_condition_necessary",
    "is_super_minimal",
    "ranges_complementary",
    "minimality_sufficient",
    "super_dual_split",
    "dual_combination_equivalence",
    "is_super_onb",
    "onb_dual",
    "onb_dual_is_onb",
    "strongly_disjoint_failures",
]


@dataclass(frozen=True)
class SuperFramePair:
    """Two sequences of equal length, one per summand."""

    left: FrameSequence
    right: FrameSequence

    def __post_init__(self):
        if self.left.count != self.right.count:
            raise DimensionMismatch(
                f"pair components have counts {self.left.count} and {self.right.count}"
            )

    @property
    def dims(self) -> tuple[int, int]:
        return self.left.dim, self.right.dim

    @property
    def count(self) -> int:
        return self.left.count

    @classmethod
    def from_matrices(cls, left: ArrayLike, right: ArrayLike) -> "SuperFramePair":
        return cls(FrameSequence(left), FrameSequence(right))


def combine(p: SuperFramePair) -> FrameSequence:
    """The sequence ``{x_n ⊕ y_n}`` on ``C^(d1 + d2)``, left coordinates first."""
    return FrameSequence(np.vstack([p.left.matrix, p.right.matrix]))


def split(f: FrameSequence, d1: int) -> SuperFramePair:
    if not 0 < d1 < f.dim:
        raise DimensionMismatch(f"cannot split a dim-{f.dim} sequence at {d1}")
    return SuperFramePair(FrameSequence(f.matrix[:d1]), FrameSequence(f.matrix[d1:]))


def _check_ops(p: SuperFramePair, k: Matrix, l: Matrix) -> None:
    d1, d2 = p.dims
    if k.shape != (d1, d1) or l.shape != (d2, d2):
        raise DimensionMismatch(f"K, L must be {d1}x{d1} and {d2}x{d2}, got {k.shape} and {l.shape}")


def super_bessel_check(p: SuperFramePair, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """Bessel bound bookkeeping: each component bound <= combined bound <= 2 max(component bounds)."""
    b = float(spectrum(combine(p))[-1])
    b1 = float(spectrum(p.left)[-1])
    b2 = float(spectrum(p.right)[-1])
    slack = tol.residual_rel * max(b, 1.0)
    return max(b1, b2) <= b + slack and b <= 2 * max(b1, b2) + slack


def operator_identity_deviations(p: SuperFramePair) -> dict[str, float]:
    """Relative deviations of the three block identities linking combined and component operators.

    synthesis: ``T a = T1 a ⊕ T2 a``; analysis: ``θ(x ⊕ y) = θ1 x + θ2 y``;
    frame_operator: ``S(x ⊕ y) = (S1 x + T1 θ2 y) ⊕ (S2 y + T2 θ1 x)``.
    The combined side is evaluated elementwise from super inner products of
    the vectors ``x_n ⊕ y_n``; the component side uses the component matrices.
    Both sides are compared on standard basis inputs.
    """
    d1, d2 = p.dims
    m = p.count
    members = [SuperVector(x, y) for x, y in zip(p.left.vectors, p.right.vectors)]
    t1, t2 = synthesis(p.left), synthesis(p.right)
    th1, th2 = analysis(p.left), analysis(p.right)
    s1, s2 = frame_operator(p.left), frame_operator(p.right)

    t_combined = np.stack([u.flatten() for u in members], axis=1)
    t_blocks = np.stack(
        [SuperVector(t1[:, n], t2[:, n]).flatten() for n in range(m)], axis=1
    )

    basis = [SuperVector.unflatten(e, d1) for e in np.eye(d1 + d2, dtype=np.complex128)]
    th_combined = np.array([[super_inner(e, u) for e in basis] for u in members]).reshape(m, d1 + d2)
    th_blocks = np.stack([th1 @ e.left + th2 @ e.right for e in basis], axis=1)

    coeffs = th_combined
    s_combined = t_combined @ coeffs
    s_blocks = np.stack(
        [SuperVector(s1 @ e.left + t1 @ (th2 @ e.right), s2 @ e.right + t2 @ (th1 @ e.left)).flatten()
         for e in basis],
        axis=1,
    )

    scale_t = max(opnorm(t_combined), 1.0)
    scale_s = max(opnorm(s_combined), 1.0)
    return {
        "synthesis": opnorm(t_combined - t_blocks) / scale_t,
        "analysis": opnorm(th_combined - th_blocks) / scale_t,
        "frame_operator": opnorm(s_combined - s_blocks) / scale_s,
    }


def frame_operator_identity(p: SuperFramePair, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    return operator_identity_deviations(p)["frame_operator"] <= tol.residual_rel


def necessary_component_check(f: FrameSequence, m: ArrayLike, d1: int,
                              tol: ToleranceConfig = DEFAULT_TOL) -> tuple[bool, bool]:
    """Component inequalities implied by ``f`` being an M-frame on ``C^d1 ⊕ C^(d - d1)``.

    With M-frame bounds (A, B) and ``M = M1 ⊕ M2`` split by output rows, checks
    ``A M1 M1* <= S1 <= B`` and ``A M2 M2* <= S2 <= B`` in the Loewner order.
    """
    m = as_map(m)
    d2 = f.dim - d1
    if m.shape != (f.dim, f.dim) or d2 < 1 or d1 < 1:
        raise DimensionMismatch(f"M must be {f.dim}x{f.dim} with 0 < d1 < {f.dim}")
    cert = is_kframe(f, m, tol)
    if not cert.verdict:
        raise NotMFrame("sequence is not an M-frame")
    a = 0.0 if cert.unconstrained else cert.lower
    b = cert.upper
    m1, m2 = block_components(m, d1, d2)
    p = split(f, d1)
    out = []
    for mi, comp in ((m1, p.left), (m2, p.right)):
        si = frame_operator(comp)
        lower_ok = psd_dominance(a * (mi @ mi.conj().T), si, tol)
        upper_ok = psd_dominance(si, b * np.eye(comp.dim), tol)
        out.append(lower_ok and upper_ok)
    return out[0], out[1]


def analysis_ranges_orthogonal(p: SuperFramePair, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """``R(θ1) ⊥ R(θ2)``, tested as ``||T2 θ1|| ~ 0``."""
    t1, t2 = synthesis(p.left), synthesis(p.right)
    cross = opnorm(t2 @ t1.conj().T)
    return cross <= tol.residual_rel * max(opnorm(t1) * opnorm(t2), np.finfo(float).tiny)


def range_condition_necessary(p: SuperFramePair, k: ArrayLike, l: ArrayLike,
                              tol: ToleranceConfig = DEFAULT_TOL) -> tuple[bool, bool]:
    """``R(K) ⊆ T1(ker T2)`` and ``R(L) ⊆ T2(ker T1)``."""
    k, l = as_map(k), as_map(l)
    _check_ops(p, k, l)
    t1, t2 = synthesis(p.left), synthesis(p.right)
    n1 = kernel_basis(t1, tol).vectors
    n2 = kernel_basis(t2, tol).vectors
    first = range_inclusion(k, t1 @ n2, tol).verdict
    second = range_inclusion(l, t2 @ n1, tol).verdict
    return first, second


def is_super_minimal(p: SuperFramePair, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """``ker T1 ∩ ker T2 = 0``, i.e. the stacked synthesis has full column rank."""
    return kernel_basis(synthesis(combine(p)), tol).rank == 0


@dataclass
class SuperCheckReport:
    is_bessel: bool
    is_klframe: KFrameCertificate
    left_kframe: bool
    right_kframe: bool
    is_minimal: bool
    sufficient_disjoint: bool
    necessary_ranges: tuple[bool, bool]
    notes: list[str] = field(default_factory=list)
    violations: list[str] = field(default_factory=list)

    @property
    def verdict(self) -> bool:
        return self.is_klframe.verdict

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "is_bessel": self.is_bessel,
            "klframe": self.is_klframe.to_dict(),
            "left_kframe": self.left_kframe,
            "right_kframe": self.right_kframe,
            "is_minimal": self.is_minimal,
            "sufficient_disjoint": self.sufficient_disjoint,
            "necessary_ranges": list(self.necessary_ranges),
            "notes": list(self.notes),
            "violations": list(self.violations),
        }


def is_super_klframe(p: SuperFramePair, k: ArrayLike, l: ArrayLike,
                     tol: ToleranceConfig = DEFAULT_TOL) -> SuperCheckReport:
    """Decide whether ``{x_n ⊕ y_n}`` is a K⊕L-frame and cross-check the known side conditions."""
    k, l = as_map(k), as_map(l)
    _check_ops(p, k, l)
    cert = is_kframe(combine(p), direct_sum_map(k, l), tol)
    left = is_kframe(p.left, k, tol)
    right = is_kframe(p.right, l, tol)
    ranges = range_condition_necessary(p, k, l, tol)
    orth = analysis_ranges_orthogonal(p, tol)
    report = SuperCheckReport(
        is_bessel=super_bessel_check(p, tol),
        is_klframe=cert,
        left_kframe=left.verdict,
        right_kframe=right.verdict,
        is_minimal=is_super_minimal(p, tol),
        sufficient_disjoint=orth and left.verdict and right.verdict,
        necessary_ranges=ranges,
    )
    if not report.is_bessel:
        report.violations.append("combined Bessel bound exceeds twice the component bounds")
    if cert.verdict:
        if not (left.verdict and right.verdict):
            report.violations.append("K⊕L-frame whose components are not K-/L-frames")
        if not all(ranges):
            report.violations.append("K⊕L-frame violating the range conditions R(K) ⊆ T1(ker T2), R(L) ⊆ T2(ker T1)")
    else:
        if not left.verdict:
            report.notes.append("left component is not a K-frame")
        if not right.verdict:
            report.notes.append("right component is not an L-frame")
        for i, ok in enumerate(ranges):
            if not ok:
                report.notes.append(f"range_condition_necessary[{i}] failed")
        if report.sufficient_disjoint:
            report.violations.append("orthogonal analysis ranges did not yield a K⊕L-frame")
    return report


def _component_certs(p: SuperFramePair, k: Matrix, l: Matrix, tol: ToleranceConfig):
    left = is_kframe(p.left, k, tol)
    right = is_kframe(p.right, l, tol)
    if not left.verdict:
        raise NotKFrame("left component is not a K-frame")
    if not right.verdict:
        raise NotKFrame("right component is not an L-frame")
    return left, right


def disjointness_sufficient(p: SuperFramePair, k: ArrayLike, l: ArrayLike,
                            tol: ToleranceConfig = DEFAULT_TOL, check: bool = True) -> bool:
    """Orthogonal analysis ranges of a K-frame and an L-frame; then the pair is a K⊕L-frame."""
    k, l = as_map(k), as_map(l)
    _check_ops(p, k, l)
    left, right = _component_certs(p, k, l, tol)
    orth = analysis_ranges_orthogonal(p, tol)
    if orth and check:
        cert = is_kframe(combine(p), direct_sum_map(k, l), tol)
        if not cert.verdict:
            raise PropositionViolation("orthogonal analysis ranges but not a K⊕L-frame")
        floor = min(left.lower, right.lower)
        if not np.isinf(floor) and cert.lower < floor - 1e-8 * max(floor, 1.0):
            raise PropositionViolation(
                f"combined lower bound {cert.lower:.6g} below min component bound {floor:.6g}"
            )
    return orth


def ranges_complementary(p: SuperFramePair, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """Analysis ranges are orthogonal complements in ``C^M`` (orthogonal, ranks summing to M)."""
    r1 = numerical_rank(np.linalg.svd(synthesis(p.left), compute_uv=False), tol)
    r2 = numerical_rank(np.linalg.svd(synthesis(p.right), compute_uv=False), tol)
    return analysis_ranges_orthogonal(p, tol) and r1 + r2 == p.count


def minimality_sufficient(p: SuperFramePair, k: ArrayLike, l: ArrayLike,
                          tol: ToleranceConfig = DEFAULT_TOL, check: bool = True) -> bool:
    """Complementary analysis ranges of a K-frame and an L-frame; then the pair is K⊕L-minimal."""
    k, l = as_map(k), as_map(l)
    _check_ops(p, k, l)
    _component_certs(p, k, l, tol)
    ok = ranges_complementary(p, tol)
    if ok and check:
        if not is_kframe(combine(p), direct_sum_map(k, l), tol).verdict:
            raise PropositionViolation("complementary analysis ranges but not a K⊕L-frame")
        if not is_super_minimal(p, tol):
            raise PropositionViolation("complementary analysis ranges but combined synthesis not injective")
    return ok


def super_dual_split(p: SuperFramePair, pd: SuperFramePair, k: ArrayLike, l: ArrayLike,
                     tol: ToleranceConfig = DEFAULT_TOL, check: bool = True) -> tuple[bool, bool]:
    """Split a K⊕L-dual into its components; each must be a K-dual, resp. L-dual."""
    k, l = as_map(k), as_map(l)
    _check_ops(p, k, l)
    if pd.dims != p.dims or pd.count != p.count:
        raise DimensionMismatch("dual pair shape differs from the frame pair")
    kl = direct_sum_map(k, l)
    if not is_kframe(combine(p), kl, tol).verdict:
        raise PreconditionError("pair is not a K⊕L-frame")
    if not verify_kdual(combine(p), combine(pd), kl, tol, check=check):
        raise PreconditionError("dual pair is not a K⊕L-dual")
    out = (verify_kdual(p.left, pd.left, k, tol, check=check),
           verify_kdual(p.right, pd.right, l, tol, check=check))
    if check and not all(out):
        raise PropositionViolation(f"components of a K⊕L-dual are not K-/L-duals: {out}")
    return out


def dual_combination_equivalence(p: SuperFramePair, pd: SuperFramePair, k: ArrayLike, l: ArrayLike,
                                 tol: ToleranceConfig = DEFAULT_TOL, check: bool = True) -> bool:
    """Whether component duals combine into a K⊕L-dual.

    Checked against the cross-term criterion ``T2 θ_f = 0`` and ``T1 θ_g = 0``
    where θ_f, θ_g are the analysis maps of the component duals.
    """
    k, l = as_map(k), as_map(l)
    _check_ops(p, k, l)
    if pd.dims != p.dims or pd.count != p.count:
        raise DimensionMismatch("dual pair shape differs from the frame pair")
    if not verify_kdual(p.left, pd.left, k, tol, check=False):
        raise PreconditionError("left dual is not a K-dual")
    if not verify_kdual(p.right, pd.right, l, tol, check=False):
        raise PreconditionError("right dual is not an L-dual")
    combined = verify_kdual(combine(p), combine(pd), direct_sum_map(k, l), tol, check=False)
    t1, t2 = synthesis(p.left), synthesis(p.right)
    th_f, th_g = analysis(pd.left), analysis(pd.right)
    scale = max(opnorm(t1), opnorm(t2)) * max(opnorm(th_f), opnorm(th_g))
    cross = max(opnorm(t2 @ th_f), opnorm(t1 @ th_g))
    vanishing = cross <= tol.residual_rel * max(scale, opnorm(k), opnorm(l))
    if check and combined != vanishing:
        raise PropositionViolation(
            f"combined dual {combined} but cross terms vanish {vanishing} (cross={cross:.3e})"
        )
    return combined


def onb_dual(p: SuperFramePair, k: ArrayLike, l: ArrayLike) -> SuperFramePair:
    """``{K* x_n ⊕ L* y_n}``."""
    k, l = as_map(k), as_map(l)
    _check_ops(p, k, l)
    return SuperFramePair(FrameSequence(adjoint(k) @ p.left.matrix),
                          FrameSequence(adjoint(l) @ p.right.matrix))


def is_super_onb(p: SuperFramePair, k: ArrayLike, l: ArrayLike,
                 tol: ToleranceConfig = DEFAULT_TOL, check: bool = True) -> bool:
    """Whether ``{x_n ⊕ y_n}`` is a K⊕L-orthonormal basis.

    With ``check``, a positive answer is followed by the structural
    consequences for the three cases K = 0, L = 0 and both nonzero.
    """
    k, l = as_map(k), as_map(l)
    _check_ops(p, k, l)
    onb = is_k_orthonormal_basis(combine(p), direct_sum_map(k, l), tol)
    if not (onb and check):
        return onb

    k_zero, l_zero = is_zero_map(k), is_zero_map(l)
    if k_zero and l_zero:
        # S = 0 forces every vector to vanish, which an orthonormal system cannot do
        raise PropositionViolation("orthonormal system with vanishing frame operator")
    if k_zero or l_zero:
        vanishing, other, op = (p.left, p.right, l) if k_zero else (p.right, p.left, k)
        if np.any(vanishing.matrix):
            raise PropositionViolation("zero-operator component of an orthonormal basis is not identically zero")
        if not is_k_orthonormal_basis(other, op, tol):
            raise PropositionViolation("nonzero-operator component is not an orthonormal basis for its operator")
        return True

    kl = direct_sum_map(k, l)
    dual = onb_dual(p, k, l)
    if not verify_kdual(combine(p), combine(dual), kl, tol):
        raise PropositionViolation("{K* x_n ⊕ L* y_n} is not a K⊕L-dual")
    if not is_super_minimal(p, tol):
        raise PropositionViolation("orthonormal basis with a non-unique dual")
    if is_k_minimal(p.left, k, tol) or is_k_minimal(p.right, l, tol):
        raise PropositionViolation("a component of a K⊕L-orthonormal basis is minimal")
    if not (verify_kdual(p.left, dual.left, k, tol) and verify_kdual(p.right, dual.right, l, tol)):
        raise PropositionViolation("{K* x_n} or {L* y_n} is not a component dual")
    return True


def onb_dual_is_onb(p: SuperFramePair, k: ArrayLike, l: ArrayLike,
                    tol: ToleranceConfig = DEFAULT_TOL, check: bool = True) -> bool:
    """Whether ``{K* x_n ⊕ L* y_n}`` is a K*⊕L*-orthonormal basis.

    Requires a K⊕L-orthonormal basis with K, L both nonzero.  With ``check``,
    the answer is compared with "K and L are co-isometries", and a positive
    answer is followed by the strongly-disjoint-pair consequences (combined
    sequence is an orthonormal basis, components are Parseval frames with
    complementary analysis ranges).  Any failure raises
    :class:`PropositionViolation`.
    """
    k, l = as_map(k), as_map(l)
    _check_ops(p, k, l)
    if is_zero_map(k) or is_zero_map(l):
        raise PreconditionError("K and L must both be nonzero")
    if not is_super_onb(p, k, l, tol, check=check):
        raise PreconditionError("pair is not a K⊕L-orthonormal basis")

    dual = combine(onb_dual(p, k, l))
    result = is_k_orthonormal_basis(dual, adjoint(direct_sum_map(k, l)), tol)
    if not check:
        return result

    coiso = is_coisometry(k, tol) and is_coisometry(l, tol)
    if result != coiso:
        raise PropositionViolation(
            f"dual orthonormal-basis test gives {result} but co-isometry test gives {coiso}"
        )
    if result:
        problems = strongly_disjoint_failures(p, tol)
        if problems:
            raise PropositionViolation("; ".join(problems))
    return result


def strongly_disjoint_failures(p: SuperFramePair, tol: ToleranceConfig = DEFAULT_TOL) -> list[str]:
    """Reasons why ``p`` is not a complete strongly disjoint pair of Parseval frames (empty if it is)."""
    problems = []
    f = combine(p)
    t = synthesis(f)
    n = f.dim
    gram_ok = opnorm(t.conj().T @ t - np.eye(f.count)) <= tol.residual_rel * max(1.0, opnorm(t) ** 2)
    if not (gram_ok and f.count == n):
        problems.append("combined sequence is not an orthonormal basis")
    for name, comp in (("left", p.left), ("right", p.right)):
        if frame_bounds(comp, tol).kind is not FrameKind.PARSEVAL:
            problems.append(f"{name} component is not a Parseval frame")
    if not ranges_complementary(p, tol):
        problems.append("analysis ranges are not orthogonal complements")
    return problems

