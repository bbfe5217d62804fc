"""K-frames: decision procedures, optimal bounds, K-duals, minimality, K-orthonormal bases.

A sequence is a K-frame when ``A ||K* x||^2 <= sum |<x, x_n>|^2 <= B ||x||^2``.
In finite dimensions the upper inequality always holds, so the question is
the lower one.  It is decided two independent ways:

* semidefinite route: the largest ``A`` with ``A K K* <= S`` is computed from
  the eigendecomposition of ``S`` and confirmed with :func:`psd_dominance`;
* range route: ``R(K) ⊆ R(T)`` tested by :func:`range_inclusion` on an SVD of T.

The two must agree; disagreement raises :class:`CharacterizationMismatch`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike

from .errors import (
    CharacterizationMismatch,
    DimensionMismatch,
    NotAFrame,
    NotKFrame,
    PropositionViolation,
    ZeroK,
)
from .frame_core import FrameSequence, analysis, frame_bounds, frame_operator, spectrum, synthesis
from .hilbert import (
    DEFAULT_TOL,
    Matrix,
    ToleranceConfig,
    adjoint,
    as_map,
    douglas_factor,
    kernel_basis,
    opnorm,
    psd_dominance,
    range_inclusion,
)

__all__ = [
    "KFrameCertificate",
    "is_kframe",
    "kframe_bounds",
    "optimal_lower_bound",
    "canonical_kdual",
    "verify_kdual",
    "is_k_minimal",
    "is_k_orthonormal_basis",
    "kframe_image",
    "is_zero_map",
    "dual_solution_dimension",
]


@dataclass(frozen=True)
class KFrameCertificate:
    """Outcome of :func:`is_kframe`.

    ``lower`` is the optimal lower bound when the verdict is true, ``math.inf``
    when K = 0 (no constraint, flagged by ``unconstrained``) and 0 otherwise.
    """

    verdict: bool
    lower: float
    upper: float
    via_psd: bool
    via_range: bool
    tol_used: ToleranceConfig
    unconstrained: bool = False
    range_residual: float = 0.0

    def __bool__(self) -> bool:
        return self.verdict

    @property
    def parseval(self) -> bool:
        return self.verdict and not self.unconstrained and abs(self.lower - 1.0) <= self.tol_used.residual_rel

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "lower": "unconstrained" if self.unconstrained else self.lower,
            "upper": self.upper,
            "via_psd": self.via_psd,
            "via_range": self.via_range,
            "range_residual": self.range_residual,
            "tolerance": self.tol_used.to_dict(),
        }


def is_zero_map(k: ArrayLike) -> bool:
    # exact zero only: any nonzero K has a nontrivial range at a relative rank cutoff
    return not np.any(as_map(k))


def _check_square(f: FrameSequence, k: Matrix) -> None:
    if k.shape != (f.dim, f.dim):
        raise DimensionMismatch(f"K must be {f.dim}x{f.dim} for this sequence, got {k.shape}")


def optimal_lower_bound(s: Matrix, k: Matrix, tol: ToleranceConfig = DEFAULT_TOL) -> float:
    """Largest ``A`` with ``A K K* <= S`` on the numerical range of S.

    Writes ``S = V diag(lam) V*`` and returns ``1 / ||diag(lam)^{-1/2} V* K||^2``
    over the eigenvalues above the rank cutoff.  Returns 0 when K lies
    entirely in the numerical kernel of S, ``inf`` when K = 0.
    """
    if is_zero_map(k):
        return math.inf
    lam, v = np.linalg.eigh((s + s.conj().T) / 2)
    if lam.size == 0 or lam[-1] <= 0:
        return 0.0
    keep = lam > tol.rank_rel * lam[-1]
    w = (v[:, keep].conj().T @ k) / np.sqrt(lam[keep])[:, None]
    c = opnorm(w) ** 2
    return 0.0 if c == 0.0 else 1.0 / c


def is_kframe(f: FrameSequence, k: ArrayLike, tol: ToleranceConfig = DEFAULT_TOL) -> KFrameCertificate:
    k = as_map(k)
    _check_square(f, k)
    upper = float(spectrum(f)[-1])
    if is_zero_map(k):
        return KFrameCertificate(True, math.inf, upper, True, True, tol, unconstrained=True)

    inclusion = range_inclusion(k, synthesis(f), tol)
    via_range = inclusion.verdict

    s = frame_operator(f)
    a_opt = optimal_lower_bound(s, k, tol)
    via_psd = a_opt > 0.0 and psd_dominance(a_opt * (k @ k.conj().T), s, tol)

    if via_psd != via_range:
        raise CharacterizationMismatch(
            f"semidefinite test says {via_psd}, range test says {via_range} "
            f"(A_opt={a_opt:.3e}, range residual={inclusion.max_residual:.3e})"
        )
    lower = a_opt if via_psd else 0.0
    return KFrameCertificate(via_psd, lower, upper, via_psd, via_range, tol,
                             range_residual=inclusion.max_residual)


def kframe_bounds(f: FrameSequence, k: ArrayLike, tol: ToleranceConfig = DEFAULT_TOL) -> tuple[float, float]:
    """Optimal ``(A, B)`` for a K-frame with K != 0."""
    k = as_map(k)
    _check_square(f, k)
    if is_zero_map(k):
        raise ZeroK("the lower bound is unconstrained when K = 0")
    cert = is_kframe(f, k, tol)
    if not cert.verdict:
        raise NotKFrame("sequence is not a K-frame")
    return cert.lower, cert.upper


def _require_kframe(f: FrameSequence, k: Matrix, tol: ToleranceConfig) -> KFrameCertificate:
    cert = is_kframe(f, k, tol)
    if not cert.verdict:
        raise NotKFrame("sequence is not a K-frame")
    return cert


def canonical_kdual(f: FrameSequence, k: ArrayLike, tol: ToleranceConfig = DEFAULT_TOL) -> FrameSequence:
    """Minimal-norm K-dual: the coefficient map solving ``K = T X`` orthogonally to ker T."""
    k = as_map(k)
    _check_square(f, k)
    _require_kframe(f, k, tol)
    coeff = douglas_factor(k, synthesis(f), tol)  # M x d, the analysis map of the dual
    return FrameSequence(adjoint(coeff))


def _reconstruction_ok(t: Matrix, coeff: Matrix, k: Matrix, tol: ToleranceConfig) -> bool:
    residual = opnorm(k - t @ coeff)
    scale = max(opnorm(k), opnorm(t) * opnorm(coeff))
    return residual <= tol.residual_rel * scale


def verify_kdual(f: FrameSequence, fd: FrameSequence, k: ArrayLike,
                 tol: ToleranceConfig = DEFAULT_TOL, check: bool = True) -> bool:
    """True iff ``K x = sum <x, f_n> x_n`` for all x.

    When true and ``check`` is set, also confirms that the dual reconstructs
    ``K*`` with the roles swapped and is itself a K*-frame.
    """
    k = as_map(k)
    _check_square(f, k)
    if (f.dim, f.count) != (fd.dim, fd.count):
        raise DimensionMismatch(f"sequence shapes {(f.dim, f.count)} and {(fd.dim, fd.count)} differ")
    ok = _reconstruction_ok(synthesis(f), analysis(fd), k, tol)
    if ok and check:
        kstar = adjoint(k)
        if not _reconstruction_ok(synthesis(fd), analysis(f), kstar, tol):
            raise PropositionViolation("dual does not reconstruct K* with the roles swapped")
        if not is_kframe(fd, kstar, tol).verdict:
            raise PropositionViolation("K-dual is not a K*-frame")
    return ok


def is_k_minimal(f: FrameSequence, k: ArrayLike, tol: ToleranceConfig = DEFAULT_TOL,
                 check: bool = True) -> bool:
    """K-frame with injective synthesis operator (equivalently, a unique K-dual)."""
    k = as_map(k)
    _check_square(f, k)
    _require_kframe(f, k, tol)
    minimal = kernel_basis(synthesis(f), tol).rank == 0
    if minimal and check:
        norms = np.linalg.norm(f.matrix, axis=0)
        if np.any(norms == 0.0):
            raise PropositionViolation("a minimal K-frame contains a zero vector")
    return minimal


def dual_solution_dimension(f: FrameSequence, tol: ToleranceConfig = DEFAULT_TOL) -> int:
    """Complex dimension of the affine family of K-duals of a K-frame (``d * dim ker T``)."""
    return f.dim * kernel_basis(synthesis(f), tol).rank


def is_k_orthonormal_basis(f: FrameSequence, k: ArrayLike, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """Orthonormal system whose frame operator equals ``K K*`` (Parseval K-frame)."""
    k = as_map(k)
    _check_square(f, k)
    t = synthesis(f)
    gram = t.conj().T @ t
    if opnorm(gram - np.eye(f.count)) > tol.residual_rel * max(1.0, opnorm(gram)):
        return False
    s = t @ t.conj().T
    kk = k @ k.conj().T
    return opnorm(s - kk) <= tol.residual_rel * max(1.0, opnorm(s), opnorm(kk))


def kframe_image(f: FrameSequence, k: ArrayLike, tol: ToleranceConfig = DEFAULT_TOL) -> FrameSequence:
    """``{K x_n}`` for a frame ``{x_n}``; always a K-frame."""
    k = as_map(k)
    _check_square(f, k)
    if not frame_bounds(f, tol).is_frame:
        raise NotAFrame("kframe_image needs a frame")
    return FrameSequence(k @ synthesis(f))

