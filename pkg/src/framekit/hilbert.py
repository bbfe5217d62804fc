"""Vectors, operators and range machinery on finite-dimensional complex spaces.

Vectors are 1-D complex numpy arrays and linear maps are 2-D complex arrays
(rows = output dimension, columns = input dimension).  The inner product is
linear in its first argument and conjugate-linear in its second.

Every numerical decision (rank, semidefiniteness, vanishing residual) is made
relative to the scale of the data through a :class:`ToleranceConfig`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .errors import DimensionMismatch, NoInclusion, NotSelfAdjoint

__all__ = [
    "ToleranceConfig",
    "DEFAULT_TOL",
    "SuperVector",
    "SubspaceBasis",
    "InclusionCertificate",
    "as_vector",
    "as_map",
    "opnorm",
    "inner",
    "norm",
    "super_inner",
    "adjoint",
    "direct_sum_map",
    "projections",
    "block_components",
    "is_isometry",
    "is_coisometry",
    "numerical_rank",
    "range_basis",
    "kernel_basis",
    "pseudo_inverse",
    "range_inclusion",
    "douglas_factor",
    "douglas_constant",
    "psd_dominance",
]

Matrix = NDArray[np.complex128]


@dataclass(frozen=True)
class ToleranceConfig:
    """Relative thresholds used by rank, PSD and residual decisions.

    rank_rel: singular values below ``rank_rel * sigma_max`` count as zero.
    psd_rel: eigenvalues above ``-psd_rel * scale`` count as nonnegative.
    residual_rel: residual norms below ``residual_rel * scale`` count as zero.
    """

    rank_rel: float = 1e-9
    psd_rel: float = 1e-9
    residual_rel: float = 1e-9

    def __post_init__(self):
        for name in ("rank_rel", "psd_rel", "residual_rel"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be a positive finite number, got {value!r}")

    def to_dict(self) -> dict:
        return {"rank_rel": self.rank_rel, "psd_rel": self.psd_rel, "residual_rel": self.residual_rel}


DEFAULT_TOL = ToleranceConfig()


def as_vector(x: ArrayLike) -> NDArray[np.complex128]:
    v = np.asarray(x, dtype=np.complex128)
    if v.ndim != 1 or v.shape[0] < 1:
        raise DimensionMismatch(f"expected a non-empty 1-D vector, got shape {v.shape}")
    return v


def as_map(a: ArrayLike) -> Matrix:
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise DimensionMismatch(f"expected a 2-D matrix, got shape {m.shape}")
    return m


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def opnorm(a: ArrayLike) -> float:
    """Spectral norm; zero for empty matrices."""
    m = np.asarray(a)
    if m.size == 0:
        return 0.0
    if m.ndim == 1:
        return float(np.linalg.norm(m))
    return float(np.linalg.norm(m, 2))


def inner(x: ArrayLike, y: ArrayLike) -> complex:
    x, y = as_vector(x), as_vector(y)
    if x.shape != y.shape:
        raise DimensionMismatch(f"inner product of vectors with dims {x.shape[0]} and {y.shape[0]}")
    # vdot conjugates its first argument
    return complex(np.vdot(y, x))


def norm(x: ArrayLike) -> float:
    return float(np.sqrt(inner(x, x).real))


@dataclass(frozen=True)
class SuperVector:
    """An element ``left ⊕ right`` of a direct sum of two spaces."""

    left: NDArray[np.complex128]
    right: NDArray[np.complex128]

    def __post_init__(self):
        object.__setattr__(self, "left", _frozen(as_vector(self.left).copy()))
        object.__setattr__(self, "right", _frozen(as_vector(self.right).copy()))

    @property
    def dims(self) -> tuple[int, int]:
        return self.left.shape[0], self.right.shape[0]

    def flatten(self) -> NDArray[np.complex128]:
        return np.concatenate([self.left, self.right])

    @classmethod
    def unflatten(cls, v: ArrayLike, d1: int) -> "SuperVector":
        v = as_vector(v)
        if not 0 < d1 < v.shape[0]:
            raise DimensionMismatch(f"cannot split a dim-{v.shape[0]} vector at {d1}")
        return cls(v[:d1], v[d1:])


def super_inner(u: SuperVector, v: SuperVector) -> complex:
    if u.dims != v.dims:
        raise DimensionMismatch(f"super vectors with dims {u.dims} and {v.dims}")
    return inner(u.left, v.left) + inner(u.right, v.right)


def adjoint(a: ArrayLike) -> Matrix:
    return as_map(a).conj().T.copy()


def direct_sum_map(k: ArrayLike, l: ArrayLike) -> Matrix:
    """Block-diagonal operator acting as ``k`` on the left summand and ``l`` on the right."""
    k, l = as_map(k), as_map(l)
    if k.shape[0] != k.shape[1] or l.shape[0] != l.shape[1]:
        raise DimensionMismatch(f"direct_sum_map needs square blocks, got {k.shape} and {l.shape}")
    d1, d2 = k.shape[0], l.shape[0]
    out = np.zeros((d1 + d2, d1 + d2), dtype=np.complex128)
    out[:d1, :d1] = k
    out[d1:, d1:] = l
    return out


def projections(d1: int, d2: int) -> tuple[Matrix, Matrix]:
    """Orthogonal projections of the direct sum onto its left and right summands."""
    if d1 < 1 or d2 < 1:
        raise DimensionMismatch(f"summand dimensions must be positive, got {d1}, {d2}")
    p1 = np.zeros((d1 + d2, d1 + d2), dtype=np.complex128)
    p2 = np.zeros_like(p1)
    p1[:d1, :d1] = np.eye(d1)
    p2[d1:, d1:] = np.eye(d2)
    return p1, p2


def block_components(m: ArrayLike, d1: int, d2: int) -> tuple[Matrix, Matrix]:
    """Split ``m`` on the direct sum into its left-valued and right-valued parts."""
    m = as_map(m)
    if m.shape != (d1 + d2, d1 + d2):
        raise DimensionMismatch(f"expected a {(d1 + d2, d1 + d2)} operator, got {m.shape}")
    return m[:d1, :].copy(), m[d1:, :].copy()


def _identity_residual(g: Matrix) -> float:
    return opnorm(g - np.eye(g.shape[0]))


def is_isometry(a: ArrayLike, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    a = as_map(a)
    g = a.conj().T @ a
    return _identity_residual(g) <= tol.residual_rel * max(1.0, opnorm(g))


def is_coisometry(a: ArrayLike, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    return is_isometry(adjoint(a), tol)


def _svd(a: Matrix):
    return np.linalg.svd(a, full_matrices=True)


def numerical_rank(s: NDArray[np.float64], tol: ToleranceConfig = DEFAULT_TOL) -> int:
    """Number of singular values above ``rank_rel * sigma_max``."""
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > tol.rank_rel * s[0]))


@dataclass(frozen=True)
class SubspaceBasis:
    """Orthonormal basis of a subspace, stored as the columns of ``vectors``."""

    dim: int
    vectors: Matrix = field(repr=False)

    def __post_init__(self):
        v = as_map(self.vectors)
        if v.shape[0] != self.dim:
            raise DimensionMismatch(f"basis vectors of dim {v.shape[0]} for a dim-{self.dim} space")
        object.__setattr__(self, "vectors", _frozen(v.copy()))

    @property
    def rank(self) -> int:
        return self.vectors.shape[1]

    def __len__(self) -> int:
        return self.rank

    def projector(self) -> Matrix:
        return self.vectors @ self.vectors.conj().T


def range_basis(a: ArrayLike, tol: ToleranceConfig = DEFAULT_TOL) -> SubspaceBasis:
    a = as_map(a)
    u, s, _ = _svd(a)
    r = numerical_rank(s, tol)
    return SubspaceBasis(a.shape[0], u[:, :r])


def kernel_basis(a: ArrayLike, tol: ToleranceConfig = DEFAULT_TOL) -> SubspaceBasis:
    a = as_map(a)
    _, s, vh = _svd(a)
    r = numerical_rank(s, tol)
    return SubspaceBasis(a.shape[1], vh[r:, :].conj().T)


def pseudo_inverse(a: ArrayLike, tol: ToleranceConfig = DEFAULT_TOL) -> Matrix:
    """Moore-Penrose inverse with the same rank cutoff as :func:`range_basis`."""
    a = as_map(a)
    u, s, vh = _svd(a)
    r = numerical_rank(s, tol)
    return (vh[:r, :].conj().T / s[:r]) @ u[:, :r].conj().T


@dataclass(frozen=True)
class InclusionCertificate:
    verdict: bool
    max_residual: float
    witness: NDArray[np.complex128] | None
    tol_used: ToleranceConfig

    def __bool__(self) -> bool:
        return self.verdict


def range_inclusion(k: ArrayLike, l: ArrayLike, tol: ToleranceConfig = DEFAULT_TOL) -> InclusionCertificate:
    """Decide whether the range of ``k`` is contained in the range of ``l``.

    Each orthonormal range vector of ``k`` is projected onto the range of
    ``l``; the largest distance left over is the certificate residual.  On
    failure the worst range vector of ``k`` is returned as witness.
    """
    k, l = as_map(k), as_map(l)
    if k.shape[0] != l.shape[0]:
        raise DimensionMismatch(f"operators with output dims {k.shape[0]} and {l.shape[0]}")
    qk = range_basis(k, tol).vectors
    if qk.shape[1] == 0:
        return InclusionCertificate(True, 0.0, None, tol)
    ql = range_basis(l, tol).vectors
    outside = qk - ql @ (ql.conj().T @ qk)
    residuals = np.linalg.norm(outside, axis=0)
    worst = int(np.argmax(residuals))
    max_res = float(residuals[worst])
    if max_res <= tol.residual_rel:
        return InclusionCertificate(True, max_res, None, tol)
    return InclusionCertificate(False, max_res, _frozen(qk[:, worst].copy()), tol)


def douglas_factor(k: ArrayLike, l: ArrayLike, tol: ToleranceConfig = DEFAULT_TOL) -> Matrix:
    """Minimal-norm ``X`` with ``K = L X``; its columns lie in the orthocomplement of ker L."""
    k, l = as_map(k), as_map(l)
    cert = range_inclusion(k, l, tol)
    if not cert.verdict:
        raise NoInclusion(f"range of K is not contained in range of L (residual {cert.max_residual:.3e})")
    return pseudo_inverse(l, tol) @ k


def douglas_constant(k: ArrayLike, l: ArrayLike, tol: ToleranceConfig = DEFAULT_TOL) -> float:
    """Least ``c >= 0`` with ``K K* <= c L L*``, as the squared norm of the reduced factor."""
    return opnorm(douglas_factor(k, l, tol)) ** 2


def _hermitian_or_raise(a: Matrix, label: str, tol: ToleranceConfig) -> Matrix:
    if a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"{label} must be square, got {a.shape}")
    if opnorm(a - a.conj().T) > tol.residual_rel * max(1.0, opnorm(a)):
        raise NotSelfAdjoint(f"{label} is not self-adjoint")
    return (a + a.conj().T) / 2


def psd_dominance(a: ArrayLike, b: ArrayLike, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """True iff ``A <= B`` in the Loewner order, up to the PSD floor."""
    a, b = as_map(a), as_map(b)
    if a.shape != b.shape:
        raise DimensionMismatch(f"operators of shapes {a.shape} and {b.shape}")
    ha = _hermitian_or_raise(a, "A", tol)
    hb = _hermitian_or_raise(b, "B", tol)
    if ha.size == 0:
        return True
    lam_min = float(np.linalg.eigvalsh(hb - ha)[0])
    floor = tol.psd_rel * max(opnorm(ha), opnorm(hb), 1.0)
    return lam_min >= -floor
