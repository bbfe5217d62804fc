"""Finite frame sequences and their synthesis, analysis and frame operators."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .errors import DimensionMismatch
from .hilbert import DEFAULT_TOL, Matrix, ToleranceConfig, as_map, as_vector

__all__ = [
    "FrameSequence",
    "FrameKind",
    "BoundsCertificate",
    "synthesis",
    "analysis",
    "frame_operator",
    "frame_bounds",
    "spectrum",
]


@dataclass(frozen=True)
class FrameSequence:
    """An ordered finite sequence of vectors ``x_1, ..., x_M`` in ``C^d``.

    Stored column-wise: ``matrix[:, n]`` is the n-th vector.  Zero vectors are
    allowed.
    """

    matrix: Matrix = field(repr=False)

    def __post_init__(self):
        m = as_map(self.matrix).copy()
        if m.shape[0] < 1 or m.shape[1] < 1:
            raise DimensionMismatch(f"a frame sequence needs d >= 1 and M >= 1, got shape {m.shape}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_vectors(cls, vectors: Iterable[ArrayLike]) -> "FrameSequence":
        vs = [as_vector(v) for v in vectors]
        if not vs:
            raise DimensionMismatch("a frame sequence needs at least one vector")
        dims = {v.shape[0] for v in vs}
        if len(dims) != 1:
            raise DimensionMismatch(f"frame vectors have mixed dimensions {sorted(dims)}")
        return cls(np.stack(vs, axis=1))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def count(self) -> int:
        return self.matrix.shape[1]

    @property
    def vectors(self) -> list[NDArray[np.complex128]]:
        return [self.matrix[:, n] for n in range(self.count)]

    def __len__(self) -> int:
        return self.count

    def __repr__(self) -> str:
        return f"FrameSequence(dim={self.dim}, count={self.count})"


def synthesis(f: FrameSequence) -> Matrix:
    """``a -> sum_n a_n x_n`` as a ``d x M`` matrix."""
    return f.matrix.copy()


def analysis(f: FrameSequence) -> Matrix:
    """``x -> (<x, x_n>)_n`` as an ``M x d`` matrix."""
    return f.matrix.conj().T.copy()


def frame_operator(f: FrameSequence) -> Matrix:
    t = f.matrix
    return t @ t.conj().T


def spectrum(f: FrameSequence) -> NDArray[np.float64]:
    """Ascending eigenvalues of the frame operator, clipped at zero."""
    s = frame_operator(f)
    return np.clip(np.linalg.eigvalsh((s + s.conj().T) / 2), 0.0, None)


class FrameKind(str, enum.Enum):
    NOT_FRAME = "NotFrame"
    FRAME = "Frame"
    TIGHT = "Tight"
    PARSEVAL = "Parseval"


@dataclass(frozen=True)
class BoundsCertificate:
    lower: float
    upper: float
    kind: FrameKind
    tol_used: ToleranceConfig

    @property
    def is_frame(self) -> bool:
        return self.kind is not FrameKind.NOT_FRAME

    def to_dict(self) -> dict:
        return {
            "lower": self.lower,
            "upper": self.upper,
            "kind": self.kind.value,
            "tolerance": self.tol_used.to_dict(),
        }


def frame_bounds(f: FrameSequence, tol: ToleranceConfig = DEFAULT_TOL) -> BoundsCertificate:
    """Optimal frame bounds (extreme eigenvalues of S) and the resulting classification."""
    lam = spectrum(f)
    lower, upper = float(lam[0]), float(lam[-1])
    if upper == 0.0 or lower <= tol.rank_rel * upper:
        kind = FrameKind.NOT_FRAME
    elif upper - lower <= tol.residual_rel * upper:
        kind = FrameKind.PARSEVAL if abs(lower - 1.0) <= tol.residual_rel else FrameKind.TIGHT
    else:
        kind = FrameKind.FRAME
    return BoundsCertificate(lower, upper, kind, tol)
