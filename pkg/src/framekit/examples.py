"""Worked-example instances and seeded random instances.

Infinite shift-type operators are truncated so that the last basis vector
maps to zero; the identities the examples rely on survive the truncation
exactly.

Random entries are drawn with numpy's ``PCG64`` bit generator seeded by the
instance seed (``numpy.random.default_rng(seed)``).  A complex entry is
``(g1 + i g2) / sqrt(2)`` with ``g1, g2`` successive standard normals.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import InvalidSpec
from .frame_core import FrameSequence
from .hilbert import Matrix
from .kframe import kframe_image
from .superframe import SuperFramePair

__all__ = [
    "InstanceKind",
    "InstanceSpec",
    "shift_kframe",
    "projection_pair",
    "interleaved_minimal",
    "nonminimal_counterexample",
    "random_instance",
    "complex_gaussian",
    "random_frame",
    "random_unitary",
    "random_isometry",
    "random_partial_isometry",
    "random_rank_map",
]


def _basis(d: int, i: int) -> np.ndarray:
    """1-based standard basis vector ``e_i`` of ``C^d``."""
    e = np.zeros(d, dtype=np.complex128)
    e[i - 1] = 1.0
    return e


def _map_from_images(d: int, images: dict[int, int]) -> Matrix:
    """Operator sending ``e_i`` to ``e_images[i]`` (1-based) and every other ``e_j`` to 0."""
    a = np.zeros((d, d), dtype=np.complex128)
    for src, dst in images.items():
        a[dst - 1, src - 1] = 1.0
    return a


def shift_kframe(d: int) -> tuple[Matrix, FrameSequence]:
    """Truncated forward shift ``K`` and the Parseval K-frame ``{K e_i} = {e_2, ..., e_d, 0}``."""
    if d < 2:
        raise InvalidSpec(f"shift_kframe needs d >= 2, got {d}")
    k = _map_from_images(d, {i: i + 1 for i in range(1, d)})
    f = FrameSequence(k @ np.eye(d))
    return k, f


def projection_pair(d: int, left_indices: Iterable[int] | None = None,
                    right_indices: Iterable[int] | None = None):
    """Coordinate projections P, Q with orthogonal ranges and the sequences ``{P e_n}``, ``{Q e_n}``.

    Defaults: P onto ``span{e_4, e_8, ...}`` and Q onto ``span{e_1, e_3, ...}``
    (1-based).  Returns ``(P, Q, F1, F2)`` with ``M = d``.
    """
    if d < 4:
        raise InvalidSpec(f"projection_pair needs d >= 4, got {d}")
    left = sorted(set(left_indices)) if left_indices is not None else list(range(4, d + 1, 4))
    right = sorted(set(right_indices)) if right_indices is not None else list(range(1, d + 1, 2))
    if set(left) & set(right):
        raise InvalidSpec(f"index sets overlap: {sorted(set(left) & set(right))}")
    if any(not 1 <= i <= d for i in left + right):
        raise InvalidSpec(f"indices must lie in 1..{d}")
    p = _map_from_images(d, {i: i for i in left})
    q = _map_from_images(d, {i: i for i in right})
    return p, q, FrameSequence(p.copy()), FrameSequence(q.copy())


def interleaved_minimal(m: int) -> tuple[Matrix, Matrix, SuperFramePair]:
    """Interleaved pair on ``C^2m ⊕ C^2m`` with ``M = 2m``.

    ``x_n = e_n`` for even n and 0 otherwise, ``y_n = f_n`` for odd n and 0
    otherwise; ``K e_n = e_2n`` and ``L f_n = f_(2n-1)`` for ``n <= m``, 0 beyond.
    """
    if m < 1:
        raise InvalidSpec(f"interleaved_minimal needs m >= 1, got {m}")
    d = 2 * m
    k = _map_from_images(d, {n: 2 * n for n in range(1, m + 1)})
    l = _map_from_images(d, {n: 2 * n - 1 for n in range(1, m + 1)})
    xs = [_basis(d, n) if n % 2 == 0 else np.zeros(d) for n in range(1, d + 1)]
    ys = [_basis(d, n) if n % 2 == 1 else np.zeros(d) for n in range(1, d + 1)]
    return k, l, SuperFramePair(FrameSequence.from_vectors(xs), FrameSequence.from_vectors(ys))


def nonminimal_counterexample(m: int) -> tuple[Matrix, Matrix, SuperFramePair]:
    """``x_n = e_2n``, ``y_n = f_(2n-1)`` for ``n = 1..m`` on ``C^2m ⊕ C^2m``, with K, L as interleaved."""
    if m < 1:
        raise InvalidSpec(f"nonminimal_counterexample needs m >= 1, got {m}")
    d = 2 * m
    k, l, _ = interleaved_minimal(m)
    xs = [_basis(d, 2 * n) for n in range(1, m + 1)]
    ys = [_basis(d, 2 * n - 1) for n in range(1, m + 1)]
    return k, l, SuperFramePair(FrameSequence.from_vectors(xs), FrameSequence.from_vectors(ys))


# ---------------------------------------------------------------------------
# random building blocks

def complex_gaussian(rng: np.random.Generator, shape) -> Matrix:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def random_frame(rng: np.random.Generator, d: int, m: int) -> FrameSequence:
    return FrameSequence(complex_gaussian(rng, (d, m)))


def random_unitary(rng: np.random.Generator, d: int) -> Matrix:
    q, r = np.linalg.qr(complex_gaussian(rng, (d, d)))
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases


def random_isometry(rng: np.random.Generator, d: int, r: int) -> Matrix:
    """``d x r`` matrix with orthonormal columns."""
    return random_unitary(rng, d)[:, :r]


def random_partial_isometry(rng: np.random.Generator, d: int, r: int) -> Matrix:
    """Rank-r partial isometry ``U V*``; a unitary when ``r == d``."""
    return random_isometry(rng, d, r) @ random_isometry(rng, d, r).conj().T


def random_rank_map(rng: np.random.Generator, rows: int, cols: int, rank: int) -> Matrix:
    """Generic ``rows x cols`` map of the given rank (a product of Gaussian factors)."""
    if rank == 0:
        return np.zeros((rows, cols), dtype=np.complex128)
    return complex_gaussian(rng, (rows, rank)) @ complex_gaussian(rng, (rank, cols))


# ---------------------------------------------------------------------------
# instance specs

class InstanceKind(str, enum.Enum):
    SHIFT = "shift"
    PROJECTION_PAIR = "projection-pair"
    INTERLEAVED = "interleaved"
    NONMINIMAL = "nonminimal"
    RANDOM_FRAME = "random-frame"
    RANDOM_KFRAME = "random-kframe"


@dataclass(frozen=True)
class InstanceSpec:
    """What to generate.

    ``dims`` is ``(d,)`` for single-space kinds and ``(d1, d2)`` for pairs;
    ``count`` is M.  ``k_rank`` sets the rank of the random operator for
    ``random-kframe`` (default d; 0 gives K = 0).
    """

    kind: InstanceKind
    dims: tuple[int, ...]
    count: int
    seed: int = 0
    k_rank: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", InstanceKind(self.kind))
        object.__setattr__(self, "dims", tuple(int(v) for v in self.dims))
        self.validate()

    def validate(self) -> None:
        kind, dims, count = self.kind, self.dims, self.count
        if not 0 <= self.seed < 2**64:
            raise InvalidSpec(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if kind in (InstanceKind.INTERLEAVED, InstanceKind.NONMINIMAL):
            if len(dims) != 2 or dims[0] != dims[1] or dims[0] < 2 or dims[0] % 2:
                raise InvalidSpec(f"{kind.value} needs dims (2m, 2m) with m >= 1, got {dims}")
            expected = dims[0] if kind is InstanceKind.INTERLEAVED else dims[0] // 2
            if count != expected:
                raise InvalidSpec(f"{kind.value} with dims {dims} needs count {expected}, got {count}")
            return
        if len(dims) != 1:
            raise InvalidSpec(f"{kind.value} needs a single dimension, got {dims}")
        d = dims[0]
        if kind is InstanceKind.SHIFT and (d < 2 or count != d):
            raise InvalidSpec(f"shift needs d >= 2 and count == d, got d={d}, count={count}")
        if kind is InstanceKind.PROJECTION_PAIR and (d < 4 or count != d):
            raise InvalidSpec(f"projection-pair needs d >= 4 and count == d, got d={d}, count={count}")
        if kind in (InstanceKind.RANDOM_FRAME, InstanceKind.RANDOM_KFRAME):
            if d < 1 or count < d:
                raise InvalidSpec(f"{kind.value} needs 1 <= d <= count, got d={d}, count={count}")
            if self.k_rank is not None and not 0 <= self.k_rank <= d:
                raise InvalidSpec(f"k_rank must lie in 0..{d}, got {self.k_rank}")

    def to_dict(self) -> dict:
        out = {"kind": self.kind.value, "dims": list(self.dims), "count": self.count, "seed": self.seed}
        if self.k_rank is not None:
            out["k_rank"] = self.k_rank
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "InstanceSpec":
        try:
            return cls(InstanceKind(data["kind"]), tuple(data["dims"]), int(data["count"]),
                       int(data.get("seed", 0)), data.get("k_rank"))
        except (KeyError, ValueError, TypeError) as exc:
            raise InvalidSpec(f"bad instance spec {data!r}: {exc}") from exc


def random_instance(spec: InstanceSpec) -> dict:
    """Build the instance described by ``spec`` as a dict of named operators, frames and pairs."""
    spec.validate()
    kind = spec.kind
    if kind is InstanceKind.SHIFT:
        k, f = shift_kframe(spec.dims[0])
        return {"operators": {"K": k}, "frames": {"F": f}, "pairs": {}}
    if kind is InstanceKind.PROJECTION_PAIR:
        p, q, f1, f2 = projection_pair(spec.dims[0])
        return {"operators": {"K": p, "L": q}, "frames": {"F1": f1, "F2": f2},
                "pairs": {"P": SuperFramePair(f1, f2)}}
    if kind in (InstanceKind.INTERLEAVED, InstanceKind.NONMINIMAL):
        build = interleaved_minimal if kind is InstanceKind.INTERLEAVED else nonminimal_counterexample
        k, l, pair = build(spec.dims[0] // 2)
        return {"operators": {"K": k, "L": l}, "frames": {"X": pair.left, "Y": pair.right},
                "pairs": {"P": pair}}

    rng = np.random.default_rng(spec.seed)
    d = spec.dims[0]
    f = random_frame(rng, d, spec.count)
    if kind is InstanceKind.RANDOM_FRAME:
        return {"operators": {"K": np.eye(d, dtype=np.complex128)}, "frames": {"F": f}, "pairs": {}}
    rank = d if spec.k_rank is None else spec.k_rank
    k = random_rank_map(rng, d, d, rank)
    return {"operators": {"K": k}, "frames": {"F": kframe_image(f, k), "base": f}, "pairs": {}}
