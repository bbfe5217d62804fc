"""JSON instance files: named operators, frames and pairs with complex entries as ``[re, im]``."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from importlib import resources
from typing import Any

import jsonschema
import numpy as np

from .errors import FramekitError, InvalidSpec
from .examples import InstanceSpec, random_instance
from .frame_core import FrameSequence
from .hilbert import DEFAULT_TOL, Matrix, ToleranceConfig
from .superframe import SuperFramePair

__all__ = [
    "InstanceFileError",
    "Instance",
    "SCHEMA",
    "encode_matrix",
    "encode_vectors",
    "decode_matrix",
    "loads",
    "dumps",
    "from_spec",
]


class InstanceFileError(FramekitError, ValueError):
    """Malformed or inconsistent instance file; the message names the offending line or field."""


def _load_schema() -> dict:
    return json.loads(resources.files("framekit").joinpath("instance.schema.json").read_text())


SCHEMA = _load_schema()
_VALIDATOR = jsonschema.Draft202012Validator(SCHEMA)


def _encode_scalar(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def encode_matrix(a: Matrix) -> list:
    """Row-major list of rows of ``[re, im]`` pairs."""
    return [[_encode_scalar(z) for z in row] for row in np.asarray(a, dtype=np.complex128)]


def encode_vectors(f: FrameSequence) -> list:
    return [[_encode_scalar(z) for z in v] for v in f.vectors]


def decode_matrix(rows: list, where: str) -> Matrix:
    width = len(rows[0])
    for i, row in enumerate(rows):
        if len(row) != width:
            raise InstanceFileError(f"{where}[{i}]: length {len(row)}, expected {width}")
    out = np.array([[complex(re, im) for re, im in row] for row in rows], dtype=np.complex128)
    if not np.all(np.isfinite(out)):
        raise InstanceFileError(f"{where}: non-finite entry")
    return out


@dataclass
class Instance:
    operators: dict[str, Matrix] = field(default_factory=dict)
    frames: dict[str, FrameSequence] = field(default_factory=dict)
    pairs: dict[str, SuperFramePair] = field(default_factory=dict)
    tolerance: ToleranceConfig = DEFAULT_TOL
    tolerance_overridden: bool = False
    generator: InstanceSpec | None = None
    pair_refs: dict[str, tuple[str, str]] = field(default_factory=dict)

    def operator(self, name: str) -> Matrix:
        try:
            return self.operators[name]
        except KeyError:
            raise InstanceFileError(f"operators: no operator named {name!r}") from None

    def frame(self, name: str) -> FrameSequence:
        try:
            return self.frames[name]
        except KeyError:
            raise InstanceFileError(f"frames: no frame named {name!r}") from None

    def pair(self, name: str) -> SuperFramePair:
        try:
            return self.pairs[name]
        except KeyError:
            raise InstanceFileError(f"pairs: no pair named {name!r}") from None

    def to_json_dict(self) -> dict[str, Any]:
        doc: dict[str, Any] = {
            "field": "complex",
            "operators": {name: encode_matrix(a) for name, a in self.operators.items()},
            "frames": {name: encode_vectors(f) for name, f in self.frames.items()},
            "pairs": {name: {"left": lr[0], "right": lr[1]} for name, lr in self.pair_refs.items()},
        }
        if self.tolerance_overridden:
            doc["tolerance"] = self.tolerance.to_dict()
        if self.generator is not None:
            doc["generator"] = self.generator.to_dict()
        return doc


def _reject_constant(name: str):
    raise InstanceFileError(f"non-finite literal {name} is not allowed")


def _field_path(err: jsonschema.ValidationError) -> str:
    return ".".join(str(p) for p in err.absolute_path) or "<root>"


def loads(text: str) -> Instance:
    """Parse and validate an instance document."""
    try:
        doc = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise InstanceFileError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None

    errors = sorted(_VALIDATOR.iter_errors(doc), key=lambda e: list(map(str, e.absolute_path)))
    if errors:
        first = errors[0]
        raise InstanceFileError(f"field {_field_path(first)}: {first.message}")

    inst = Instance()
    for name, rows in doc.get("operators", {}).items():
        inst.operators[name] = decode_matrix(rows, f"operators.{name}")
    for name, vectors in doc.get("frames", {}).items():
        cols = decode_matrix(vectors, f"frames.{name}")
        inst.frames[name] = FrameSequence(cols.T)
    for name, ref in doc.get("pairs", {}).items():
        left, right = ref["left"], ref["right"]
        for side, target in (("left", left), ("right", right)):
            if target not in inst.frames:
                raise InstanceFileError(f"pairs.{name}.{side}: unknown frame {target!r}")
        lf, rf = inst.frames[left], inst.frames[right]
        if lf.count != rf.count:
            raise InstanceFileError(f"pairs.{name}: frame counts {lf.count} and {rf.count} differ")
        inst.pairs[name] = SuperFramePair(lf, rf)
        inst.pair_refs[name] = (left, right)
    if "tolerance" in doc:
        merged = {**DEFAULT_TOL.to_dict(), **doc["tolerance"]}
        if not all(math.isfinite(v) for v in merged.values()):
            raise InstanceFileError("tolerance: values must be finite")
        inst.tolerance = ToleranceConfig(**merged)
        inst.tolerance_overridden = True
    if "generator" in doc:
        try:
            inst.generator = InstanceSpec.from_dict(doc["generator"])
        except InvalidSpec as exc:
            raise InstanceFileError(f"field generator: {exc}") from None
    return inst


def dumps(inst: Instance) -> str:
    return json.dumps(inst.to_json_dict(), sort_keys=True, separators=(",", ":"), allow_nan=False) + "\n"


def from_spec(spec: InstanceSpec) -> Instance:
    """Instance object for a generator spec; pairs reference their component frames by name."""
    built = random_instance(spec)
    inst = Instance(operators=dict(built["operators"]), frames=dict(built["frames"]), generator=spec)
    by_id = {id(f): name for name, f in inst.frames.items()}
    for name, pair in built["pairs"].items():
        inst.pairs[name] = pair
        inst.pair_refs[name] = (by_id[id(pair.left)], by_id[id(pair.right)])
    return inst
