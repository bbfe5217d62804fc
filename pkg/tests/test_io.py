import json
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given

from conftest import seeds
from framekit.examples import InstanceKind, InstanceSpec
from framekit.instance_io import SCHEMA, InstanceFileError, dumps, from_spec, loads

KINDS = [
    ("shift", (4,), 4), ("projection-pair", (6,), 6), ("interleaved", (4, 4), 4),
    ("nonminimal", (6, 6), 3), ("random-frame", (3,), 5), ("random-kframe", (4,), 6),
]


@pytest.mark.parametrize("kind,dims,count", KINDS)
def test_roundtrip_is_idempotent(kind, dims, count):
    first = dumps(from_spec(InstanceSpec(kind, dims, count, seed=3)))
    assert dumps(loads(first)) == first


@given(seeds)
def test_random_roundtrip_preserves_values(seed):
    inst = from_spec(InstanceSpec(InstanceKind.RANDOM_KFRAME, (3,), 4, seed))
    back = loads(dumps(inst))
    assert np.array_equal(back.operator("K"), inst.operators["K"])
    assert np.array_equal(back.frame("F").matrix, inst.frames["F"].matrix)
    assert back.generator == inst.generator


def test_encoding_uses_re_im_pairs():
    doc = json.loads(dumps(from_spec(InstanceSpec("shift", (2,), 2))))
    assert doc["operators"]["K"] == [[[0.0, 0.0], [0.0, 0.0]], [[1.0, 0.0], [0.0, 0.0]]]
    assert doc["frames"]["F"] == [[[0.0, 0.0], [1.0, 0.0]], [[0.0, 0.0], [0.0, 0.0]]]


def test_pair_references_resolve():
    inst = loads(dumps(from_spec(InstanceSpec("interleaved", (2, 2), 2))))
    assert inst.pair_refs["P"] == ("X", "Y")
    assert inst.pair("P").left is inst.frame("X")


@pytest.mark.parametrize("text,fragment", [
    ("{", "line 1"),
    ('{"field": "complex",\n "operators": {"K": [[[1, NaN]]]}}', "NaN"),
    ('{"field": "complex", "operators": {"K": [[[Infinity, 0]]]}}', "Infinity"),
    ('{"field": "complex", "operators": {"K": [[[1e400, 0]]]}}', "non-finite"),
    ('{"field": "real"}', "field field"),
    ('{"field": "complex", "operators": {"K": [[[1, 0, 0]]]}}', "operators.K.0.0"),
    ('{"field": "complex", "operators": {"K": [[[1, 0]], [[1, 0], [2, 0]]]}}', "operators.K[1]"),
    ('{"field": "complex", "frames": {"F": [[[1, 0]]]}, "pairs": {"P": {"left": "F", "right": "G"}}}',
     "pairs.P.right"),
    ('{"field": "complex", "frames": {"F": [[[1, 0]]], "G": [[[1, 0]], [[1, 0]]]},'
     ' "pairs": {"P": {"left": "F", "right": "G"}}}', "counts"),
    ('{"field": "complex", "extra": 1}', "extra"),
    ('{"field": "complex", "tolerance": {"rank_rel": -1}}', "tolerance"),
])
def test_malformed_inputs_are_rejected(text, fragment):
    with pytest.raises(InstanceFileError) as info:
        loads(text)
    assert fragment in str(info.value)


def test_tolerance_override():
    inst = loads('{"field": "complex", "tolerance": {"rank_rel": 1e-6}}')
    assert inst.tolerance.rank_rel == 1e-6 and inst.tolerance.psd_rel == 1e-9
    assert '"tolerance"' in dumps(inst)


def test_missing_names_are_reported():
    inst = loads('{"field": "complex"}')
    with pytest.raises(InstanceFileError, match="operators"):
        inst.operator("K")


def test_shipped_schema_matches_docs_copy():
    docs = Path(__file__).resolve().parents[1] / "docs" / "instance.schema.json"
    assert json.loads(docs.read_text()) == SCHEMA
