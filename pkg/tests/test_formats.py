import json
from pathlib import Path

import pytest
from jsonschema import Draft202012Validator
from referencing import Registry, Resource

from fubinilab import convspace as cs
from fubinilab import convvect as cv
from fubinilab.harness import SuiteConfig, run_suite

SCHEMAS = Path(__file__).resolve().parent.parent / "docs" / "schemas"


@pytest.fixture(scope="module")
def validators():
    docs = {p.name: json.loads(p.read_text()) for p in SCHEMAS.glob("*.json")}
    registry = Registry().with_resources((name, Resource.from_contents(d)) for name, d in docs.items())
    return {name[:-5]: Draft202012Validator(d, registry=registry) for name, d in docs.items()}


def test_schemas_are_valid(validators):
    assert set(validators) == {"convspace", "convvect", "fubini_report"}
    for v in validators.values():
        Draft202012Validator.check_schema(v.schema)


def test_spaces_match_schema(validators, small_spaces, axioms):
    for x in small_spaces[axioms]:
        validators["convspace"].validate(cs.to_json(x))


def test_vector_spaces_match_schema(validators, small_vects, axioms):
    for e in small_vects[axioms]:
        validators["convvect"].validate(cv.to_json(e))


def test_report_lines_match_schema(validators, tmp_path):
    path = tmp_path / "r.jsonl"
    run_suite(SuiteConfig(max_size=1, suites=("fubini", "oracle"), oracle_instances=4)).dump(str(path), include_timing=True)
    lines = path.read_text().splitlines()
    for line in lines:
        validators["fubini_report"].validate(json.loads(line))
    assert json.loads(lines[-1])["kind"] == "summary"


def test_schema_rejects_malformed(validators):
    assert not validators["convspace"].is_valid({"points": 2})
    assert not validators["convspace"].is_valid({"points": 1, "conv": [[0]]})
    assert not validators["fubini_report"].is_valid({"kind": "instance"})
