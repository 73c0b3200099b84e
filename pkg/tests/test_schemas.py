"""The shipped schema files accept exactly what the package emits."""

import json
from pathlib import Path

import jsonschema
import pytest

from satsys.covers import iter_saturated_covers
from satsys.grid import GridShape
from satsys.modular import realize
from satsys.transfer import iter_saturated_systems, iter_transfer_systems

SCHEMA_DIR = Path(__file__).resolve().parent.parent / "schemas"


def validator_for(name):
    schema = json.loads((SCHEMA_DIR / name).read_text())
    return jsonschema.Draft202012Validator(schema)


def test_schema_files_are_well_formed():
    names = {p.name for p in SCHEMA_DIR.glob("*.schema.json")}
    assert names == {
        "transfer_system.schema.json",
        "saturated_cover.schema.json",
        "realization_certificate.schema.json",
    }
    for name in names:
        schema = json.loads((SCHEMA_DIR / name).read_text())
        jsonschema.Draft202012Validator.check_schema(schema)


def test_every_transfer_system_document_validates():
    validator = validator_for("transfer_system.schema.json")
    for system in iter_transfer_systems(GridShape(2, 1)):
        validator.validate(json.loads(system.to_json()))


def test_every_cover_document_validates():
    validator = validator_for("saturated_cover.schema.json")
    for cover in iter_saturated_covers(GridShape(2, 2)):
        validator.validate(json.loads(cover.to_json()))


def test_certificate_documents_validate():
    validator = validator_for("realization_certificate.schema.json")
    for target in iter_saturated_systems(GridShape(1, 1)):
        cert = realize(target, 5, 7)
        validator.validate(json.loads(cert.to_json()))


def test_malformed_documents_are_rejected():
    systems = validator_for("transfer_system.schema.json")
    covers = validator_for("saturated_cover.schema.json")
    certificates = validator_for("realization_certificate.schema.json")
    for validator, bad in (
        (systems, {"m": 1, "n": 1}),
        (systems, {"m": 1, "n": 1, "relations": [[[0], [1, 1]]]}),
        (systems, {"m": 1, "n": 1, "relations": [], "extra": 0}),
        (systems, {"m": -1, "n": 1, "relations": []}),
        (covers, {"m": 1, "n": 1, "horizontal": [[0, 1, 2]], "vertical": []}),
        (covers, {"m": 1, "n": 1, "horizontal": [0], "vertical": []}),
        (certificates, {"p": 5, "q": 7, "n": 0}),
    ):
        with pytest.raises(jsonschema.ValidationError):
            validator.validate(bad)


def test_certificate_schema_pins_verified_true():
    validator = validator_for("realization_certificate.schema.json")
    cert = realize(next(iter_saturated_systems(GridShape(1, 1))), 5, 7)
    doc = json.loads(cert.to_json())
    doc["verified"] = False
    with pytest.raises(jsonschema.ValidationError):
        validator.validate(doc)
