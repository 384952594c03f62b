import json
from pathlib import Path

import pytest

SCHEMA_DIR = Path(__file__).resolve().parents[1] / "docs" / "schemas"

# Members r_0 .. r_15 of I4 as printed (MSB-first).
I4_TABLE = [
    "0001000100011110", "0010001000101101", "0100010001001011", "1000100010000111",
    "0001000111100001", "0010001011010010", "0100010010110100", "1000100001111000",
    "0001111000010001", "0010110100100010", "0100101101000100", "1000011110001000",
    "1110000100010001", "1101001000100010", "1011010001000100", "0111100010001000",
]

# Sign pattern of the printed 16x16 C_{I4}; every entry has magnitude 1/4.
CI4_SIGNS = [
    "+----+++-+++-+++",
    "-+--+-+++-+++-++",
    "--+-++-+++-+++-+",
    "---++++-+++-+++-",
    "-++++----+++-+++",
    "+-++-+--+-+++-++",
    "++-+--+-++-+++-+",
    "+++----++++-+++-",
    "-+++-++++----+++",
    "+-+++-++-+--+-++",
    "++-+++-+--+-++-+",
    "+++-+++----++++-",
    "-+++-+++-++++---",
    "+-+++-+++-++-+--",
    "++-+++-+++-+--+-",
    "+++-+++-+++----+",
]

_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance_report():
    return _ACCEPTANCE_LINES.append


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def schema_store():
    return {p.name: json.loads(p.read_text()) for p in SCHEMA_DIR.glob("*.json")}


@pytest.fixture(scope="session")
def validate(schema_store):
    jsonschema = pytest.importorskip("jsonschema")
    from referencing import Registry, Resource

    registry = Registry().with_resources(
        (name, Resource.from_contents(schema)) for name, schema in schema_store.items()
    )

    def _validate(instance, name):
        jsonschema.Draft202012Validator(schema_store[name], registry=registry).validate(instance)

    return _validate
