import pathlib

import pytest

ROOT = pathlib.Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"


@pytest.fixture(scope="session")
def java_fixture_dir() -> pathlib.Path:
    return FIXTURES / "java"


@pytest.fixture(scope="session")
def program_fixture_dir() -> pathlib.Path:
    return FIXTURES / "programs"


@pytest.fixture(scope="session")
def list_fixture_dir() -> pathlib.Path:
    return FIXTURES / "lists"
