import json
from pathlib import Path

import pytest

DATA_DIR = Path(__file__).parent / "data"
FIXTURE_DIR = DATA_DIR / "fixture"


@pytest.fixture(scope="session")
def semver_vectors():
    with open(DATA_DIR / "semver_vectors.json") as handle:
        return json.load(handle)


@pytest.fixture(scope="session")
def fixture_dir():
    return FIXTURE_DIR
