import json
from pathlib import Path

import pytest
from hypothesis import settings

from masterfield.suites import fixture_dir, golden_fixtures

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

FIXTURES = fixture_dir()
POLYLINES = sorted((FIXTURES / "polylines").glob("*.json"))


def read_points(path: Path):
    return json.loads(path.read_text())


@pytest.fixture(scope="session")
def golden():
    return golden_fixtures()
