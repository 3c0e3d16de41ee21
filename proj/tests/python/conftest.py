import os
import pathlib

import pytest

ROOT = pathlib.Path(__file__).resolve().parents[2]


@pytest.fixture(scope="session")
def cli():
    path = os.environ.get("RCBOUND_CLI", str(ROOT / "build" / "rcbound"))
    if not pathlib.Path(path).exists():
        pytest.skip("rcbound executable not built")
    return path


@pytest.fixture(scope="session")
def scenarios():
    return pathlib.Path(os.environ.get("RCBOUND_SCENARIOS", str(ROOT / "scenarios")))
