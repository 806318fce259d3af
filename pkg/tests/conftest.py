import shutil
from pathlib import Path

import pytest

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def pisa_profile_path() -> Path:
    return FIXTURES / "pisa_report.pdf"


@pytest.fixture
def seeded_memory(tmp_path):
    """Long-term memory store seeded with the shape-factor fixture."""
    from geoagent.memory import MemoryStore

    path = tmp_path / "memory.json"
    shutil.copy(FIXTURES / "memory" / "longterm.json", path)
    return MemoryStore(path)
