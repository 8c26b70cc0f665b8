from __future__ import annotations

import sys
from pathlib import Path

import pytest

DATA_DIR = Path(__file__).parent / "data"

# Make the sibling generators module importable regardless of rootdir.
sys.path.insert(0, str(Path(__file__).parent))


@pytest.fixture(scope="session")
def golden_bytes() -> bytes:
    return (DATA_DIR / "golden.mid").read_bytes()
