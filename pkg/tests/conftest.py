from datetime import datetime, timezone
from pathlib import Path

import pytest

from aicwb import engine
from aicwb.fixture import build_fixture

SHARED_DIR = Path(__file__).resolve().parent.parent / "shared"


def fixed_clock():
    return datetime(2026, 3, 1, 12, 0, 0, tzinfo=timezone.utc)


@pytest.fixture
def session():
    return engine.create_session("test-session", session_id="s1", clock=fixed_clock)


@pytest.fixture
def case_study():
    return build_fixture(session_id="casestudy", clock=fixed_clock)
