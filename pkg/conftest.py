import pytest

from hydrogen_vpt.config import load_settings
from hydrogen_vpt.telemetry import EventRecorder, set_default_recorder


@pytest.fixture
def event_recorder():
    """Install a fresh default recorder for the duration of a test."""
    recorder = EventRecorder()
    set_default_recorder(recorder)
    yield recorder
    set_default_recorder(None)


@pytest.fixture
def fresh_settings():
    """Clear the cached settings so environment overrides are re-read."""
    load_settings.cache_clear()
    yield
    load_settings.cache_clear()
