"""Shared fixtures: pathway/query loaders and compiled fixture nets."""

from pathlib import Path

import pytest

from pathway.compiler import compile_pathway
from pathway.parser import parse_pathway
from query.parser import parse_query
from util.settings import get_settings

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"
GOLDEN = Path(__file__).resolve().parent / "golden"


def fixture_path(name: str) -> Path:
    return FIXTURES / name


def load_spec(name: str):
    return parse_pathway(fixture_path(name).read_text(encoding="utf-8"))


def load_query(name: str):
    return parse_query(fixture_path(name).read_text(encoding="utf-8"))


@pytest.fixture(autouse=True)
def fresh_settings():
    """Settings are cached per process; tests that patch the env need a clean read."""
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def glycolysis_spec():
    return load_spec("glycolysis.pw")


@pytest.fixture
def glycolysis_net(glycolysis_spec):
    return compile_pathway(glycolysis_spec)


@pytest.fixture
def etc_net():
    """Electron transport chain: locational fluents, so a colored net."""
    return compile_pathway(load_spec("electron_transport.pw"))
