import sys
from importlib import resources
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from tiger2 import parse_tiger2  # noqa: E402

DATA = resources.files("tiger2") / "data"


def data_bytes(name: str) -> bytes:
    return (DATA / name).read_bytes()


@pytest.fixture(scope="session")
def wallpaper_bytes():
    return data_bytes("wallpaper.xml")


@pytest.fixture(scope="session")
def wallpaper(wallpaper_bytes):
    corpus, diags = parse_tiger2(wallpaper_bytes)
    return corpus


@pytest.fixture(scope="session")
def wallpaper_graph(wallpaper):
    return wallpaper.segments[0].graphs[0]


@pytest.fixture(scope="session")
def tokens_bytes():
    return data_bytes("tokens.xml")


@pytest.fixture(scope="session")
def tueba_tigerxml():
    return data_bytes("tueba_s2.tiger.xml")


@pytest.fixture(scope="session")
def tueba_tiger2():
    return data_bytes("tueba_s2.tiger2.xml")


@pytest.fixture
def data_dir(tmp_path, wallpaper_bytes, tokens_bytes):
    """wallpaper.xml next to the token document its corresp links point at."""
    (tmp_path / "wallpaper.xml").write_bytes(wallpaper_bytes)
    (tmp_path / "tokens.xml").write_bytes(tokens_bytes)
    return tmp_path


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for _, _, line in sorted(results):
        terminalreporter.write_line(line)
