from functools import lru_cache

import pytest
from hypothesis import settings

from anosovkit import build_flag_configuration, generate_weyl_group

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

ACCEPTANCE_LINES: dict[int, str] = {}


@lru_cache(maxsize=None)
def group(t: str):
    return generate_weyl_group(t)


def config(t: str, pa="", pd="", **kw):
    return build_flag_configuration(group(t), pa, pd, **kw)


@pytest.fixture
def W():
    return group


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
