from __future__ import annotations

import pytest
from hypothesis import settings

from levelone import InvolutionSpec, LieType, build_affine_datum

settings.register_profile("levelone", deadline=None, max_examples=40)
settings.load_profile("levelone")

ACCEPTANCE_LINES: list[str] = []


def datum(algebra: str, sigma: str | None = None, k: int = 2):
    t = LieType.parse(algebra)
    if sigma is None:
        return build_affine_datum(t, InvolutionSpec.at_node(t.rank + 1, 0, 2))
    return build_affine_datum(t, InvolutionSpec.parse(sigma, k))


@pytest.fixture(scope="session")
def make_datum():
    return datum


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
