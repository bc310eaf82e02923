import functools
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from hypertope import GeneratedGroup, Presentation, build_paper_presentation  # noqa: E402


@functools.lru_cache(maxsize=None)
def family(kind, **params):
    return GeneratedGroup.from_presentation(build_paper_presentation(kind, **params))


@functools.lru_cache(maxsize=None)
def g_group(n, s, t, l):
    return family("G", n=n, s=s, t=t, l=l)


C2_CUBED = Presentation.from_strings(
    ["r0", "r1", "r2"], ["r0^2", "r1^2", "r2^2", "(r0 r1)^2", "(r1 r2)^2", "(r0 r2)^2"])


@pytest.fixture(scope="session")
def g10():
    return g_group(10, 2, 2, 2)


@pytest.fixture(scope="session")
def m1b2():
    return family("M1", b=2)


@pytest.fixture(scope="session")
def c2cubed():
    return GeneratedGroup.from_presentation(C2_CUBED)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])
