import pytest
from hypothesis import settings

from ospmin.superpoly import ModelParams

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")

TRIPLES = [(4, 4, 1), (6, 4, 1), (3, 5, 0)]


@pytest.fixture(params=TRIPLES, ids=lambda t: "p%dq%dn%d" % t)
def params(request):
    return ModelParams(*request.param)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(RESULTS):
        title, ok, elapsed, detail = RESULTS[number]
        terminalreporter.write_line(f"criterion {number:2d} {'PASS' if ok else 'FAIL'} ({elapsed:.1f} s) {title}: {detail}")
