import pytest

from efron_dual import kernels


@pytest.fixture(scope="session")
def compiled():
    if "cython" not in kernels.BACKENDS:
        pytest.skip("compiled core not built")
    return kernels.BACKENDS["cython"]


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
