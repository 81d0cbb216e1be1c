import pytest

from spectral_riesz import spectra

# Acceptance verdicts recorded by tests/test_acceptance.py, printed after the run.
VERDICTS = {}


def record(criterion, ok, detail=""):
    VERDICTS[criterion] = (bool(ok), detail)
    line = f"criterion {criterion}: {'PASS' if ok else 'FAIL'}" + (f"  ({detail})" if detail else "")
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if not VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(VERDICTS, key=lambda k: (int(str(k).rstrip("abcd")), str(k))):
        ok, detail = VERDICTS[key]
        terminalreporter.write_line(
            f"criterion {key}: {'PASS' if ok else 'FAIL'}" + (f"  ({detail})" if detail else "")
        )


@pytest.fixture(scope="session")
def square():
    return spectra.box_spectrum([1.0, 1.0], 4000.0)


@pytest.fixture(scope="session")
def disk():
    return spectra.ball_spectrum(2, 1.0, 600.0)
