import numpy as np
import pytest

from w2bounds import SymMat2


def random_psd(rng, scale=3.0, rank=2):
    g = rng.normal(size=(2, rank)) * scale
    m = g @ g.T
    return SymMat2(m[0, 0], m[1, 1], 0.5 * (m[0, 1] + m[1, 0]))


def eig_sqrt(m):
    """Matrix square root by eigendecomposition (oracle)."""
    w, v = np.linalg.eigh(np.asarray(m, dtype=float))
    return (v * np.sqrt(np.clip(w, 0.0, None))) @ v.T


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# filled by test_acceptance.report(); printed once at the end of the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
