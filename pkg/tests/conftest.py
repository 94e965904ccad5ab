import numpy as np
import pytest

from riesz_lab import DirichletSeries, make_frequency, table

_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def report():
    """Record one summary line per acceptance criterion."""

    def _report(number: int, title: str, passed: bool, detail: str, seconds: float):
        line = f"[{'PASS' if passed else 'FAIL'}] criterion {number:2d} {title}: {detail} ({seconds:.2f} s)"
        print(line)
        _ACCEPTANCE_LINES.append(line)

    return _report


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES, key=lambda s: int(s.split()[2])):
            terminalreporter.write_line(line)


def random_finite_series(rng: np.random.Generator, n_terms: int = 6, lam_max: float = 5.0,
                         zero_first: bool = False) -> DirichletSeries:
    lam = np.sort(rng.uniform(0.2, lam_max, n_terms))
    lam = lam[np.concatenate([[True], np.diff(lam) > 1e-3])]
    if zero_first:
        lam[0] = 0.0
    a = rng.normal(size=len(lam)) + 1j * rng.normal(size=len(lam))
    return DirichletSeries(make_frequency(lam), table(a))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
