import numpy as np
import pytest
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from opwitness import config


@pytest.fixture(autouse=True)
def _restore_tolerances():
    previous = config.get_tolerances()
    yield
    config.reset_tolerances(previous)


def random_density(rng: np.random.Generator, d: int, rank: int | None = None) -> np.ndarray:
    rank = d if rank is None else rank
    g = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho)


def random_hermitian(rng: np.random.Generator, d: int) -> np.ndarray:
    z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return (z + z.conj().T) / 2


seeds = st.integers(min_value=0, max_value=2**32 - 1)
finite = st.floats(min_value=-10, max_value=10, allow_nan=False, allow_infinity=False)


def complex_matrices(d: int):
    return arrays(np.float64, (2, d, d), elements=finite).map(lambda a: a[0] + 1j * a[1])


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key, line in RESULTS.items():
        if key != "runtime":
            terminalreporter.write_line(line)
    if "runtime" in RESULTS:
        terminalreporter.write_line(RESULTS["runtime"])
