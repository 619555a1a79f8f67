import contextlib
import time
from pathlib import Path

import numpy as np
import pytest

from neqr_grover import GrayImage, ThresholdConfig

from helpers import ENCODE_PIXELS, SEARCH_ROWS

DATA = Path(__file__).resolve().parent.parent / "data"


@pytest.fixture
def encode_image():
    return GrayImage.from_pixels(ENCODE_PIXELS)


@pytest.fixture
def search_image():
    return GrayImage.from_rows(SEARCH_ROWS)


@pytest.fixture
def threshold100():
    return ThresholdConfig(100)


@pytest.fixture
def rng():
    return np.random.default_rng(20261018)


@pytest.fixture
def data_dir():
    return DATA


# Acceptance criteria report their verdicts here; printed in the summary.
ACCEPTANCE_LINES: list[str] = []
_SESSION_START = time.perf_counter()


@pytest.fixture
def criterion():
    """Context manager recording one PASS/FAIL line per acceptance criterion."""

    @contextlib.contextmanager
    def check(label):
        start = time.perf_counter()
        try:
            yield
        except BaseException as exc:
            line = f"FAIL  {label}  ({type(exc).__name__}: {str(exc).splitlines()[0] if str(exc) else ''})"
            ACCEPTANCE_LINES.append(line)
            print(line)
            raise
        line = f"PASS  {label}  [{time.perf_counter() - start:.2f}s]"
        ACCEPTANCE_LINES.append(line)
        print(line)

    return check


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
        elapsed = time.perf_counter() - _SESSION_START
        terminalreporter.write_line(f"session wall time {elapsed:.1f}s (budget 60s)")
