import numpy as np
import pytest

from dcreid.imaging import ImageBuffer

RED = (255, 0, 0)
GREEN = (0, 255, 0)
BLACK = (0, 0, 0)


def solid(w, h, rgb):
    arr = np.empty((h, w, 3), dtype=np.uint8)
    arr[:] = rgb
    return ImageBuffer.from_array(arr)


def two_block(w=48, h=128, upper=RED, lower=GREEN, split=None):
    split = h // 2 if split is None else split
    arr = np.empty((h, w, 3), dtype=np.uint8)
    arr[:split] = upper
    arr[split:] = lower
    return ImageBuffer.from_array(arr)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
