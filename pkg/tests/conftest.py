import numpy as np
import pytest

from casimir_piston import backend


@pytest.fixture(scope="session", autouse=True)
def _report_backend():
    print(f"\n[kernel backend: {backend.active_name()}]")


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
