import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from svtcp.tensor import DenseTensor  # noqa: E402


def random_tensor(rng, n, m, scale=1.0):
    return DenseTensor(scale * rng.standard_normal((n,) * m))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
