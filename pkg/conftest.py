import os

import numpy as np
import pytest

from config import Config


@pytest.fixture
def data_file():
    def path(name: str) -> str:
        return os.path.join(Config.DATA_DIR, name)
    return path


@pytest.fixture
def rng():
    return np.random.default_rng(Config.DEFAULT_SEED)
