import random
import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[1]
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from src.kernel import GAUSS, prime_field  # noqa: E402


@pytest.fixture
def rng():
    return random.Random(7)


@pytest.fixture
def f5():
    return prime_field(5)


@pytest.fixture
def gauss():
    return GAUSS


@pytest.fixture
def schemas_dir():
    return ROOT / "schemas"
