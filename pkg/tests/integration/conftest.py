import random

import pytest

from quintuple.service import VerificationService


@pytest.fixture(scope="module")
def service() -> VerificationService:
    return VerificationService(timing=False)


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240611)
