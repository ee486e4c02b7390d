import pytest
from fastapi.testclient import TestClient

from quintuple.main import app


@pytest.fixture
def app_client():
    with TestClient(app) as client:
        yield client
