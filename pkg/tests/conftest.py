import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from indicards.recommend import default_rules


@pytest.fixture(scope="session")
def rules():
    return default_rules()


@pytest.fixture()
def client(tmp_path):
    from fastapi.testclient import TestClient

    from indicards.api import create_app

    app = create_app(tmp_path / "data")
    with TestClient(app) as c:
        yield c
