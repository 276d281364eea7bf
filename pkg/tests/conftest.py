import json
import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

from rp3kh import corpus  # noqa: E402
from rp3kh.laurent import parse_poly  # noqa: E402

FIXTURES = Path(__file__).parent / "fixtures"

settings.register_profile("repo", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")


@pytest.fixture(scope="session")
def p1knot():
    return corpus.bundled("p1knot")


@pytest.fixture(scope="session")
def goldens():
    raw = json.loads((FIXTURES / "p1knot_goldens.json").read_text())
    return {k: parse_poly(v) for k, v in raw.items()}


@pytest.fixture(scope="session")
def trefoil():
    return corpus.bundled("trefoil")
