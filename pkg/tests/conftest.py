from __future__ import annotations

import pytest
from hypothesis import HealthCheck, settings

from leeyang.graphs import MultiGraph

settings.register_profile("repo", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")


@pytest.fixture
def edge():
    return MultiGraph(2, ((0, 1, 1),))
