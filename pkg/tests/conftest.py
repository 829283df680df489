import os

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

HEAVY = os.environ.get("CHEV_HEAVY", "") not in ("", "0")


def pytest_collection_modifyitems(config, items):
    if HEAVY:
        return
    skip = pytest.mark.skip(reason="set CHEV_HEAVY=1 to run E-series closure")
    for item in items:
        if "heavy" in item.keywords:
            item.add_marker(skip)
