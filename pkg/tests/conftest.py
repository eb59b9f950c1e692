import os
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings

from normset.engine import Engine

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(scope="session")
def engine():
    return Engine(certify=True)


def F(p, q=1):
    return Fraction(p, q)
