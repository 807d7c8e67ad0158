import os
import sys

import pytest


REPO_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
SRC_DIR = os.path.join(REPO_ROOT, "src")
sys.path.insert(0, REPO_ROOT)
sys.path.insert(0, SRC_DIR)
# no log files from test runs
os.environ.setdefault("CWFA_LOG_TO_FILE", "0")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long stochastic reproductions, enabled by CWFA_RUN_SLOW=1")


def pytest_collection_modifyitems(config, items):
    if os.getenv("CWFA_RUN_SLOW", "").strip() in {"1", "true", "yes"}:
        return
    skip = pytest.mark.skip(reason="set CWFA_RUN_SLOW=1 to run")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


@pytest.fixture
def two_groups():
    from tests.helpers import separated_spec
    from skills.simulate.sampler import sample_dataset

    return sample_dataset(separated_spec(seed=3))
