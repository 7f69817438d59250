import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from contest_eq import normal_model, solve_benchmark, solve_exclusion


@pytest.fixture(scope="session")
def model_v30():
    return normal_model(0.0, 1.0, 2.0, reject_cost=1.0, win_value=30.0,
                        budget=0.1, discount=0.97)


@pytest.fixture(scope="session")
def model_v50():
    return normal_model(0.0, 2.0, 5.0, reject_cost=1.0, win_value=50.0,
                        budget=0.1, discount=0.97)


@pytest.fixture(scope="session")
def model_v20():
    return normal_model(0.0, 1.0, 1.0, reject_cost=1.0, win_value=20.0,
                        budget=0.1, discount=0.85)


@pytest.fixture(scope="session")
def v50_benchmark(model_v50):
    return solve_benchmark(model_v50)


@pytest.fixture(scope="session")
def v50_exclusion(model_v50):
    return solve_exclusion(model_v50)
