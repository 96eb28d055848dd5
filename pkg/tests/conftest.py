import pytest

import kempner_lab as kl
from kempner_lab.config import parse_dict
from kempner_lab.presets import preset_config


def constraint_from_preset(name: str, params: dict | None = None):
    return parse_dict(preset_config(name, params)).constraint


@pytest.fixture
def kempner10():
    return constraint_from_preset("kempner10")


@pytest.fixture
def power2_no_zero():
    return constraint_from_preset("power2-no-zero")


@pytest.fixture
def div_log():
    return constraint_from_preset("div-log")


@pytest.fixture
def open_boundary():
    return constraint_from_preset("open-boundary")


@pytest.fixture
def full_forbidden_base10():
    """Every nonzero digit forbidden everywhere: a finite (empty) member set."""
    return kl.make_constraint(kl.constant(10), kl.AllIndices(), default=set(range(1, 10)))
