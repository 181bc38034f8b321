import json
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from spineflow import ModelFlowSpec, spec_from_json

FIXTURES = Path(__file__).parent / "fixtures"


def load_spec(name: str) -> ModelFlowSpec:
    with open(FIXTURES / name) as handle:
        return spec_from_json(json.load(handle))


@pytest.fixture
def banana_spec() -> ModelFlowSpec:
    return load_spec("banana_spec.json")


@pytest.fixture
def twisted_spec() -> ModelFlowSpec:
    return load_spec("banana_spec_twisted.json")


@pytest.fixture
def necklace_spec() -> ModelFlowSpec:
    return load_spec("necklace_spec.json")


@pytest.fixture(scope="session")
def census_specs():
    from spineflow import spec_census
    return spec_census(max_pieces=2, max_edges=4)


@pytest.fixture(scope="session")
def census_spines():
    from spineflow import spine_census
    return spine_census(4)
