from typing import Callable, List

import numpy as np
import pytest

from app.models.manifold import Point
from app.utils.sampling import sample_points
from app.zoo.registry import ZooEntry, get_entry

SAMPLE_POINTS = 8


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(7)


@pytest.fixture
def entry() -> Callable[[str], ZooEntry]:
    return get_entry


@pytest.fixture
def points() -> Callable[..., List[Point]]:
    def sample(entry_id: str, count: int = SAMPLE_POINTS, seed: int = 42) -> List[Point]:
        return sample_points(get_entry(entry_id).manifold, count, np.random.default_rng(seed))

    return sample


@pytest.fixture
def heis() -> ZooEntry:
    return get_entry("heis-para")


@pytest.fixture
def heis_frame() -> ZooEntry:
    return get_entry("heis-para-frame")


@pytest.fixture
def flat() -> ZooEntry:
    return get_entry("flat-pac")


@pytest.fixture
def solv() -> ZooEntry:
    return get_entry("solv-para")


@pytest.fixture
def sl2() -> ZooEntry:
    return get_entry("sl2-para")
