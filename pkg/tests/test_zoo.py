import numpy as np
import pytest
from pydantic import ValidationError

from app.errors import UnknownEntryError
from app.geometry.tensors import LOWER
from app.models.manifold import Backend, Manifold
from app.zoo.registry import frame_at, get_entry, list_entries, to_frame


def test_entry_ids():
    assert list_entries() == [
        "flat-pac",
        "heis-para",
        "heis-para-5",
        "heis-para-frame",
        "sl2-para",
        "solv-para",
        "twisted-pac",
    ]


def test_unknown_entry():
    with pytest.raises(UnknownEntryError):
        get_entry("sphere")
    with pytest.raises(KeyError):
        get_entry("sphere")


def test_entries_are_built_once():
    assert get_entry("heis-para") is get_entry("heis-para")


def test_backends_and_twins(heis, heis_frame):
    assert heis.manifold.backend == Backend.COORDINATE_CHART
    assert heis_frame.manifold.backend == Backend.HOMOGENEOUS_FRAME
    assert heis.frame_twin == "heis-para-frame"
    assert get_entry("twisted-pac").manifold.dim == 5


def test_heisenberg_metric_in_its_frame(heis, points):
    for p in points("heis-para", 3):
        frame = frame_at(heis, p)
        g = to_frame(heis.structure.g.evaluate(p), (LOWER, LOWER), frame)
        assert np.allclose(g, np.diag([0.5, -0.5, 1.0]))


def test_even_dimension_is_rejected():
    with pytest.raises(ValidationError):
        Manifold.chart("plane", [(-1.0, 1.0)] * 4)


def test_structure_constants_must_satisfy_jacobi():
    c = np.zeros((3, 3, 3))
    # [e0, e1] = e2 and [e1, e2] = e1 leave a Jacobiator of -e2
    c[2, 0, 1], c[2, 1, 0] = 1.0, -1.0
    c[1, 1, 2], c[1, 2, 1] = 1.0, -1.0
    with pytest.raises(ValidationError):
        Manifold.frame("broken", c)
