import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from app.errors import UsageError
from app.geometry.tensors import (
    LOWER,
    UPPER,
    ScalarField,
    TensorField,
    evaluate,
    exterior_derivative,
    inverse_metric,
    lie_bracket,
    lie_derivative,
    metric_contract,
    symmetry_defect,
    wedge,
    wedge_interior,
)
from app.models.manifold import BASEPOINT, Manifold
from app.utils import jet as jets

inside = st.floats(min_value=-0.9, max_value=0.9, allow_nan=False, allow_infinity=False)

CHART = Manifold.chart("box", [(-1.0, 1.0)] * 3)


def test_d_eta_uses_the_half_convention(heis):
    point = heis.manifold.point(0.3, -0.2, 0.1)
    d_eta = exterior_derivative(heis.structure.eta).evaluate(point)
    expected = np.zeros((3, 3))
    expected[0, 1], expected[1, 0] = 0.5, -0.5
    assert np.allclose(d_eta, expected)


@given(inside, inside, inside)
@settings(max_examples=20, deadline=None)
def test_d_squared_vanishes_on_functions(x, y, z):
    f = ScalarField.from_formula(CHART, lambda v: jets.sin(v[0]) * jets.exp(v[1]) + v[2] * v[0], name="f")
    ddf = exterior_derivative(exterior_derivative(f))
    assert np.allclose(ddf.evaluate(CHART.point(x, y, z)), 0.0, atol=1e-12)


@pytest.mark.parametrize("entry_id", ["heis-para", "heis-para-5", "solv-para", "sl2-para"])
def test_d_squared_vanishes_on_d_eta(entry, points, entry_id):
    s = entry(entry_id).structure
    dd_eta = exterior_derivative(s.d_eta)
    for p in points(entry_id, 4):
        assert np.allclose(dd_eta.evaluate(p), 0.0, atol=1e-10)


def test_coordinate_bracket():
    x = TensorField.from_formula(CHART, (UPPER,), lambda v: [1.0, 0.0, 0.0], name="dx")
    y = TensorField.from_formula(CHART, (UPPER,), lambda v: [0.0, v[0], 0.0], name="x dy")
    bracket = lie_bracket(x, y).evaluate(CHART.point(0.2, 0.4, -0.1))
    assert np.allclose(bracket, [0.0, 1.0, 0.0])


def test_frame_bracket_uses_structure_constants(heis_frame):
    m = heis_frame.manifold
    e1 = TensorField.constant(m, (UPPER,), [1.0, 0.0, 0.0])
    e2 = TensorField.constant(m, (UPPER,), [0.0, 1.0, 0.0])
    assert np.allclose(lie_bracket(e1, e2).evaluate(BASEPOINT), [0.0, 0.0, -1.0])
    assert np.allclose(lie_bracket(e2, e1).evaluate(BASEPOINT), [0.0, 0.0, 1.0])


def test_reeb_field_is_killing_on_heisenberg(heis, points):
    s = heis.structure
    killing = lie_derivative(s.xi, s.g)
    for p in points("heis-para", 4):
        assert np.allclose(killing.evaluate(p), 0.0, atol=1e-12)


def test_wedge_of_eta_and_d_eta_is_alternating(heis):
    s = heis.structure
    value = wedge(s.eta, s.d_eta).evaluate(heis.manifold.point(0.1, 0.5, -0.3))
    assert symmetry_defect(value) == pytest.approx(0.0, abs=1e-12)
    assert value[0, 1, 2] == pytest.approx(0.5)


def test_inverse_of_a_constant_metric(flat):
    g = flat.structure.g
    assert np.allclose(inverse_metric(g).evaluate(flat.manifold.point(0.0, 0.0, 0.0)), np.diag([1.0, -1.0, 1.0]))


def test_four_forms_are_not_supported(entry):
    m = entry("heis-para-5").manifold
    omega = TensorField.constant(m, (LOWER,) * 4, np.zeros((5,) * 4), name="ω")
    with pytest.raises(UsageError):
        exterior_derivative(omega)


def test_fields_on_different_manifolds_do_not_mix(flat, heis):
    with pytest.raises(UsageError):
        lie_bracket(flat.structure.xi, heis.structure.xi)


def test_evaluate_matches_the_field(heis):
    point = heis.manifold.point(0.1, 0.7, -0.4)
    assert np.allclose(evaluate(heis.structure.eta, point), [-0.7, 0.0, 1.0])


def test_metric_contractions(heis):
    s = heis.structure
    point = heis.manifold.point(0.3, -0.5, 0.2)
    mixed = metric_contract(s.g, s.g, [("raise", 0)])
    assert mixed.kinds == (UPPER, LOWER)
    assert np.allclose(mixed.evaluate(point), np.eye(3))
    trace = metric_contract(s.g, s.g, [("trace", 0, 1)])
    assert float(trace.evaluate(point)) == pytest.approx(3.0)
    with pytest.raises(UsageError):
        metric_contract(s.g, s.g, [("lower", 0)])


def test_wedge_interior_dispatch(heis):
    s = heis.structure
    point = heis.manifold.point(-0.2, 0.3, 0.6)
    assert np.allclose(wedge_interior(s.xi, s.d_eta).evaluate(point), 0.0)
    assert np.allclose(wedge_interior(s.eta, s.d_eta).evaluate(point), wedge(s.eta, s.d_eta).evaluate(point))
    with pytest.raises(UsageError):
        wedge_interior(s.g, s.d_eta)


def test_point_cache_is_bounded(monkeypatch):
    monkeypatch.setattr("app.geometry.tensors.settings.field_cache_size", 4)
    field = TensorField.from_formula(CHART, (UPPER,), lambda v: [v[0], 0.0, 0.0], name="x dx")
    for i in range(10):
        x = -0.5 + 0.1 * i
        assert np.allclose(field.evaluate(CHART.point(x, 0.0, 0.0)), [x, 0.0, 0.0])
    assert len(field._cache) == 4
    assert np.allclose(field.evaluate(CHART.point(-0.5, 0.0, 0.0)), [-0.5, 0.0, 0.0])
