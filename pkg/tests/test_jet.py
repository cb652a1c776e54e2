import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from app.errors import DegeneracyError, UsageError
from app.utils import jet as jets
from app.utils.jet import Jet

coordinate = st.floats(min_value=-2.0, max_value=2.0, allow_nan=False, allow_infinity=False)


def test_variable_has_identity_gradient():
    x = Jet.variable([0.5, -1.0, 2.0], 2)
    assert np.allclose(x.grad().value, np.eye(3))
    assert np.allclose(x.dense(2), 0.0)


def test_product_rule_to_second_order():
    x = Jet.variable([2.0, 3.0], 2)
    f = x[0] * x[1]
    assert f.value == pytest.approx(6.0)
    assert np.allclose(f.coefficient(1), [3.0, 2.0])
    assert np.allclose(f.coefficient(2), [[0.0, 1.0], [1.0, 0.0]])


@given(coordinate)
@settings(max_examples=30, deadline=None)
def test_exp_derivatives_equal_its_value(t):
    u = jets.exp(Jet.variable([t], 3)[0])
    for k in range(4):
        assert np.allclose(u.dense(k), np.exp(t))


@given(coordinate, coordinate)
@settings(max_examples=30, deadline=None)
def test_pythagorean_identity_has_flat_jet(a, b):
    x = Jet.variable([a, b], 2)
    u = x[0] * x[1]
    total = jets.sin(u) * jets.sin(u) + jets.cos(u) * jets.cos(u)
    assert total.value == pytest.approx(1.0)
    assert np.allclose(total.coefficient(1), 0.0, atol=1e-9)
    assert np.allclose(total.coefficient(2), 0.0, atol=1e-9)


def test_matrix_inverse_derivative():
    x = Jet.variable([0.5], 1)
    m = jets.array([[1.0 + x[0], 0.0], [0.0, 2.0]], 1)
    inverse = m.inv()
    assert np.allclose(inverse.value, [[1 / 1.5, 0.0], [0.0, 0.5]])
    assert inverse.coefficient(1)[0, 0, 0] == pytest.approx(-1 / 1.5**2)
    assert inverse.coefficient(1)[0, 1, 1] == pytest.approx(0.0)


def test_constant_jets_have_infinite_order():
    c = Jet.constant(np.ones(3), 3)
    assert c.order == np.inf
    assert np.allclose(c.grad().value, 0.0)
    assert (c + Jet.variable([0.0, 0.0, 0.0], 1)).order == 1


def test_einsum_mixes_arrays_and_jets():
    x = Jet.variable([1.0, 2.0], 1)
    matrix = np.array([[1.0, 2.0], [3.0, 4.0]])
    result = jets.einsum("ij,j->i", matrix, x)
    assert np.allclose(result.value, [5.0, 11.0])
    assert np.allclose(result.coefficient(1), matrix.T)


def test_singular_inverse_is_degenerate():
    with pytest.raises(DegeneracyError):
        Jet.constant(np.zeros((2, 2)), 2).inv()


def test_reciprocal_of_zero_is_degenerate():
    with pytest.raises(DegeneracyError):
        jets.reciprocal(Jet.constant(0.0, 1))


def test_einsum_needs_an_explicit_output():
    with pytest.raises(UsageError):
        jets.einsum("ij,j", Jet.constant(np.eye(2), 2), np.ones(2))


def test_negative_powers_are_rejected():
    with pytest.raises(UsageError):
        Jet.variable([1.0], 1) ** -1
