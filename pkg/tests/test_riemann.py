import numpy as np
import pytest

from app.errors import PlaneDegeneracyError, UsageError
from app.geometry.riemann import AffineConnection, codifferential, levi_civita, sectional_curvature
from app.geometry.tensors import LOWER, TensorField
from app.models.manifold import BASEPOINT


def test_flat_chart_has_vanishing_christoffels(flat, points):
    s = flat.structure
    r31, _ = s.curvature
    for p in points("flat-pac", 4):
        assert np.allclose(s.levi_civita.coefficients.evaluate(p), 0.0)
        assert np.allclose(r31.evaluate(p), 0.0)


def test_levi_civita_is_metric_and_torsion_free(heis, points):
    s = heis.structure
    connection = levi_civita(s.g)
    nabla_g = connection.covariant_derivative(s.g)
    for p in points("heis-para", 4):
        assert np.allclose(nabla_g.evaluate(p), 0.0, atol=1e-12)
        assert np.allclose(connection.torsion().evaluate(p), 0.0, atol=1e-12)


@pytest.mark.parametrize("entry_id", ["heis-para", "solv-para", "twisted-pac"])
def test_curvature_symmetries(entry, points, entry_id):
    _, r4 = entry(entry_id).structure.curvature
    for p in points(entry_id, 3):
        r = r4.evaluate(p)
        assert np.allclose(r, -r.transpose(1, 0, 2, 3), atol=1e-9)
        assert np.allclose(r, -r.transpose(0, 1, 3, 2), atol=1e-9)
        assert np.allclose(r, r.transpose(2, 3, 0, 1), atol=1e-9)
        cyclic = r + r.transpose(1, 2, 0, 3) + r.transpose(2, 0, 1, 3)
        assert np.allclose(cyclic, 0.0, atol=1e-9)


def test_heisenberg_frame_sectional_curvature(heis_frame):
    s = heis_frame.structure
    _, r4 = s.curvature
    e1, e2 = np.eye(3)[0], np.eye(3)[1]
    assert sectional_curvature(s.g, r4, e1, e2, BASEPOINT) == pytest.approx(3.0)


def test_null_plane_is_rejected(heis_frame):
    s = heis_frame.structure
    _, r4 = s.curvature
    null = np.array([1.0, 1.0, 0.0])
    with pytest.raises(PlaneDegeneracyError):
        sectional_curvature(s.g, r4, null, np.array([0.0, 0.0, 1.0]), BASEPOINT)


@pytest.mark.parametrize(
    "entry_id, a, b, scal",
    [
        ("heis-para", 2.0, -4.0, 2.0),
        ("heis-para-frame", 2.0, -4.0, 2.0),
        ("heis-para-5", 2.0, -6.0, 4.0),
        ("sl2-para", 0.0, -2.0, -2.0),
    ],
)
def test_eta_einstein_ricci(entry, points, entry_id, a, b, scal):
    s = entry(entry_id).structure
    ric, scalar = s.ricci
    for p in points(entry_id, 3):
        eta = s.eta.evaluate(p)
        assert np.allclose(ric.evaluate(p), a * s.g.evaluate(p) + b * np.outer(eta, eta), atol=1e-8)
        assert scalar.value(p) == pytest.approx(scal, abs=1e-8)


def test_solvable_ricci_along_reeb(solv):
    s = solv.structure
    ric, _ = s.ricci
    xi = s.xi.evaluate(BASEPOINT)
    assert xi @ ric.evaluate(BASEPOINT) @ xi == pytest.approx(-4.0)


def test_codifferential_of_eta_vanishes_on_heisenberg(heis, points):
    s = heis.structure
    delta = codifferential(s.g, s.eta)
    for p in points("heis-para", 4):
        assert delta.value(p) == pytest.approx(0.0, abs=1e-12)


def test_connection_coefficients_need_connection_slots(flat):
    bad = TensorField.constant(flat.manifold, (LOWER,) * 3, np.zeros((3, 3, 3)))
    with pytest.raises(UsageError):
        AffineConnection(bad)
