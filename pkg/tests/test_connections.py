import numpy as np
import pytest

from app.config import settings
from app.errors import NotKillingError, NotSkewError, StructureRejectedError
from app.geometry.connections import (
    canonical_connection,
    canonical_torsion_formula,
    connection_curvature,
    rho_t_dt,
    skew_torsion_connection,
    uniqueness_margin,
)
from app.geometry.tensors import wedge
from app.models.manifold import BASEPOINT


@pytest.mark.parametrize("entry_id", ["heis-para", "solv-para", "twisted-pac"])
def test_canonical_connection_preserves_the_structure(entry, points, entry_id):
    s = entry(entry_id).structure
    sample = points(entry_id, 3)
    c = canonical_connection(s, sample)
    for tensor in (s.g, s.eta, s.xi):
        derivative = c.covariant_derivative(tensor)
        for p in sample:
            assert np.allclose(derivative.evaluate(p), 0.0, atol=1e-9)
    for p in sample:
        assert np.allclose(c.torsion.evaluate(p), canonical_torsion_formula(s).evaluate(p), atol=1e-9)


def test_canonical_connection_needs_paracontact(flat, points):
    with pytest.raises(StructureRejectedError):
        canonical_connection(flat.structure, points("flat-pac", 2))


@pytest.mark.parametrize("entry_id", ["heis-para-frame", "solv-para", "sl2-para"])
def test_w1_closed_form(entry, entry_id):
    s = entry(entry_id).structure
    ric, scal = s.ricci
    xi = s.xi.evaluate(BASEPOINT)
    curvature = connection_curvature(canonical_connection(s, [BASEPOINT]))
    expected = scal.value(BASEPOINT) - xi @ ric.evaluate(BASEPOINT) @ xi - 4 * s.n
    assert curvature.w1.value(BASEPOINT) == pytest.approx(expected, abs=1e-9)
    assert xi @ curvature.ricci.evaluate(BASEPOINT) @ xi == pytest.approx(0.0, abs=1e-9)


def test_heisenberg_w1_vanishes(heis_frame):
    curvature = connection_curvature(canonical_connection(heis_frame.structure, [BASEPOINT]))
    assert curvature.w1.value(BASEPOINT) == pytest.approx(0.0, abs=1e-9)


def test_skew_torsion_on_heisenberg(heis, points):
    s = heis.structure
    sample = points("heis-para", 3)
    c = skew_torsion_connection(s, sample)
    expected = wedge(s.eta, s.d_eta)
    for p in sample:
        assert np.allclose(c.torsion3.evaluate(p), 2.0 * expected.evaluate(p), atol=1e-9)
    for tensor in (s.g, s.eta, s.phi, c.torsion3):
        derivative = c.covariant_derivative(tensor)
        for p in sample:
            assert np.allclose(derivative.evaluate(p), 0.0, atol=1e-8)


def test_skew_connection_on_flat_chart_is_levi_civita(flat, points):
    s = flat.structure
    sample = points("flat-pac", 3)
    c = skew_torsion_connection(s, sample)
    for p in sample:
        assert np.allclose(c.coefficients.evaluate(p), s.levi_civita.coefficients.evaluate(p))


def test_skew_connection_needs_killing_reeb_field(solv):
    with pytest.raises(NotKillingError):
        skew_torsion_connection(solv.structure, [BASEPOINT])


def test_skew_connection_needs_skew_n1(entry, points):
    with pytest.raises(NotSkewError):
        skew_torsion_connection(entry("twisted-pac").structure, points("twisted-pac", 4))


def test_perturbed_torsion_breaks_parallelism(heis_frame, rng):
    c = skew_torsion_connection(heis_frame.structure, [BASEPOINT])
    assert uniqueness_margin(c, [BASEPOINT], rng) >= settings.perturbation_floor


@pytest.mark.parametrize("entry_id, factor", [("heis-para-frame", 0.0), ("heis-para-5", 8.0)])
def test_dt_is_a_multiple_of_the_fundamental_form(entry, points, entry_id, factor):
    s = entry(entry_id).structure
    sample = points(entry_id, 2)
    forms = rho_t_dt(skew_torsion_connection(s, sample))
    for p in sample:
        assert np.allclose(forms.dt.evaluate(p), factor * s.fundamental.evaluate(p), atol=1e-7)
