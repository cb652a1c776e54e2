import numpy as np
import pytest

from app.errors import ConstructionError, StructureRejectedError
from app.geometry.paracontact import (
    basis_phi_trace,
    build_compatible_metric,
    build_phi_basis,
    classify,
    compute_h,
    covariant_derivative_phi_checks,
    fit_eta_einstein,
    p_norms,
    phi_trace,
    squared_norm,
    structure_norms,
    validate_structure,
)
from app.geometry.tensors import LOWER, TensorField
from app.models.manifold import BASEPOINT
from app.utils.sampling import default_tolerance
from app.zoo.registry import list_entries


@pytest.mark.parametrize("entry_id", list_entries())
def test_every_entry_satisfies_the_axioms(entry, points, entry_id):
    e = entry(entry_id)
    report = validate_structure(e.structure, points(entry_id))
    assert report.max_residual < default_tolerance(e.manifold)
    assert report.signature == (e.structure.n + 1, e.structure.n)


@pytest.mark.parametrize("entry_id", list_entries())
def test_classification_matches_the_zoo(entry, points, entry_id):
    e = entry(entry_id)
    report = classify(e.structure, points(entry_id), default_tolerance(e.manifold))
    assert report.flag_values() == {flag.value: value for flag, value in e.expected.items()}


def test_wrong_signature_is_rejected(flat):
    s = flat.structure.with_metric(TensorField.constant(flat.manifold, (LOWER, LOWER), np.eye(3), name="euclid"))
    with pytest.raises(StructureRejectedError):
        validate_structure(s, [flat.manifold.point(0.0, 0.0, 0.0)])


def test_compatible_metric_on_flat_chart(flat, points):
    big_g = TensorField.constant(flat.manifold, (LOWER, LOWER), np.diag([2.0, 1.0, 1.0]), name="G")
    sample = points("flat-pac", 4)
    g = build_compatible_metric(flat.structure, big_g, sample)
    for p in sample:
        assert np.allclose(g.evaluate(p), np.diag([0.5, -0.5, 1.0]))


def test_compatible_metric_on_heisenberg_is_valid(heis, points):
    big_g = TensorField.constant(heis.manifold, (LOWER, LOWER), np.diag([2.0, 1.0, 1.0]), name="G")
    sample = points("heis-para", 4)
    s = heis.structure.with_metric(build_compatible_metric(heis.structure, big_g, sample))
    assert validate_structure(s, sample).max_residual < 1e-9


def test_euclidean_seed_metric_degenerates(flat):
    big_g = TensorField.constant(flat.manifold, (LOWER, LOWER), np.eye(3), name="euclid")
    with pytest.raises(ConstructionError):
        build_compatible_metric(flat.structure, big_g, [flat.manifold.point(0.1, 0.2, 0.3)])


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_phi_basis_is_pseudo_orthonormal(heis, seed):
    point = heis.manifold.point(0.2, -0.4, 0.3)
    basis = build_phi_basis(heis.structure, point, seed=seed)
    g = heis.structure.g.evaluate(point)
    assert np.allclose(basis.gram(g), np.diag(basis.signs), atol=1e-10)


def test_signed_trace_does_not_depend_on_the_basis(heis, rng):
    s = heis.structure
    point = heis.manifold.point(-0.3, 0.6, 0.0)
    v = s.at(point)
    b = rng.standard_normal((3, 3))
    expected = phi_trace(v.g_inv, v.phi, b)
    for seed in (3, 4):
        basis = build_phi_basis(s, point, seed=seed)
        assert basis_phi_trace(basis, v.phi, b) == pytest.approx(float(expected), abs=1e-10)


def test_solvable_norms(solv):
    norms = p_norms(solv.structure, BASEPOINT)
    assert norms.h_squared == pytest.approx(-2.0)
    assert norms.p_squared == pytest.approx(-4.0)
    assert norms.grad_phi_squared == pytest.approx(0.0, abs=1e-12)
    assert structure_norms(solv.structure, [BASEPOINT]).scal_star == pytest.approx(-8.0)


def test_h_on_the_solvable_group(solv):
    s = solv.structure
    h, h_low = compute_h(s)
    v = s.at(BASEPOINT)
    a, a_low = h.evaluate(BASEPOINT), h_low.evaluate(BASEPOINT)
    assert np.allclose(a_low, a_low.T, atol=1e-12)
    assert np.allclose(a @ v.phi, -v.phi @ a, atol=1e-12)
    assert np.trace(a) == pytest.approx(0.0, abs=1e-12)
    assert np.allclose(a @ v.xi, 0.0, atol=1e-12)
    assert squared_norm(v.g_inv, a_low) == pytest.approx(-2.0)


def test_h_vanishes_on_heisenberg(heis, points):
    h, _ = compute_h(heis.structure)
    for point in points("heis-para"):
        assert np.allclose(h.evaluate(point), 0.0, atol=1e-10)


def test_heisenberg_frame_star_scalar(heis_frame):
    _, scal_star = heis_frame.structure.star_ricci
    assert scal_star.value(BASEPOINT) == pytest.approx(-6.0)


@pytest.mark.parametrize("entry_id", ["heis-para", "heis-para-5"])
def test_parasasakian_nabla_phi(entry, points, rng, entry_id):
    s = entry(entry_id).structure
    nphi = s.nabla_phi
    for p in points(entry_id, 4):
        v = s.at(p)
        x, y = rng.standard_normal((2, s.dim))
        lhs = np.einsum("r,rki,i->k", x, nphi.evaluate(p), y)
        assert np.allclose(lhs + (x @ v.g @ y) * v.xi - (v.eta @ y) * x, 0.0, atol=1e-8)


def test_general_nabla_phi_formula_on_twisted_entry(entry, points, rng):
    s = entry("twisted-pac").structure
    worst = covariant_derivative_phi_checks(s, points("twisted-pac", 4), rng, paracontact=True)
    assert max(worst.values()) < 1e-7


def test_heisenberg_fit(heis_frame):
    fit = fit_eta_einstein(heis_frame.structure, [BASEPOINT])
    assert (fit.a, fit.b) == pytest.approx((2.0, -4.0))
    assert fit.residual == pytest.approx(0.0, abs=1e-12)
