import math

import numpy as np
import pytest

from app.errors import DegenerateScaleError, NotEtaEinsteinError, ParameterError, PositivityError, UsageError
from app.geometry.tensors import ScalarField
from app.geometry.transforms import (
    d_homothetic,
    einstein_coefficients,
    einsteinize,
    gauge_transform,
    sigma_preset,
    verify_laplacian_law,
    verify_w1_law,
)
from app.models.manifold import BASEPOINT
from app.models.transform import SigmaPreset
from app.utils.sampling import sample_points


def _interior(entry, count):
    return sample_points(entry.manifold, count, np.random.default_rng(3), shrink=0.25)


@pytest.mark.parametrize("alpha", [0.0, math.inf, math.nan])
def test_degenerate_homothety_parameters(heis, alpha):
    with pytest.raises(ParameterError):
        d_homothetic(heis.structure, alpha)


def test_homothety_scalar_law_on_sl2(sl2):
    _, scal = d_homothetic(sl2.structure, 3.0).ricci
    assert scal.value(BASEPOINT) == pytest.approx(2.0 / 3.0)


@pytest.mark.parametrize("alpha", [0.5, 2.0, 3.0])
def test_scal_equal_to_2n_is_a_fixed_point(heis_frame, alpha):
    _, scal = d_homothetic(heis_frame.structure, alpha).ricci
    assert scal.value(BASEPOINT) == pytest.approx(2.0)


def test_einsteinize_sl2(sl2):
    alpha, einstein = einsteinize(sl2.structure, [BASEPOINT])
    assert alpha == pytest.approx(0.5)
    ric, scal = einstein.ricci
    assert scal.value(BASEPOINT) == pytest.approx(-6.0)
    assert np.allclose(ric.evaluate(BASEPOINT), -2.0 * einstein.g.evaluate(BASEPOINT))


def test_einsteinize_rejects_scal_equal_to_2n(heis_frame):
    with pytest.raises(DegenerateScaleError):
        einsteinize(heis_frame.structure, [BASEPOINT])


def test_einsteinize_needs_eta_einstein(solv):
    with pytest.raises(NotEtaEinsteinError):
        einsteinize(solv.structure, [BASEPOINT])


def test_einstein_coefficients():
    assert einstein_coefficients(-2.0, 1) == pytest.approx((0.0, -2.0))
    assert einstein_coefficients(2.0, 1) == pytest.approx((2.0, -4.0))


def test_identity_gauge_changes_nothing(heis):
    s = heis.structure
    sample = _interior(heis, 3)
    gauged = gauge_transform(s, ScalarField.constant_value(heis.manifold, 1.0), sample)
    for p in sample:
        for left, right in ((gauged.phi, s.phi), (gauged.xi, s.xi), (gauged.eta, s.eta), (gauged.g, s.g)):
            assert np.allclose(left.evaluate(p), right.evaluate(p))


def test_gauge_needs_a_positive_function(heis):
    sigma = sigma_preset(heis.manifold, SigmaPreset.CONSTANT, epsilon=-1.5)
    with pytest.raises(PositivityError):
        gauge_transform(heis.structure, sigma, _interior(heis, 2))


def test_chart_presets_need_a_chart(heis_frame):
    with pytest.raises(UsageError):
        sigma_preset(heis_frame.manifold, SigmaPreset.EXP_BUMP)


@pytest.mark.parametrize("entry_id", ["heis-para", "heis-para-5"])
def test_w1_gauge_law(entry, entry_id):
    e = entry(entry_id)
    sigma = sigma_preset(e.manifold, SigmaPreset.EXP_BUMP)
    assert verify_w1_law(e.structure, sigma, _interior(e, 3)) < 1e-6


def test_laplacian_gauge_law(heis):
    sigma = sigma_preset(heis.manifold, SigmaPreset.EXP_LINEAR)
    f = ScalarField.from_formula(heis.manifold, lambda x: x[1] * x[1], name="y²")
    assert verify_laplacian_law(heis.structure, sigma, f, _interior(heis, 3)) < 1e-7
