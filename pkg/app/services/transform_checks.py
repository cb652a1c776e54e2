"""Gauge, D-homothety and Einstein-izing identities."""

from typing import Sequence

import numpy as np

from app.config import settings
from app.errors import DegenerateScaleError, ParameterError, PositivityError
from app.geometry.paracontact import PacStructure, classify, validate_structure
from app.geometry.riemann import levi_civita
from app.geometry.tensors import ScalarField, TensorField
from app.geometry.transforms import (
    d_homothetic,
    d_inner,
    d_laplacian,
    differential,
    einsteinize,
    eta_einstein_fit,
    gauge_data,
    gauge_transform,
    homothety_beta,
    reciprocal_field,
    sigma_preset,
    verify_laplacian_law,
    verify_w1_law,
    w1_field,
)
from app.models.manifold import Backend, Point
from app.models.report import StructureFlag
from app.models.transform import SigmaPreset
from app.services.check_registry import (
    CheckContext,
    CheckSkipped,
    Suite,
    all_of,
    difference_residual,
    max_abs,
    on_backend,
    register,
    requires,
    worst,
)

PARACONTACT = requires(StructureFlag.PARACONTACT)
K_PARACONTACT = requires(StructureFlag.K_PARACONTACT)
PARA_SASAKIAN = requires(StructureFlag.PARA_SASAKIAN)
CHART_GAUGE = all_of(PARACONTACT, on_backend(Backend.COORDINATE_CHART))

ALPHAS = (0.5, 2.0, 3.0)


def _structure_residual(left: PacStructure, right: PacStructure, points: Sequence[Point]) -> float:
    return max(
        difference_residual(left.phi, right.phi, points),
        difference_residual(left.xi, right.xi, points),
        difference_residual(left.eta, right.eta, points),
        difference_residual(left.g, right.g, points),
    )


def _gauge(ctx: CheckContext, preset: SigmaPreset = SigmaPreset.EXP_BUMP):
    points = ctx.interior_points(settings.gauge_points)
    sigma = sigma_preset(ctx.manifold, preset)
    return sigma, gauge_transform(ctx.structure, sigma, points), points


def _einstein_residual(s: PacStructure, points: Sequence[Point], tol: float) -> float:
    """Max of |scal̄ + 2n(2n+1)| and |Ric̄ + 2n ḡ| after einsteinizing ``s``"""
    try:
        _, einstein = einsteinize(s, points, tol)
    except DegenerateScaleError as exc:
        raise CheckSkipped(str(exc)) from exc
    n = einstein.n
    ric, scal = einstein.ricci
    return max(
        worst(scal.value(p) + 2 * n * (2 * n + 1) for p in points),
        worst(ric.evaluate(p) + 2 * n * einstein.g.evaluate(p) for p in points),
    )


# ----------------------------------------------------------------------
# gauge transformations
# ----------------------------------------------------------------------
@register(
    "l11-gauge-identity",
    "Lemma l11",
    Suite.TRANSFORMS,
    "σ ≡ 1 leaves (φ, ξ, η, g) unchanged",
    applies=PARACONTACT,
)
def gauge_identity(ctx: CheckContext, rng) -> float:
    sigma = ScalarField.constant_value(ctx.manifold, 1.0, name="1")
    return _structure_residual(gauge_transform(ctx.structure, sigma, ctx.points), ctx.structure, ctx.points)


@register(
    "l11-gauge-constant-homothety",
    "Lemma l11",
    Suite.TRANSFORMS,
    "a constant gauge σ is the D-homothety with α = σ",
    applies=PARACONTACT,
)
def gauge_constant_homothety(ctx: CheckContext, rng) -> float:
    value = 1.0 + settings.sigma_epsilon
    sigma = sigma_preset(ctx.manifold, SigmaPreset.CONSTANT)
    gauged = gauge_transform(ctx.structure, sigma, ctx.points)
    return _structure_residual(gauged, d_homothetic(ctx.structure, value), ctx.points)


@register(
    "l11-gauge-nonpositive-rejected",
    "Lemma l11",
    Suite.TRANSFORMS,
    "a gauge function with σ ≤ 0 is rejected",
    applies=PARACONTACT,
    expect=PositivityError,
)
def gauge_nonpositive_rejected(ctx: CheckContext, rng) -> float:
    sigma = sigma_preset(ctx.manifold, SigmaPreset.CONSTANT, epsilon=-2.0)
    gauge_transform(ctx.structure, sigma, ctx.points)
    return 0.0


@register(
    "l11-gauge-valid-structure",
    "Lemma l11",
    Suite.TRANSFORMS,
    "the gauged tensors satisfy the axioms and F̃ = dη̃",
    applies=CHART_GAUGE,
)
def gauge_valid_structure(ctx: CheckContext, rng) -> float:
    _, gauged, points = _gauge(ctx)
    axioms = validate_structure(gauged, points).max_residual
    return max(axioms, difference_residual(gauged.fundamental, gauged.d_eta, points))


@register(
    "l11-gauge-phi-horizontal",
    "Lemma l11, condition (⋆)",
    Suite.TRANSFORMS,
    "(φ̃ − φ)φ² = 0",
    applies=CHART_GAUGE,
)
def gauge_phi_horizontal(ctx: CheckContext, rng) -> float:
    s = ctx.structure
    _, gauged, points = _gauge(ctx)

    def residual(p: Point) -> np.ndarray:
        phi = s.phi.evaluate(p)
        return (gauged.phi.evaluate(p) - phi) @ phi @ phi

    return worst(residual(p) for p in points)


@register(
    "f55-gauge-fundamental-form",
    "Eq. f55",
    Suite.TRANSFORMS,
    "2F̃ = dσ⊗η − η⊗dσ + 2σF",
    applies=CHART_GAUGE,
)
def gauge_fundamental_form(ctx: CheckContext, rng) -> float:
    s = ctx.structure
    sigma, gauged, points = _gauge(ctx)
    d_sigma = differential(sigma)

    def residual(p: Point) -> np.ndarray:
        ds, eta = d_sigma.evaluate(p), s.eta.evaluate(p)
        rhs = np.outer(ds, eta) - np.outer(eta, ds) + 2.0 * sigma.value(p) * s.fundamental.evaluate(p)
        return 2.0 * gauged.fundamental.evaluate(p) - rhs

    return worst(residual(p) for p in points)


@register(
    "f56-gauge-reeb-field",
    "Eq. f56",
    Suite.TRANSFORMS,
    "ξ̃ = ξ/σ − (1/2σ²)φ grad σ",
    applies=CHART_GAUGE,
)
def gauge_reeb_field(ctx: CheckContext, rng) -> float:
    s = ctx.structure
    sigma, gauged, points = _gauge(ctx)
    d_sigma = differential(sigma)

    def residual(p: Point) -> np.ndarray:
        value = sigma.value(p)
        grad = s.g_inv.evaluate(p) @ d_sigma.evaluate(p)
        expected = s.xi.evaluate(p) / value - s.phi.evaluate(p) @ grad / (2.0 * value**2)
        return gauged.xi.evaluate(p) - expected

    return worst(residual(p) for p in points)


@register(
    "f57-gauge-phi-inverse-metric",
    "Eq. f57",
    Suite.TRANSFORMS,
    "φ̃ g̃⁻¹ = φ g⁻¹/σ",
    applies=CHART_GAUGE,
)
def gauge_phi_inverse_metric(ctx: CheckContext, rng) -> float:
    s = ctx.structure
    sigma, gauged, points = _gauge(ctx)

    def residual(p: Point) -> np.ndarray:
        left = gauged.phi.evaluate(p) @ gauged.g_inv.evaluate(p)
        return left - s.phi.evaluate(p) @ s.g_inv.evaluate(p) / sigma.value(p)

    return worst(residual(p) for p in points)


@register(
    "f58-gauge-horizontal-inverse-metric",
    "Eq. f58",
    Suite.TRANSFORMS,
    "σ(g̃⁻¹ − ξ̃⊗ξ̃) = g⁻¹ − ξ⊗ξ",
    applies=CHART_GAUGE,
)
def gauge_horizontal_inverse_metric(ctx: CheckContext, rng) -> float:
    s = ctx.structure
    sigma, gauged, points = _gauge(ctx)

    def residual(p: Point) -> np.ndarray:
        new_xi, xi = gauged.xi.evaluate(p), s.xi.evaluate(p)
        left = sigma.value(p) * (gauged.g_inv.evaluate(p) - np.outer(new_xi, new_xi))
        return left - (s.g_inv.evaluate(p) - np.outer(xi, xi))

    return worst(residual(p) for p in points)


@register(
    "l11-gauge-zeta-horizontal",
    "Lemma l11",
    Suite.TRANSFORMS,
    "η(ζ) = 0 and ξ̃σ = (ξσ)/σ",
    applies=CHART_GAUGE,
)
def gauge_zeta_horizontal(ctx: CheckContext, rng) -> float:
    s = ctx.structure
    sigma, gauged, points = _gauge(ctx)
    zeta = gauge_data(s, sigma).zeta
    d_sigma = differential(sigma)

    def residual(p: Point) -> float:
        ds = d_sigma.evaluate(p)
        along = ds @ gauged.xi.evaluate(p) - ds @ s.xi.evaluate(p) / sigma.value(p)
        return max(abs(float(s.eta.evaluate(p) @ zeta.evaluate(p))), abs(float(along)))

    return worst(residual(p) for p in points)


@register(
    "l11-gauge-round-trip",
    "Lemma l11",
    Suite.TRANSFORMS,
    "gauging by σ and then by 1/σ restores the structure",
    applies=CHART_GAUGE,
    threshold=lambda tol: 2.0 * tol,
)
def gauge_round_trip(ctx: CheckContext, rng) -> float:
    sigma, gauged, points = _gauge(ctx)
    restored = gauge_transform(gauged, reciprocal_field(sigma), points)
    return _structure_residual(restored, ctx.structure, points)


@register(
    "f61-w1-law",
    "Eq. f61",
    Suite.TRANSFORMS,
    "σW̃₁ = W₁ − (2(n+1)/σ)△_𝔻σ − ((n+1)(n−2)/σ²)|dσ|²_𝔻",
    applies=CHART_GAUGE,
)
def w1_gauge_law(ctx: CheckContext, rng) -> float:
    points = ctx.interior_points(settings.gauge_points)
    return verify_w1_law(ctx.structure, sigma_preset(ctx.manifold, SigmaPreset.EXP_BUMP), points)


@register(
    "f61-w1-constant-gauge",
    "Eq. f61",
    Suite.TRANSFORMS,
    "σW̃₁ = W₁ for constant σ",
    applies=PARACONTACT,
)
def w1_constant_gauge(ctx: CheckContext, rng) -> float:
    points = ctx.subset(settings.gauge_points)
    sigma = sigma_preset(ctx.manifold, SigmaPreset.CONSTANT)
    gauged_w1 = w1_field(gauge_transform(ctx.structure, sigma, points))
    w1 = w1_field(ctx.structure)
    return worst(sigma.value(p) * gauged_w1.value(p) - w1.value(p) for p in points)


@register(
    "f69-laplacian-gauge-law",
    "Corollary c5, Eq. f69",
    Suite.TRANSFORMS,
    "△̃_𝔻 f = (1/σ)△_𝔻 f + (n/σ²)(dσ; df)_𝔻",
    applies=CHART_GAUGE,
)
def laplacian_gauge_law(ctx: CheckContext, rng) -> float:
    points = ctx.interior_points(settings.gauge_points)
    sigma = sigma_preset(ctx.manifold, SigmaPreset.EXP_LINEAR)
    f = ScalarField.from_formula(ctx.manifold, lambda x: x[1] * x[1], name="y²")
    return verify_laplacian_law(ctx.structure, sigma, f, points)


@register(
    "s4-d-laplacian-product-rule",
    "§4 horizontal Laplacian",
    Suite.TRANSFORMS,
    "△_𝔻(ff′) = f△_𝔻f′ + f′△_𝔻f + 2(df; df′)_𝔻",
    applies=CHART_GAUGE,
)
def d_laplacian_product_rule(ctx: CheckContext, rng) -> float:
    s = ctx.structure
    points = ctx.interior_points(settings.gauge_points)
    f = sigma_preset(ctx.manifold, SigmaPreset.EXP_BUMP)
    f2 = ScalarField.from_formula(ctx.manifold, lambda x: x[1] * x[1], name="y²")
    product = ScalarField.wrap(TensorField.derived((), lambda a, b: a * b, f, f2, name="ff′"))
    lap, lap_f, lap_f2 = d_laplacian(s, product), d_laplacian(s, f), d_laplacian(s, f2)
    inner = d_inner(s, f, f2)

    def residual(p: Point) -> float:
        rhs = f.value(p) * lap_f2.value(p) + f2.value(p) * lap_f.value(p) + 2.0 * inner.value(p)
        return lap.value(p) - rhs

    return worst(residual(p) for p in points)


# ----------------------------------------------------------------------
# D-homothetic deformations
# ----------------------------------------------------------------------
@register(
    "t12-homothety-zero-rejected",
    "Theorem t12, Eq. f47",
    Suite.TRANSFORMS,
    "α = 0 is not a D-homothety",
    applies=PARACONTACT,
    expect=ParameterError,
)
def homothety_zero_rejected(ctx: CheckContext, rng) -> float:
    d_homothetic(ctx.structure, 0.0)
    return 0.0


@register(
    "t12-homothety-flags",
    "Theorem t12 i)",
    Suite.TRANSFORMS,
    "a D-homothety preserves every classification flag",
    applies=PARACONTACT,
    threshold=lambda tol: 0.5,
)
def homothety_flags(ctx: CheckContext, rng) -> float:
    points = ctx.subset(16)
    before = ctx.classification.flag_values()
    mismatches = 0
    for alpha in ALPHAS:
        after = classify(d_homothetic(ctx.structure, alpha), points, ctx.tol).flag_values()
        mismatches += sum(before[key] != after[key] for key in before)
    return float(mismatches)


@register(
    "f48-homothety-inverse-metric",
    "Eq. f48",
    Suite.TRANSFORMS,
    "ḡ⁻¹ = g⁻¹/α − β/(α(α+β)) ξ⊗ξ",
    applies=PARACONTACT,
)
def homothety_inverse_metric(ctx: CheckContext, rng) -> float:
    s = ctx.structure
    residual = 0.0
    for alpha in ALPHAS:
        beta = homothety_beta(alpha)
        deformed = d_homothetic(s, alpha)
        for p in ctx.points:
            xi = s.xi.evaluate(p)
            expected = s.g_inv.evaluate(p) / alpha - beta / (alpha * (alpha + beta)) * np.outer(xi, xi)
            residual = max(residual, max_abs(deformed.g_inv.evaluate(p) - expected))
    return residual


@register(
    "f49-homothety-connection-difference",
    "Eq. f49",
    Suite.TRANSFORMS,
    "∇̄ − ∇ = −(β/α)(φ⊗η + η⊗φ) + (β/2(α+β)) ξ⊗(∇η + ∇ηᵀ)",
    applies=PARACONTACT,
)
def homothety_connection_difference(ctx: CheckContext, rng) -> float:
    s = ctx.structure
    points = ctx.subset(32)
    gamma = s.levi_civita.coefficients
    residual = 0.0
    for alpha in ALPHAS:
        beta = homothety_beta(alpha)
        deformed = levi_civita(d_homothetic(s, alpha).g).coefficients
        for p in points:
            phi, eta, xi = s.phi.evaluate(p), s.eta.evaluate(p), s.xi.evaluate(p)
            nabla_eta = s.nabla_eta.evaluate(p)
            expected = -(beta / alpha) * (
                np.einsum("ki,j->kij", phi, eta) + np.einsum("kj,i->kij", phi, eta)
            ) + beta / (2.0 * (alpha + beta)) * np.einsum("k,ij->kij", xi, nabla_eta + nabla_eta.T)
            difference = deformed.evaluate(p) - gamma.evaluate(p)
            residual = max(residual, max_abs(difference - expected))
    return residual


@register(
    "f53-homothety-ricci",
    "Eq. f53",
    Suite.TRANSFORMS,
    "R̄ic = Ric + 2(β/α)g − 2(β/α²)((2n+1)α + nβ)η⊗η",
    applies=K_PARACONTACT,
)
def homothety_ricci(ctx: CheckContext, rng) -> float:
    s, n = ctx.structure, ctx.n
    points = ctx.subset(32)
    ric, _ = s.ricci
    residual = 0.0
    for alpha in ALPHAS:
        beta = homothety_beta(alpha)
        deformed_ric, _ = d_homothetic(s, alpha).ricci
        for p in points:
            eta = s.eta.evaluate(p)
            expected = (
                ric.evaluate(p)
                + 2.0 * beta / alpha * s.g.evaluate(p)
                - 2.0 * beta / alpha**2 * ((2 * n + 1) * alpha + n * beta) * np.outer(eta, eta)
            )
            residual = max(residual, max_abs(deformed_ric.evaluate(p) - expected))
    return residual


@register(
    "f54-homothety-scalar",
    "Eq. f54",
    Suite.TRANSFORMS,
    "s̄cal = scal/α + 2nβ/α²",
    applies=K_PARACONTACT,
)
def homothety_scalar(ctx: CheckContext, rng) -> float:
    s, n = ctx.structure, ctx.n
    points = ctx.subset(32)
    _, scal = s.ricci
    residual = 0.0
    for alpha in ALPHAS:
        beta = homothety_beta(alpha)
        _, deformed_scal = d_homothetic(s, alpha).ricci
        residual = max(
            residual,
            worst(deformed_scal.value(p) - scal.value(p) / alpha - 2 * n * beta / alpha**2 for p in points),
        )
    return residual


@register(
    "f47-homothety-composition",
    "Eq. f47",
    Suite.TRANSFORMS,
    "the D-homotheties with α and α′ compose to the one with αα′",
    applies=PARACONTACT,
)
def homothety_composition(ctx: CheckContext, rng) -> float:
    s = ctx.structure
    residual = 0.0
    for first in ALPHAS:
        for second in ALPHAS:
            composed = d_homothetic(d_homothetic(s, first), second)
            residual = max(residual, _structure_residual(composed, d_homothetic(s, first * second), ctx.points))
    return residual


# ----------------------------------------------------------------------
# Einstein-izing
# ----------------------------------------------------------------------
@register(
    "t12-einsteinize-einstein",
    "Theorem t12 iii)",
    Suite.TRANSFORMS,
    "the einsteinizing D-homothety gives Ric̄ = −2n ḡ and s̄cal = −2n(2n+1)",
    applies=PARA_SASAKIAN,
)
def einsteinize_einstein(ctx: CheckContext, rng) -> float:
    return _einstein_residual(ctx.structure, ctx.subset(16), ctx.tol)


@register(
    "t12-einsteinize-after-homothety",
    "Theorem t12 iii)",
    Suite.TRANSFORMS,
    "einsteinizing still works after a D-homothety with α = 3",
    applies=PARA_SASAKIAN,
)
def einsteinize_after_homothety(ctx: CheckContext, rng) -> float:
    return _einstein_residual(d_homothetic(ctx.structure, 3.0), ctx.subset(16), ctx.tol)


@register(
    "t12-einsteinize-degenerate-scale",
    "Theorem t12 iii)",
    Suite.TRANSFORMS,
    "scal = 2n admits no einsteinizing D-homothety",
    applies=PARA_SASAKIAN,
    expect=DegenerateScaleError,
)
def einsteinize_degenerate_scale(ctx: CheckContext, rng) -> float:
    points = ctx.subset(16)
    fit = eta_einstein_fit(ctx.structure, points, ctx.tol)
    if fit is None:
        raise CheckSkipped("no η-Einstein fit within tolerance")
    n = ctx.n
    scal = (2 * n + 1) * fit.a + fit.b
    if abs(scal - 2 * n) > settings.scale_margin:
        raise CheckSkipped(f"scal = {scal:.6g} differs from 2n = {2 * n}")
    einsteinize(ctx.structure, points, ctx.tol)
    return 0.0
