"""Gauge and D-homothetic deformations of paracontact structures."""

import math
from typing import NamedTuple, Optional, Sequence, Tuple

import numpy as np

from app.config import settings
from app.errors import (
    DegenerateScaleError,
    NotEtaEinsteinError,
    ParameterError,
    PositivityError,
    UsageError,
)
from app.geometry.connections import canonical_connection, connection_curvature
from app.geometry.paracontact import PacStructure, fit_eta_einstein
from app.geometry.tensors import LOWER, UPPER, ScalarField, TensorField
from app.logger import get_logger
from app.models.manifold import Manifold, Point
from app.models.report import EtaEinsteinFit
from app.models.transform import SigmaPreset
from app.utils import jet as jets
from app.utils.jet import Jet
from app.utils.sampling import default_tolerance

logger = get_logger("transforms")


# ----------------------------------------------------------------------
# gauge functions
# ----------------------------------------------------------------------
def sigma_preset(manifold: Manifold, preset: SigmaPreset, epsilon: Optional[float] = None) -> ScalarField:
    """Named positive gauge functions.

    ``constant`` is 1 + ε; the others need a coordinate chart and use its
    first two coordinates x, y:

    * ``exp-bump``: exp(ε sin x cos y)
    * ``exp-linear``: exp(ε x)
    * ``radial-bump``: 1 + ε exp(−|p|²)
    """
    eps = settings.sigma_epsilon if epsilon is None else epsilon
    preset = SigmaPreset(preset)
    if preset == SigmaPreset.CONSTANT:
        return ScalarField.constant_value(manifold, 1.0 + eps, name=f"σ={1.0 + eps:g}")
    if manifold.is_frame:
        raise UsageError(f"σ preset {preset.value} needs a coordinate chart; {manifold.name} is a frame")
    if preset == SigmaPreset.EXP_BUMP:
        return ScalarField.from_formula(
            manifold, lambda x: jets.exp((jets.sin(x[0]) * jets.cos(x[1])).scale(eps)), name=preset.value
        )
    if preset == SigmaPreset.EXP_LINEAR:
        return ScalarField.from_formula(manifold, lambda x: jets.exp(x[0].scale(eps)), name=preset.value)
    return ScalarField.from_formula(
        manifold,
        lambda x: 1.0 + jets.exp(-jets.einsum("i,i->", x, x)).scale(eps),
        name=preset.value,
    )


def reciprocal_field(sigma: ScalarField) -> ScalarField:
    field = TensorField.derived((), jets.reciprocal, sigma, name=f"1/{sigma.name}")
    return ScalarField.wrap(field)


def differential(f: ScalarField) -> TensorField:
    """df as a 1-form"""
    return TensorField.derived((LOWER,), lambda v: v.grad(), f, extra=1, name=f"d{f.name}")


class GaugeData(NamedTuple):
    sigma: ScalarField
    zeta: TensorField


def gauge_data(s: PacStructure, sigma: ScalarField) -> GaugeData:
    """ζ^k = −(1/2σ) φ^k_j σ^j with σ^j = g^{ji} ∂_i σ"""

    def compute(sig: Jet, phi: Jet, g_inv: Jet) -> Jet:
        grad = jets.einsum("ji,i->j", g_inv, sig.grad())
        return jets.einsum("kj,j->k", phi, grad) * jets.reciprocal(sig).scale(-0.5)

    zeta = TensorField.derived((UPPER,), compute, sigma, s.phi, s.g_inv, extra=1, name="ζ")
    return GaugeData(sigma, zeta)


def _require_positive(sigma: ScalarField, points: Sequence[Point]) -> None:
    for point in points:
        value = sigma.value(point)
        if not value > 0:
            raise PositivityError(f"σ = {value:.6g} at {point.coords}; gauge functions must be positive")


def gauge_transform(s: PacStructure, sigma: ScalarField, points: Sequence[Point] = ()) -> PacStructure:
    """The structure induced by η̃ = ση.

    ξ̃ = (ξ + ζ)/σ,  φ̃^i_j = φ^i_j + (1/2σ)(σ^i − (ξσ)ξ^i)η_j,
    g̃ = σ(g − η⊗ζ♭ − ζ♭⊗η) + σ(σ − 1 + |ζ|²)η⊗η.

    Raises:
        PositivityError: σ ≤ 0 at one of ``points``
    """
    _require_positive(sigma, points)
    zeta = gauge_data(s, sigma).zeta

    def new_xi(sig: Jet, xi: Jet, z: Jet) -> Jet:
        return (xi + z) * jets.reciprocal(sig)

    def new_phi(sig: Jet, phi: Jet, xi: Jet, eta: Jet, g_inv: Jet) -> Jet:
        d_sigma = sig.grad()
        grad = jets.einsum("ij,j->i", g_inv, d_sigma)
        along_xi = jets.einsum("a,a->", xi, d_sigma)
        horizontal = grad - xi * along_xi
        return phi + jets.einsum("i,j->ij", horizontal, eta) * jets.reciprocal(sig).scale(0.5)

    def new_eta(sig: Jet, eta: Jet) -> Jet:
        return eta * sig

    def new_g(sig: Jet, g: Jet, eta: Jet, z: Jet) -> Jet:
        z_flat = jets.einsum("ij,j->i", g, z)
        z_squared = jets.einsum("i,i->", z_flat, z)
        eta_eta = jets.einsum("i,j->ij", eta, eta)
        mixed = g - jets.einsum("i,j->ij", eta, z_flat) - jets.einsum("i,j->ij", z_flat, eta)
        return sig * mixed + eta_eta * (sig * (sig - 1.0 + z_squared))

    name = f"{s.name}~{sigma.name}"
    xi = TensorField.derived((UPPER,), new_xi, sigma, s.xi, zeta, name="ξ~")
    phi = TensorField.derived((UPPER, LOWER), new_phi, sigma, s.phi, s.xi, s.eta, s.g_inv, extra=1, name="φ~")
    eta = TensorField.derived((LOWER,), new_eta, sigma, s.eta, name="η~")
    g = TensorField.derived((LOWER, LOWER), new_g, sigma, s.g, s.eta, zeta, name="g~")
    logger.info("gauge transform of %s by %s", s.name, sigma.name)
    return PacStructure(phi, xi, eta, g, name=name)


# ----------------------------------------------------------------------
# 𝔻-calculus
# ----------------------------------------------------------------------
def _horizontal_inverse(s: PacStructure) -> TensorField:
    """g^{ij} − ξ^i ξ^j"""
    return TensorField.derived(
        (UPPER, UPPER), lambda gi, xi: gi - jets.einsum("i,j->ij", xi, xi), s.g_inv, s.xi, name="g_D^-1"
    )


def hessian(s: PacStructure, f: ScalarField) -> TensorField:
    """∇_i ∇_j f"""
    return s.levi_civita.covariant_derivative(differential(f))


def d_laplacian(s: PacStructure, f: ScalarField) -> ScalarField:
    """△_𝔻 f = (g^{ij} − ξ^iξ^j) ∇_i ∇_j f"""
    field = TensorField.derived(
        (), lambda hi, hess: jets.einsum("ij,ij->", hi, hess), _horizontal_inverse(s), hessian(s, f),
        name=f"Δ_D {f.name}",
    )
    return ScalarField.wrap(field)


def d_inner(s: PacStructure, f: ScalarField, f2: ScalarField) -> ScalarField:
    """(df; df′)_𝔻 = (g^{ij} − ξ^iξ^j) ∇_i f ∇_j f′"""
    field = TensorField.derived(
        (),
        lambda hi, a, b: jets.einsum("ij,i,j->", hi, a, b),
        _horizontal_inverse(s),
        differential(f),
        differential(f2),
        name=f"(d{f.name};d{f2.name})_D",
    )
    return ScalarField.wrap(field)


def w1_field(s: PacStructure, points: Sequence[Point] = ()) -> ScalarField:
    """Scalar curvature W₁ of the canonical connection"""
    return connection_curvature(canonical_connection(s, points)).w1


def verify_w1_law(s: PacStructure, sigma: ScalarField, points: Sequence[Point]) -> float:
    """Max |σW̃₁ − W₁ + (2(n+1)/σ)△_𝔻σ + ((n+1)(n−2)/σ²)|dσ|²_𝔻|

    W̃₁ is computed on the transformed structure, the right-hand side on ``s``.
    """
    n = s.n
    transformed = gauge_transform(s, sigma, points)
    new_w1 = w1_field(transformed)
    old_w1 = w1_field(s)
    laplacian = d_laplacian(s, sigma)
    inner = d_inner(s, sigma, sigma)
    worst = 0.0
    for point in points:
        value = sigma.value(point)
        rhs = (
            old_w1.value(point)
            - 2.0 * (n + 1) / value * laplacian.value(point)
            - (n + 1) * (n - 2) / value**2 * inner.value(point)
        )
        worst = max(worst, abs(value * new_w1.value(point) - rhs))
    logger.debug("W1 gauge law on %s by %s: %.3e", s.name, sigma.name, worst)
    return worst


def verify_laplacian_law(s: PacStructure, sigma: ScalarField, f: ScalarField, points: Sequence[Point]) -> float:
    """Max |△̃_𝔻 f − (1/σ)△_𝔻 f − (n/σ²)(dσ;df)_𝔻|"""
    transformed = gauge_transform(s, sigma, points)
    new_laplacian = d_laplacian(transformed, f)
    laplacian = d_laplacian(s, f)
    inner = d_inner(s, sigma, f)
    worst = 0.0
    for point in points:
        value = sigma.value(point)
        rhs = laplacian.value(point) / value + s.n / value**2 * inner.value(point)
        worst = max(worst, abs(new_laplacian.value(point) - rhs))
    return worst


# ----------------------------------------------------------------------
# D-homothetic deformations
# ----------------------------------------------------------------------
def homothety_beta(alpha: float) -> float:
    return alpha * (alpha - 1.0)


def d_homothetic(s: PacStructure, alpha: float) -> PacStructure:
    """φ̄ = φ, ξ̄ = ξ/α, η̄ = αη, ḡ = αg + α(α−1)η⊗η

    Raises:
        ParameterError: α is zero or not finite
    """
    if not math.isfinite(alpha) or alpha == 0:
        raise ParameterError(f"D-homothety needs a finite non-zero α, got {alpha}")
    beta = homothety_beta(alpha)
    xi = s.xi.scaled(1.0 / alpha)
    eta = s.eta.scaled(alpha)
    g = TensorField.derived(
        (LOWER, LOWER),
        lambda metric, e: metric.scale(alpha) + jets.einsum("i,j->ij", e, e).scale(beta),
        s.g,
        s.eta,
        name=f"g[α={alpha:g}]",
    )
    logger.info("D-homothety of %s with α = %g", s.name, alpha)
    return PacStructure(s.phi, xi, eta, g, name=f"{s.name}@α={alpha:g}")


def killing_residual(s: PacStructure, points: Sequence[Point]) -> float:
    paracontact = max(
        (float(np.max(np.abs(s.fundamental.evaluate(p) - s.d_eta.evaluate(p)))) for p in points), default=0.0
    )
    killing = max((s.killing.jet(p).max_abs() for p in points), default=0.0)
    return max(paracontact, killing)


def eta_einstein_fit(s: PacStructure, points: Sequence[Point], tol: Optional[float] = None) -> Optional[EtaEinsteinFit]:
    """Least-squares (a, b) with Ric ≈ a g + b η⊗η, or None.

    None when the structure is not K-paracontact or the fit (or the spread of
    the pointwise coefficients) exceeds ``tol``.
    """
    tol = default_tolerance(s.manifold) if tol is None else tol
    if killing_residual(s, points) >= tol:
        logger.debug("%s is not K-paracontact; no η-Einstein fit", s.name)
        return None
    fit = fit_eta_einstein(s, points)
    if max(fit.residual, fit.a_spread, fit.b_spread) >= tol:
        return None
    return fit


def einstein_coefficients(scal: float, n: int) -> Tuple[float, float]:
    """(a, b) of an η-Einstein K-paracontact structure from its scalar curvature"""
    a = scal / (2 * n) + 1.0
    b = -(2 * n + 1 + scal / (2 * n))
    return a, b


def einsteinize(s: PacStructure, points: Sequence[Point], tol: Optional[float] = None) -> Tuple[float, PacStructure]:
    """D-homothety with α = (2n − scal)/(4n² + 4n), which makes Ric̄ = −2n ḡ.

    Raises:
        NotEtaEinsteinError: no η-Einstein fit within tolerance
        DegenerateScaleError: scal equals 2n within the configured margin
    """
    fit = eta_einstein_fit(s, points, tol)
    if fit is None:
        raise NotEtaEinsteinError(f"{s.name} is not η-Einstein K-paracontact within tolerance")
    n = s.n
    scal = (2 * n + 1) * fit.a + fit.b
    if abs(scal - 2 * n) <= settings.scale_margin:
        raise DegenerateScaleError(scal, n)
    alpha = (2 * n - scal) / (4 * n * n + 4 * n)
    logger.info("einsteinizing %s: scal = %.6g, α = %.6g", s.name, scal, alpha)
    return alpha, d_homothetic(s, alpha)
