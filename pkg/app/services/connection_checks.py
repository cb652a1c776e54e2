"""Canonical and skew-torsion connection identities."""

import numpy as np

from app.config import settings
from app.errors import NotKillingError, NotSkewError
from app.geometry.connections import (
    canonical_curvature_formula,
    canonical_ricci_formula,
    canonical_torsion_formula,
    connection_curvature,
    lower_torsion,
    lowered_n1,
    phi_forms,
    rho_t_dt,
    skew_torsion_connection,
    uniqueness_margin,
)
from app.geometry.tensors import symmetry_defect, wedge_jet
from app.models.report import StructureFlag
from app.services.check_registry import (
    CheckContext,
    Suite,
    all_of,
    difference_residual,
    field_residual,
    lacks,
    only,
    register,
    requires,
    worst,
)

PARACONTACT = requires(StructureFlag.PARACONTACT)
NORMAL = requires(StructureFlag.NORMAL)
PARA_SASAKIAN = requires(StructureFlag.PARA_SASAKIAN)


def _witness_floor(tol: float) -> float:
    return settings.witness_factor * tol


# ----------------------------------------------------------------------
# canonical connection
# ----------------------------------------------------------------------
@register(
    "p6-canonical-parallel-g",
    "Prop. p6",
    Suite.CONNECTIONS,
    "∇̃g = 0",
    applies=PARACONTACT,
)
def canonical_parallel_g(ctx: CheckContext, rng) -> float:
    return field_residual(ctx.canonical.covariant_derivative(ctx.structure.g), ctx.points)


@register(
    "p6-canonical-parallel-eta",
    "Prop. p6",
    Suite.CONNECTIONS,
    "∇̃η = 0",
    applies=PARACONTACT,
)
def canonical_parallel_eta(ctx: CheckContext, rng) -> float:
    return field_residual(ctx.canonical.covariant_derivative(ctx.structure.eta), ctx.points)


@register(
    "p6-canonical-parallel-xi",
    "Prop. p6",
    Suite.CONNECTIONS,
    "∇̃ξ = 0",
    applies=PARACONTACT,
)
def canonical_parallel_xi(ctx: CheckContext, rng) -> float:
    return field_residual(ctx.canonical.covariant_derivative(ctx.structure.xi), ctx.points)


@register(
    "tprtw-canonical-torsion",
    "Eq. tprtw",
    Suite.CONNECTIONS,
    "T̃(X,Y) = η(X)φhY − η(Y)φhX + 2g(X,φY)ξ",
    applies=PARACONTACT,
)
def canonical_torsion(ctx: CheckContext, rng) -> float:
    return difference_residual(ctx.canonical.torsion, canonical_torsion_formula(ctx.structure), ctx.points)


@register(
    "tnweb-canonical-nabla-phi",
    "Prop. p6, Eq. tnweb",
    Suite.CONNECTIONS,
    "(∇̃_Xφ)Y = (∇_Xφ)Y + g(X − hX, Y)ξ − η(Y)(X − hX)",
    applies=PARACONTACT,
)
def canonical_nabla_phi(ctx: CheckContext, rng) -> float:
    s = ctx.structure
    nabla_phi = ctx.canonical.covariant_derivative(s.phi)
    identity = np.eye(s.dim)
    residuals = []
    for point in ctx.points:
        v = s.at(point)
        h = s.h.evaluate(point)
        rhs = (
            s.nabla_phi.evaluate(point)
            + np.einsum("ri,k->rki", v.g - h.T @ v.g, v.xi)
            - np.einsum("i,kr->rki", v.eta, identity - h)
        )
        residuals.append(nabla_phi.evaluate(point) - rhs)
    return worst(residuals)


@register(
    "p6-canonical-torsion-xi-phi",
    "Prop. p6",
    Suite.CONNECTIONS,
    "T̃(ξ,φY) = −φT̃(ξ,Y)",
    applies=PARACONTACT,
)
def canonical_torsion_xi_phi(ctx: CheckContext, rng) -> float:
    s = ctx.structure
    residuals = []
    for point in ctx.points:
        v = s.at(point)
        along_xi = np.einsum("i,kij->kj", v.xi, ctx.canonical.torsion.evaluate(point))
        residuals.append(along_xi @ v.phi + v.phi @ along_xi)
    return worst(residuals)


@register(
    "p6-canonical-torsion-horizontal",
    "Prop. p6",
    Suite.CONNECTIONS,
    "T̃(X,Y) = 2dη(X,Y)ξ for horizontal X, Y",
    applies=PARACONTACT,
)
def canonical_torsion_horizontal(ctx: CheckContext, rng) -> float:
    s = ctx.structure
    residuals = []
    for point in ctx.points:
        v = s.at(point)
        projector = v.phi @ v.phi
        torsion = np.einsum("kab,ai,bj->kij", ctx.canonical.torsion.evaluate(point), projector, projector)
        expected = 2 * np.einsum("ab,ai,bj,k->kij", s.d_eta.evaluate(point), projector, projector, v.xi)
        residuals.append(torsion - expected)
    return worst(residuals)


@register(
    "f59-canonical-curvature",
    "Eq. f59",
    Suite.CONNECTIONS,
    "R̃ computed from ∇̃ matches its expression through R, ∇φ, ∇ξ, ∇η and F",
    applies=PARACONTACT,
)
def canonical_curvature(ctx: CheckContext, rng) -> float:
    r31, _ = ctx.canonical.curvature
    return difference_residual(r31, canonical_curvature_formula(ctx.structure), ctx.subset(32))


@register(
    "f59-canonical-ricci",
    "Eq. f59 (contracted)",
    Suite.CONNECTIONS,
    "R̃ic_jk = Ric_jk − 2g_jk + 2η_jη_k − η_k Ric(e_j,ξ) − R(e_j,ξ,ξ,e_k) − (∇_rη_k)∇_jξ^r",
    applies=PARACONTACT,
)
def canonical_ricci(ctx: CheckContext, rng) -> float:
    return difference_residual(ctx.canonical.ricci, canonical_ricci_formula(ctx.structure), ctx.subset(32))


@register(
    "f59-canonical-ricci-xi-xi",
    "Eq. f59 (contracted)",
    Suite.CONNECTIONS,
    "R̃ic(ξ,ξ) = 0",
    applies=PARACONTACT,
)
def canonical_ricci_xi_xi(ctx: CheckContext, rng) -> float:
    s = ctx.structure
    return worst(
        s.xi.evaluate(p) @ ctx.canonical.ricci.evaluate(p) @ s.xi.evaluate(p) for p in ctx.points
    )


@register(
    "f60-w1-closed-form",
    "Eq. f60",
    Suite.CONNECTIONS,
    "W₁ = scal − Ric(ξ,ξ) − 4n",
    applies=PARACONTACT,
)
def w1_closed_form(ctx: CheckContext, rng) -> float:
    s = ctx.structure
    ric, scal = s.ricci
    w1 = connection_curvature(ctx.canonical).w1
    residuals = []
    for point in ctx.points:
        xi = s.xi.evaluate(point)
        residuals.append(w1.value(point) - (scal.value(point) - xi @ ric.evaluate(point) @ xi - 4 * s.n))
    return worst(residuals)


@register(
    "t13-canonical-phi-integrable",
    "Theorem t13",
    Suite.CONNECTIONS,
    "∇̃φ = 0 on an integrable paracontact structure",
    applies=requires(StructureFlag.PARACONTACT, StructureFlag.INTEGRABLE),
)
def canonical_phi_integrable(ctx: CheckContext, rng) -> float:
    return field_residual(ctx.canonical.covariant_derivative(ctx.structure.phi), ctx.points)


@register(
    "t13-canonical-phi-nonintegrable-witness",
    "Theorem t13",
    Suite.CONNECTIONS,
    "∇̃φ ≠ 0 when the paracomplex structure on 𝔻 is not integrable",
    applies=all_of(PARACONTACT, lacks(StructureFlag.INTEGRABLE)),
    witness=True,
    threshold=_witness_floor,
)
def canonical_phi_nonintegrable(ctx: CheckContext, rng) -> float:
    return field_residual(ctx.canonical.covariant_derivative(ctx.structure.phi), ctx.points)


def _torsion_xi_contraction(ctx: CheckContext) -> float:
    s = ctx.structure
    torsion3 = lower_torsion(ctx.canonical.torsion, s.g)
    residuals = []
    for point in ctx.points:
        neta = s.nabla_eta.evaluate(point)
        contraction = np.einsum("i,ijk->jk", s.xi.evaluate(point), torsion3.evaluate(point))
        residuals.append(contraction - 0.5 * (neta + neta.T))
    return worst(residuals)


@register(
    "f84-canonical-torsion-xi-contraction",
    "Eq. f84",
    Suite.CONNECTIONS,
    "T̃(ξ,Y,Z) = ½((∇_Yη)Z + (∇_Zη)Y)",
    applies=PARACONTACT,
)
def canonical_torsion_xi_contraction(ctx: CheckContext, rng) -> float:
    return _torsion_xi_contraction(ctx)


@register(
    "parsas-torsion-consistency",
    "Theorem parsas, Eqs. f83–f87",
    Suite.CONNECTIONS,
    "an integrable paracontact structure is paraSasakian exactly when ξ⌟T̃ = 0",
    applies=requires(StructureFlag.PARACONTACT, StructureFlag.INTEGRABLE),
    threshold=lambda tol: 0.5,
)
def parasasakian_torsion_consistency(ctx: CheckContext, rng) -> float:
    s = ctx.structure
    torsion3 = lower_torsion(ctx.canonical.torsion, s.g)
    along_xi = worst(
        np.einsum("i,ijk->jk", s.xi.evaluate(p), torsion3.evaluate(p)) for p in ctx.points
    )
    vanishes = along_xi < ctx.tol
    return 0.0 if vanishes == ctx.classification.flag(StructureFlag.PARA_SASAKIAN) else 1.0


# ----------------------------------------------------------------------
# skew-torsion connection
# ----------------------------------------------------------------------
@register(
    "t10-skew-connection-parallel-g",
    "Theorem t10",
    Suite.CONNECTIONS,
    "∇̄g = 0",
    applies=NORMAL,
)
def skew_parallel_g(ctx: CheckContext, rng) -> float:
    return field_residual(ctx.skew.covariant_derivative(ctx.structure.g), ctx.points)


@register(
    "t10-skew-connection-parallel-eta",
    "Theorem t10",
    Suite.CONNECTIONS,
    "∇̄η = 0",
    applies=NORMAL,
)
def skew_parallel_eta(ctx: CheckContext, rng) -> float:
    return field_residual(ctx.skew.covariant_derivative(ctx.structure.eta), ctx.points)


@register(
    "t10-skew-connection-parallel-phi",
    "Theorem t10",
    Suite.CONNECTIONS,
    "∇̄φ = 0",
    applies=NORMAL,
)
def skew_parallel_phi(ctx: CheckContext, rng) -> float:
    return field_residual(ctx.skew.covariant_derivative(ctx.structure.phi), ctx.points)


@register(
    "t10-skew-torsion-skew",
    "Theorem t10",
    Suite.CONNECTIONS,
    "the torsion of ∇̄ is a 3-form and agrees with the torsion of its coefficients",
    applies=NORMAL,
)
def skew_torsion_skew(ctx: CheckContext, rng) -> float:
    s = ctx.structure
    from_coefficients = lower_torsion(ctx.skew.torsion, s.g)
    residuals = []
    for point in ctx.points:
        t3 = ctx.skew.torsion3.evaluate(point)
        residuals.append(symmetry_defect(t3))
        residuals.append(from_coefficients.evaluate(point) - t3)
    return worst(residuals)


@register(
    "t10-skew-torsion-xi",
    "Theorem t10",
    Suite.CONNECTIONS,
    "ξ⌟T = 2dη",
    applies=NORMAL,
)
def skew_torsion_xi(ctx: CheckContext, rng) -> float:
    s = ctx.structure
    return worst(
        np.einsum("i,ijk->jk", s.xi.evaluate(p), ctx.skew.torsion3.evaluate(p)) - 2 * s.d_eta.evaluate(p)
        for p in ctx.points
    )


@register(
    "t11-skew-torsion-normal-form",
    "Theorem t11",
    Suite.CONNECTIONS,
    "T = 2η∧dη + dF^φ when N¹ = 0",
    applies=NORMAL,
)
def skew_torsion_normal_form(ctx: CheckContext, rng) -> float:
    s = ctx.structure
    d_f_phi = phi_forms(s).d_f_phi
    residuals = []
    for point in ctx.points:
        expected = 2 * wedge_jet(s.eta.jet(point), s.d_eta.jet(point)).value + d_f_phi.evaluate(point)
        residuals.append(ctx.skew.torsion3.evaluate(point) - expected)
    return worst(residuals)


@register(
    "t10-skew-connection-flat-levi-civita",
    "Theorem t10",
    Suite.CONNECTIONS,
    "on the flat structure ∇̄ is the Levi-Civita connection",
    applies=only("flat-pac"),
)
def skew_flat_levi_civita(ctx: CheckContext, rng) -> float:
    return difference_residual(ctx.skew.coefficients, ctx.structure.levi_civita.coefficients, ctx.points)


@register(
    "t10-skew-connection-uniqueness",
    "Theorem t10",
    Suite.CONNECTIONS,
    "perturbing T by a small skew 3-form breaks ∇η = 0 or ∇φ = 0",
    applies=NORMAL,
    witness=True,
    threshold=lambda tol: settings.perturbation_floor,
)
def skew_uniqueness(ctx: CheckContext, rng) -> float:
    return uniqueness_margin(ctx.skew, ctx.subset(16), rng)


@register(
    "t10-skew-connection",
    "Theorem t10",
    Suite.CONNECTIONS,
    "no skew-torsion connection exists when ξ is not Killing",
    applies=all_of(PARACONTACT, lacks(StructureFlag.K_PARACONTACT)),
    expect=NotKillingError,
)
def skew_not_killing(ctx: CheckContext, rng) -> float:
    skew_torsion_connection(ctx.structure, ctx.points, ctx.tol)
    return 1.0


@register(
    "t10-skew-connection-not-skew",
    "Theorem t10",
    Suite.CONNECTIONS,
    "no skew-torsion connection exists when N¹ is not totally skew",
    applies=all_of(requires(StructureFlag.K_PARACONTACT), lacks(StructureFlag.NORMAL)),
    expect=NotSkewError,
)
def skew_not_skew(ctx: CheckContext, rng) -> float:
    skew_torsion_connection(ctx.structure, ctx.points, ctx.tol)
    return 1.0


@register(
    "t11-skew-torsion-parasasakian",
    "Theorem t11",
    Suite.CONNECTIONS,
    "T = 2η∧dη on a paraSasakian structure",
    applies=PARA_SASAKIAN,
)
def skew_torsion_parasasakian(ctx: CheckContext, rng) -> float:
    s = ctx.structure
    return worst(
        ctx.skew.torsion3.evaluate(p) - 2 * wedge_jet(s.eta.jet(p), s.d_eta.jet(p)).value for p in ctx.points
    )


@register(
    "t11-skew-torsion-parallel",
    "Theorem t11",
    Suite.CONNECTIONS,
    "∇̄T = 0",
    applies=PARA_SASAKIAN,
)
def skew_torsion_parallel(ctx: CheckContext, rng) -> float:
    return field_residual(ctx.skew.covariant_derivative(ctx.skew.torsion3), ctx.points)


@register(
    "f44-ricci-form-identity",
    "Prop. p4, Eq. f44",
    Suite.CONNECTIONS,
    "ρ(X,Y) = R̄ic(X,φY) + (∇̄_Xt)Y + ½dt(X,Y)",
    applies=NORMAL,
)
def ricci_form_identity(ctx: CheckContext, rng) -> float:
    s = ctx.structure
    forms = rho_t_dt(ctx.skew)
    nabla_t = ctx.skew.covariant_derivative(forms.t)
    residuals = []
    for point in ctx.subset(32):
        rhs = (
            ctx.skew.ricci.evaluate(point) @ s.phi.evaluate(point)
            + nabla_t.evaluate(point)
            + 0.5 * forms.dt.evaluate(point)
        )
        residuals.append(forms.rho.evaluate(point) - rhs)
    return worst(residuals)


@register(
    "f45-ricci-form-parasasakian",
    "Prop. p5, Eq. f45",
    Suite.CONNECTIONS,
    "ρ(X,φY) = R̄ic(X,Y) + 4(n−1)(g − η⊗η)",
    applies=PARA_SASAKIAN,
)
def ricci_form_parasasakian(ctx: CheckContext, rng) -> float:
    s = ctx.structure
    rho = rho_t_dt(ctx.skew).rho
    residuals = []
    for point in ctx.points:
        v = s.at(point)
        rhs = ctx.skew.ricci.evaluate(point) + 4 * (s.n - 1) * (v.g - np.outer(v.eta, v.eta))
        residuals.append(rho.evaluate(point) @ v.phi - rhs)
    return worst(residuals)


@register(
    "p5-torsion-trace-derivative",
    "Prop. p5",
    Suite.CONNECTIONS,
    "dt = 8(n−1)F and ∇̄t = 0",
    applies=PARA_SASAKIAN,
)
def torsion_trace_derivative(ctx: CheckContext, rng) -> float:
    s = ctx.structure
    forms = rho_t_dt(ctx.skew)
    nabla_t = ctx.skew.covariant_derivative(forms.t)
    residuals = []
    for point in ctx.points:
        residuals.append(forms.dt.evaluate(point) - 8 * (s.n - 1) * s.fundamental.evaluate(point))
        residuals.append(nabla_t.evaluate(point))
    return worst(residuals)


@register(
    "p5-torsion-square",
    "Prop. p5",
    Suite.CONNECTIONS,
    "Σ ε_i g(T(X,e_i), T(Y,e_i)) = −8g − 8(n−1)η⊗η",
    applies=PARA_SASAKIAN,
)
def torsion_square(ctx: CheckContext, rng) -> float:
    s = ctx.structure
    residuals = []
    for point in ctx.points:
        v = s.at(point)
        t3 = ctx.skew.torsion3.evaluate(point)
        square = np.einsum("ab,lm,xal,ybm->xy", v.g_inv, v.g_inv, t3, t3)
        residuals.append(square + 8 * v.g + 8 * (s.n - 1) * np.outer(v.eta, v.eta))
    return worst(residuals)


@register(
    "p5-skew-ricci-relation",
    "Prop. p5",
    Suite.CONNECTIONS,
    "Ric = R̄ic − 2g − 2(n−1)η⊗η",
    applies=PARA_SASAKIAN,
)
def skew_ricci_relation(ctx: CheckContext, rng) -> float:
    s = ctx.structure
    ric, _ = s.ricci
    residuals = []
    for point in ctx.points:
        v = s.at(point)
        rhs = ctx.skew.ricci.evaluate(point) - 2 * v.g - 2 * (s.n - 1) * np.outer(v.eta, v.eta)
        residuals.append(ric.evaluate(point) - rhs)
    return worst(residuals)


@register(
    "f46-ricci-form-flat-consistency",
    "Prop. p5, Eq. f46",
    Suite.CONNECTIONS,
    "ρ = 0 exactly when Ric = −2(2n−1)g + 2(n−1)η⊗η",
    applies=PARA_SASAKIAN,
    threshold=lambda tol: 0.5,
)
def ricci_form_flat_consistency(ctx: CheckContext, rng) -> float:
    s = ctx.structure
    ric, _ = s.ricci
    rho = rho_t_dt(ctx.skew).rho
    rho_vanishes = field_residual(rho, ctx.points) < ctx.tol
    einstein = worst(
        ric.evaluate(p) + 2 * (2 * s.n - 1) * s.g.evaluate(p) - 2 * (s.n - 1) * np.outer(s.eta.evaluate(p), s.eta.evaluate(p))
        for p in ctx.points
    )
    return 0.0 if rho_vanishes == (einstein < ctx.tol) else 1.0


# ----------------------------------------------------------------------
# N¹ and dF identities
# ----------------------------------------------------------------------
@register(
    "l9-skew-n1-lemma",
    "Lemma l9, Eqs. f38–f40",
    Suite.CONNECTIONS,
    "∇_ξξ = 0, ξ⌟dη = 0, ∇η + ∇ηᵀ = −(φᵀ∇ηφ + its transpose) and N¹(φX,Y,ξ) = N¹(X,φY,ξ) = −N²(X,Y) = dF(X,Y,ξ) = dF(φX,φY,ξ)",
    applies=NORMAL,
)
def skew_n1_lemma(ctx: CheckContext, rng) -> float:
    s = ctx.structure
    n1 = lowered_n1(s)
    residuals = []
    for point in ctx.points:
        v = s.at(point)
        neta = s.nabla_eta.evaluate(point)
        twisted = v.phi.T @ neta @ v.phi
        n1v = n1.evaluate(point)
        df = s.d_fundamental.evaluate(point)
        first = np.einsum("ajl,ai,l->ij", n1v, v.phi, v.xi)
        others = [
            np.einsum("ibl,bj,l->ij", n1v, v.phi, v.xi),
            -s.nijenhuis["N2"].evaluate(point),
            np.einsum("ijl,l->ij", df, v.xi),
            np.einsum("abl,ai,bj,l->ij", df, v.phi, v.phi, v.xi),
        ]
        residuals.extend(
            [
                v.xi @ s.nabla_xi.evaluate(point),
                v.xi @ s.d_eta.evaluate(point),
                neta + neta.T + twisted + twisted.T,
            ]
        )
        residuals.extend(first - other for other in others)
    return worst(residuals)


@register(
    "f35-df-minus-identity",
    "Prop. p3, Eq. f35",
    Suite.CONNECTIONS,
    "dF⁻(X,Y,Z) = −N¹(X,Y,φZ) − N¹(Y,Z,φX) − N¹(Z,X,φY)",
)
def df_minus_identity(ctx: CheckContext, rng) -> float:
    s = ctx.structure
    d_f_minus = phi_forms(s).d_f_minus
    n1 = lowered_n1(s)
    residuals = []
    for point in ctx.points:
        phi = s.phi.evaluate(point)
        low = n1.evaluate(point)
        rhs = -(
            np.einsum("xya,az->xyz", low, phi)
            + np.einsum("yza,ax->xyz", low, phi)
            + np.einsum("zxa,ay->xyz", low, phi)
        )
        residuals.append(d_f_minus.evaluate(point) - rhs)
    return worst(residuals)


@register(
    "f36-n1-phi-decomposition",
    "Prop. p3, Eq. f36",
    Suite.CONNECTIONS,
    "N¹(X,Y,Z) = N¹(φX,φY,Z) + η(Y)N¹(X,ξ,Z) + η(X)N¹(ξ,Y,Z)",
)
def n1_phi_decomposition(ctx: CheckContext, rng) -> float:
    s = ctx.structure
    n1 = lowered_n1(s)
    residuals = []
    for point in ctx.points:
        v = s.at(point)
        low = n1.evaluate(point)
        rhs = (
            np.einsum("abz,ax,by->xyz", low, v.phi, v.phi)
            + np.einsum("y,xaz,a->xyz", v.eta, low, v.xi)
            + np.einsum("x,ayz,a->xyz", v.eta, low, v.xi)
        )
        residuals.append(low - rhs)
    return worst(residuals)


@register(
    "f37-n1-levi-civita",
    "Prop. p3, Eq. f37",
    Suite.CONNECTIONS,
    "N¹(X,Y) = (∇_{φX}φ)Y − (∇_{φY}φ)X + (∇_Xφ)φY − (∇_Yφ)φX − η(X)∇_Yξ + η(Y)∇_Xξ",
)
def n1_levi_civita(ctx: CheckContext, rng) -> float:
    s = ctx.structure
    residuals = []
    for point in ctx.points:
        v = s.at(point)
        nphi = s.nabla_phi.evaluate(point)
        nxi = s.nabla_xi.evaluate(point)
        rhs = (
            np.einsum("ai,akj->kij", v.phi, nphi)
            - np.einsum("aj,aki->kij", v.phi, nphi)
            + np.einsum("ika,aj->kij", nphi, v.phi)
            - np.einsum("jka,ai->kij", nphi, v.phi)
            - np.einsum("i,jk->kij", v.eta, nxi)
            + np.einsum("j,ik->kij", v.eta, nxi)
        )
        residuals.append(s.nijenhuis["N1"].evaluate(point) - rhs)
    return worst(residuals)

