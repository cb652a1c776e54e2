"""Axiom-level checks: structure axioms, classification, N-tensors, h and ∇φ."""

import numpy as np

from app.errors import ConstructionError
from app.geometry.paracontact import (
    basis_phi_trace,
    build_compatible_metric,
    build_phi_basis,
    covariant_derivative_phi_checks,
    compute_h,
    fundamental_form,
    p_norms,
    phi_trace,
    validate_structure,
)
from app.geometry.riemann import codifferential
from app.geometry.tensors import LOWER, TensorField, symmetry_defect
from app.models.report import StructureFlag
from app.services.check_registry import (
    CheckContext,
    Suite,
    all_of,
    field_residual,
    lacks,
    only,
    register,
    requires,
    worst,
)

PARACONTACT = requires(StructureFlag.PARACONTACT)

# implications between flags that every classification must respect
LADDER = (
    (StructureFlag.PARACONTACT, StructureFlag.ALMOST_PAC_METRIC),
    (StructureFlag.K_PARACONTACT, StructureFlag.PARACONTACT),
    (StructureFlag.PARA_SASAKIAN, StructureFlag.K_PARACONTACT),
    (StructureFlag.PARA_SASAKIAN, StructureFlag.NORMAL),
    (StructureFlag.NORMAL, StructureFlag.INTEGRABLE),
)


def _big_g(ctx: CheckContext, diagonal) -> TensorField:
    return TensorField.constant(ctx.manifold, (LOWER, LOWER), np.diag(diagonal), name="G")


@register(
    "f82-structure-axioms",
    "Eq. f82; Eq. con",
    Suite.AXIOMS,
    "φξ = 0, η∘φ = 0, η(ξ) = 1, φ² = I − η⊗ξ, g(φ·,φ·) = −g + η⊗η, g(ξ,·) = η",
)
def structure_axioms(ctx: CheckContext, rng) -> float:
    return validate_structure(ctx.structure, ctx.points).max_residual


@register(
    "t2-classification-flags",
    "Prop. t2; Eqs. new1, mon1; Theorem t4",
    Suite.AXIOMS,
    "classify reproduces the declared flags of the entry (residual counts mismatches)",
    threshold=lambda tol: 0.5,
)
def classification_flags(ctx: CheckContext, rng) -> float:
    report = ctx.classification
    return float(sum(report.flag(flag) != ctx.entry.expected[flag] for flag in StructureFlag))


@register(
    "t4-classification-ladder",
    "Theorem t4",
    Suite.AXIOMS,
    "paraSasakian ⇒ K-paracontact ⇒ paracontact ⇒ almost paracontact metric, and normal ⇒ integrable",
    threshold=lambda tol: 0.5,
)
def classification_ladder(ctx: CheckContext, rng) -> float:
    report = ctx.classification
    return float(sum(report.flag(strong) and not report.flag(weak) for strong, weak in LADDER))


@register(
    "fund-fundamental-form",
    "Eq. fund",
    Suite.AXIOMS,
    "F(X,Y) = g(X,φY) is antisymmetric and F = dη matches the paracontact flag",
)
def fundamental(ctx: CheckContext, rng) -> float:
    form = fundamental_form(ctx.structure, ctx.points, ctx.tol)
    antisymmetry = worst(f + f.T for f in (form.form.evaluate(p) for p in ctx.points))
    mismatch = form.is_paracontact != ctx.entry.expected[StructureFlag.PARACONTACT]
    return max(antisymmetry, 1.0 if mismatch else 0.0)


@register(
    "s2-compatible-metric",
    "§2 compatible metric",
    Suite.AXIOMS,
    "the metric built from G = diag(2, 1, ..., 1) is compatible with (φ, ξ, η)",
    applies=only("flat-pac", "heis-para"),
)
def compatible_metric_construction(ctx: CheckContext, rng) -> float:
    s = ctx.structure
    g = build_compatible_metric(s, _big_g(ctx, [2.0] + [1.0] * (s.dim - 1)), ctx.points)
    return validate_structure(s.with_metric(g), ctx.points).max_residual


@register(
    "s2-compatible-metric-flat-values",
    "§2 compatible metric",
    Suite.AXIOMS,
    "on the flat structure G = diag(2, 1, 1) yields g = diag(1/2, −1/2, 1)",
    applies=only("flat-pac"),
)
def compatible_metric_flat_values(ctx: CheckContext, rng) -> float:
    g = build_compatible_metric(ctx.structure, _big_g(ctx, [2.0, 1.0, 1.0]), ctx.points)
    expected = np.diag([0.5, -0.5, 1.0])
    return worst(g.evaluate(p) - expected for p in ctx.points)


@register(
    "s2-compatible-metric-euclidean-rejected",
    "§2 compatible metric",
    Suite.AXIOMS,
    "a Euclidean G degenerates on the flat structure and is rejected",
    applies=only("flat-pac"),
    expect=ConstructionError,
)
def compatible_metric_euclidean(ctx: CheckContext, rng) -> float:
    build_compatible_metric(ctx.structure, _big_g(ctx, [1.0, 1.0, 1.0]), ctx.points)
    return 1.0


@register(
    "s2-phi-basis-gram",
    "§2 φ-basis",
    Suite.AXIOMS,
    "a φ-basis (X_i, φX_i, ξ) is pseudo-orthonormal with signs (+, −, ..., +)",
)
def phi_basis_gram(ctx: CheckContext, rng) -> float:
    s = ctx.structure
    residuals = []
    for index, point in enumerate(ctx.subset(16)):
        basis = build_phi_basis(s, point, seed=ctx.seed + index)
        v = s.at(point)
        residuals.append(basis.gram(v.g) - np.diag(basis.signs))
        for a in range(s.n):
            residuals.append(basis.vectors[:, 2 * a + 1] - v.phi @ basis.vectors[:, 2 * a])
    return worst(residuals)


@register(
    "f41-phi-trace-basis-independence",
    "Eqs. f41–f43",
    Suite.AXIOMS,
    "Σ ε_i B(e_i, φe_i) agrees between the contraction formula and two independent φ-bases",
)
def phi_trace_basis_independence(ctx: CheckContext, rng) -> float:
    s = ctx.structure
    residuals = []
    for index, point in enumerate(ctx.subset(16)):
        v = s.at(point)
        b = rng.standard_normal((s.dim, s.dim))
        formula = phi_trace(v.g_inv, v.phi, b)
        for seed in (2 * index, 2 * index + 1):
            basis = build_phi_basis(s, point, seed=ctx.seed + seed)
            residuals.append(basis_phi_trace(basis, v.phi, b) - formula)
    return worst(residuals)


@register(
    "t2-nijenhuis-chain",
    "Prop. t2",
    Suite.AXIOMS,
    "a normal structure has N¹ = N² = N³ = N⁴ = 0",
    applies=requires(StructureFlag.NORMAL),
)
def nijenhuis_chain(ctx: CheckContext, rng) -> float:
    tensors = ctx.structure.nijenhuis
    return max(field_residual(tensors[key], ctx.points) for key in ("N1", "N2", "N3", "N4"))


@register(
    "t2-nijenhuis-paracontact",
    "Prop. t2",
    Suite.AXIOMS,
    "N² = 0 and N⁴ = £_ξη = 0 when F = dη",
    applies=PARACONTACT,
)
def nijenhuis_paracontact(ctx: CheckContext, rng) -> float:
    tensors = ctx.structure.nijenhuis
    return max(field_residual(tensors["N2"], ctx.points), field_residual(tensors["N4"], ctx.points))


@register(
    "t2-n3-killing",
    "Prop. t2",
    Suite.AXIOMS,
    "ξ Killing gives N³ = £_ξφ = 0",
    applies=requires(StructureFlag.K_PARACONTACT),
)
def n3_killing(ctx: CheckContext, rng) -> float:
    s = ctx.structure
    return max(field_residual(s.nijenhuis["N3"], ctx.points), field_residual(s.killing, ctx.points))


@register(
    "t2-n3-nonkilling-witness",
    "Prop. t2",
    Suite.AXIOMS,
    "ξ not Killing: both N³ and £_ξg are non-zero",
    applies=all_of(PARACONTACT, lacks(StructureFlag.K_PARACONTACT)),
    witness=True,
)
def n3_nonkilling(ctx: CheckContext, rng) -> float:
    s = ctx.structure
    return min(field_residual(s.nijenhuis["N3"], ctx.points), field_residual(s.killing, ctx.points))


@register(
    "l2-h-lemma",
    "Lemma l2, Eq. f3",
    Suite.AXIOMS,
    "h is g-symmetric, hφ = −φh, tr h = 0, hξ = 0 and ∇_Xξ = −φX + φhX",
    applies=PARACONTACT,
)
def h_lemma(ctx: CheckContext, rng) -> float:
    s = ctx.structure
    h_field, h_low_field = compute_h(s)
    residuals = []
    for point in ctx.points:
        v = s.at(point)
        h = h_field.evaluate(point)
        h_low = h_low_field.evaluate(point)
        residuals.extend(
            [
                h_low - h_low.T,
                h @ v.phi + v.phi @ h,
                np.trace(h),
                h @ v.xi,
                s.nabla_xi.evaluate(point).T - (-v.phi + v.phi @ h),
            ]
        )
    return worst(residuals)


@register(
    "l2-codifferential-eta",
    "Corollary of Lemma l2",
    Suite.AXIOMS,
    "δη = 0 on paracontact structures",
    applies=PARACONTACT,
)
def codifferential_eta(ctx: CheckContext, rng) -> float:
    s = ctx.structure
    return field_residual(codifferential(s.g, s.eta, s.levi_civita), ctx.points)


def _nabla_phi_checks(ctx: CheckContext, rng, key: str) -> float:
    paracontact = ctx.entry.expected[StructureFlag.PARACONTACT]
    return covariant_derivative_phi_checks(ctx.structure, ctx.points, rng, paracontact)[key]


@register(
    "f1-nabla-phi-general",
    "Prop. l1, Eq. f1",
    Suite.AXIOMS,
    "2g((∇_Xφ)Y, Z) through dF, N¹, N² and dη on any almost paracontact metric structure",
)
def nabla_phi_general(ctx: CheckContext, rng) -> float:
    return _nabla_phi_checks(ctx, rng, "general")


@register(
    "f2-nabla-phi-paracontact",
    "Prop. l1, Eq. f2",
    Suite.AXIOMS,
    "2g((∇_Xφ)Y, Z) = −N¹(Y,Z,φX) − 2dη(φZ,X)η(Y) + 2dη(φY,X)η(Z) when F = dη",
    applies=PARACONTACT,
)
def nabla_phi_paracontact(ctx: CheckContext, rng) -> float:
    return _nabla_phi_checks(ctx, rng, "paracontact")


@register(
    "l3-nabla-phi-phi",
    "Lemma l3",
    Suite.AXIOMS,
    "(∇_{φX}φ)φY − (∇_Xφ)Y = 2g(X,Y)ξ − (X − hX + η(X)ξ)η(Y)",
    applies=PARACONTACT,
)
def nabla_phi_phi(ctx: CheckContext, rng) -> float:
    return _nabla_phi_checks(ctx, rng, "phi_phi")


def _sasakian_defect(ctx: CheckContext, rng) -> float:
    s = ctx.structure
    residuals = []
    for point in ctx.points:
        v = s.at(point)
        nphi = s.nabla_phi.evaluate(point)
        x, y = rng.standard_normal((2, s.dim))
        lhs = np.einsum("r,rki,i->k", x, nphi, y)
        residuals.append(lhs + (x @ v.g @ y) * v.xi - (v.eta @ y) * x)
    return worst(residuals)


@register(
    "t4-parasasakian-nabla-phi",
    "Theorem t4, Eq. f6",
    Suite.AXIOMS,
    "(∇_Xφ)Y = −g(X,Y)ξ + η(Y)X",
    applies=requires(StructureFlag.PARA_SASAKIAN),
)
def parasasakian_nabla_phi(ctx: CheckContext, rng) -> float:
    return _sasakian_defect(ctx, rng)


@register(
    "t4-parasasakian-nabla-phi-witness",
    "Theorem t4, Eq. f6",
    Suite.AXIOMS,
    "(∇_Xφ)Y + g(X,Y)ξ − η(Y)X is far from zero on a paracontact structure that is not paraSasakian",
    applies=all_of(PARACONTACT, lacks(StructureFlag.PARA_SASAKIAN)),
    witness=True,
    threshold=lambda tol: 0.1,
)
def parasasakian_nabla_phi_witness(ctx: CheckContext, rng) -> float:
    return _sasakian_defect(ctx, rng)


@register(
    "f12-nabla-phi-divergence",
    "Eq. f12",
    Suite.AXIOMS,
    "div φ = 2nη, ∇_ξφ = 0 and (∇_{φX}η)φY = (∇_Yη)X",
    applies=PARACONTACT,
)
def nabla_phi_divergence(ctx: CheckContext, rng) -> float:
    s = ctx.structure
    residuals = []
    for point in ctx.points:
        v = s.at(point)
        nphi = s.nabla_phi.evaluate(point)
        neta = s.nabla_eta.evaluate(point)
        residuals.extend(
            [
                np.einsum("rrj->j", nphi) - 2 * s.n * v.eta,
                np.einsum("r,rki->ki", v.xi, nphi),
                np.einsum("rs,ri,sj->ij", neta, v.phi, v.phi) - neta.T,
            ]
        )
    return worst(residuals)


@register(
    "f101-nabla-eta-phi-symmetry",
    "Eq. f101",
    Suite.AXIOMS,
    "(∇_{e_r}η)(e_i) φ^r_j and (∇_{e_i}η)(φe_j) are symmetric in (i, j)",
    applies=PARACONTACT,
)
def nabla_eta_phi_symmetry(ctx: CheckContext, rng) -> float:
    s = ctx.structure
    residuals = []
    for point in ctx.points:
        phi = s.phi.evaluate(point)
        neta = s.nabla_eta.evaluate(point)
        residuals.append(symmetry_defect(np.einsum("ri,rj->ij", neta, phi), antisymmetric=False))
        residuals.append(symmetry_defect(np.einsum("ir,rj->ij", neta, phi), antisymmetric=False))
    return worst(residuals)


@register(
    "f13-nabla-eta-formula",
    "Eq. f13",
    Suite.AXIOMS,
    "∇_iη_j = F_ij + (F h)_ij",
    applies=PARACONTACT,
)
def nabla_eta_formula(ctx: CheckContext, rng) -> float:
    s = ctx.structure
    h = compute_h(s).h
    residuals = []
    for point in ctx.points:
        f = s.fundamental.evaluate(point)
        residuals.append(s.nabla_eta.evaluate(point) - (f + f @ h.evaluate(point)))
    return worst(residuals)


@register(
    "f14-nabla-eta-square",
    "Eq. f14",
    Suite.AXIOMS,
    "∇_rη_i ∇^rη_j = −g + η⊗η − 2h − h²",
    applies=PARACONTACT,
)
def nabla_eta_square(ctx: CheckContext, rng) -> float:
    s = ctx.structure
    h_pair = compute_h(s)
    residuals = []
    for point in ctx.points:
        v = s.at(point)
        neta = s.nabla_eta.evaluate(point)
        h_low = h_pair.h_low.evaluate(point)
        lhs = np.einsum("ra,ri,aj->ij", v.g_inv, neta, neta)
        rhs = -v.g + np.outer(v.eta, v.eta) - 2 * h_low - h_low @ h_pair.h.evaluate(point)
        residuals.append(lhs - rhs)
    return worst(residuals)


@register(
    "c2-p-norm-identity",
    "Corollary c2",
    Suite.AXIOMS,
    "|P|² = |∇φ|² − 4n",
    applies=PARACONTACT,
)
def p_norm_identity(ctx: CheckContext, rng) -> float:
    s = ctx.structure
    residuals = []
    for point in ctx.points:
        norms = p_norms(s, point)
        residuals.append(norms.p_squared - norms.grad_phi_squared + 4 * s.n)
    return worst(residuals)


@register(
    "f25-p-xi-norm",
    "Eq. f25",
    Suite.AXIOMS,
    "|P(ξ)|² = |h|²",
    applies=PARACONTACT,
)
def p_xi_norm(ctx: CheckContext, rng) -> float:
    s = ctx.structure
    return worst(norms.p_xi_squared - norms.h_squared for norms in (p_norms(s, p) for p in ctx.points))


@register(
    "f19-p-square-contraction",
    "Lemma l6, Eq. f19",
    Suite.AXIOMS,
    "P_rsi P^rs_j = ∇_rφ_si ∇^rφ^s_j + 2h_ij − g_ij − (2n−1)η_iη_j",
    applies=PARACONTACT,
)
def p_square_contraction(ctx: CheckContext, rng) -> float:
    s = ctx.structure
    residuals = []
    for point in ctx.points:
        v = s.at(point)
        p = s.p.evaluate(point)
        lhs = np.einsum("ra,sb,rsi,abj->ij", v.g_inv, v.g_inv, p, p)
        nphi_low = s.nabla_phi_low.evaluate(point)
        rhs = (
            np.einsum("rsi,ra,asj->ij", nphi_low, v.g_inv, s.nabla_phi.evaluate(point))
            + 2 * s.h_low.evaluate(point)
            - v.g
            - (2 * s.n - 1) * np.outer(v.eta, v.eta)
        )
        residuals.append(lhs - rhs)
    return worst(residuals)

