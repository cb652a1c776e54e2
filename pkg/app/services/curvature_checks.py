"""Levi-Civita and curvature identities."""

from typing import List

import numpy as np

from app.config import settings
from app.geometry.connections import canonical_connection, connection_curvature
from app.geometry.paracontact import PacStructure, fit_eta_einstein, p_norms
from app.geometry.tensors import (
    LOWER,
    UPPER,
    TensorField,
    exterior_derivative,
    lie_bracket,
    symmetry_defect,
)
from app.geometry.transforms import einstein_coefficients
from app.models.manifold import BASEPOINT, Backend
from app.models.report import StructureFlag
from app.services.check_registry import (
    CheckContext,
    Suite,
    field_residual,
    register,
    requires,
    with_twin,
    worst,
)
from app.utils import jet as jets
from app.zoo.registry import frame_at, get_entry, to_frame

PARACONTACT = requires(StructureFlag.PARACONTACT)
K_PARACONTACT = requires(StructureFlag.K_PARACONTACT)
PARA_SASAKIAN = requires(StructureFlag.PARA_SASAKIAN)


def _phi_h(s: PacStructure) -> TensorField:
    return TensorField.derived(
        (UPPER, LOWER), lambda phi, h: jets.einsum("ka,aj->kj", phi, h), s.phi, s.h, name="φh"
    )


# ----------------------------------------------------------------------
# Levi-Civita connection and generic curvature
# ----------------------------------------------------------------------
@register(
    "l1-levi-civita-metric",
    "Prop. l1 (Koszul formula)",
    Suite.CURVATURE,
    "∇g = 0 for the Levi-Civita connection",
)
def levi_civita_metric(ctx: CheckContext, rng) -> float:
    s = ctx.structure
    return field_residual(s.levi_civita.covariant_derivative(s.g), ctx.points)


@register(
    "l1-levi-civita-torsion-free",
    "Prop. l1 (Koszul formula)",
    Suite.CURVATURE,
    "the Levi-Civita connection has zero torsion",
)
def levi_civita_torsion(ctx: CheckContext, rng) -> float:
    return field_residual(ctx.structure.levi_civita.torsion(), ctx.points)


@register(
    "s3-curvature-symmetries",
    "§3 curvature conventions",
    Suite.CURVATURE,
    "R(X,Y,Z,W) = −R(Y,X,Z,W) = −R(X,Y,W,Z) = R(Z,W,X,Y)",
)
def curvature_symmetries(ctx: CheckContext, rng) -> float:
    _, r4 = ctx.structure.curvature
    residuals = []
    for point in ctx.points:
        r = r4.evaluate(point)
        residuals.extend([r + r.transpose(1, 0, 2, 3), r + r.transpose(0, 1, 3, 2), r - r.transpose(2, 3, 0, 1)])
    return worst(residuals)


@register(
    "s3-bianchi-first",
    "§3 curvature conventions",
    Suite.CURVATURE,
    "R(X,Y)Z + R(Y,Z)X + R(Z,X)Y = 0",
)
def bianchi_first(ctx: CheckContext, rng) -> float:
    r31, _ = ctx.structure.curvature
    residuals = []
    for point in ctx.points:
        r = r31.evaluate(point)
        residuals.append(r + np.einsum("ljki->lijk", r) + np.einsum("lkij->lijk", r))
    return worst(residuals)


@register(
    "s3-bianchi-second",
    "§3 curvature conventions",
    Suite.CURVATURE,
    "(∇_X R)(Y,Z) + (∇_Y R)(Z,X) + (∇_Z R)(X,Y) = 0",
)
def bianchi_second(ctx: CheckContext, rng) -> float:
    s = ctx.structure
    r31, _ = s.curvature
    nabla_r = s.levi_civita.covariant_derivative(r31)
    residuals = []
    for point in ctx.subset(16):
        d = nabla_r.evaluate(point)
        residuals.append(d + np.einsum("iljak->alijk", d) + np.einsum("jlaik->alijk", d))
    return worst(residuals)


@register(
    "s2-exterior-d-squared",
    "§2 exterior derivative",
    Suite.CURVATURE,
    "d∘d = 0 on functions, on η and on F",
)
def exterior_d_squared(ctx: CheckContext, rng) -> float:
    s = ctx.structure
    forms = [exterior_derivative(s.d_eta), exterior_derivative(s.d_fundamental)]
    if ctx.manifold.backend == Backend.COORDINATE_CHART:
        a, b = rng.uniform(0.5, 1.5, size=2)
        f = TensorField.from_formula(
            ctx.manifold, (), lambda x: jets.sin(x[0].scale(a)) * jets.exp(x[1].scale(b)) + x[2] * x[0], name="f"
        )
        forms.append(exterior_derivative(exterior_derivative(f)))
    return max(field_residual(form, ctx.points) for form in forms)


@register(
    "s2-exterior-d-antisymmetry",
    "§2 exterior derivative",
    Suite.CURVATURE,
    "dη and dF are totally antisymmetric",
)
def exterior_d_antisymmetry(ctx: CheckContext, rng) -> float:
    s = ctx.structure
    return worst(
        symmetry_defect(form.evaluate(point))
        for form in (s.d_eta, s.d_fundamental)
        for point in ctx.points
    )


def _random_vector_fields(ctx: CheckContext, rng) -> List[TensorField]:
    dim = ctx.manifold.dim
    fields = []
    for index in range(3):
        constant = rng.standard_normal(dim)
        if ctx.manifold.is_frame:
            fields.append(TensorField.constant(ctx.manifold, (UPPER,), constant, name=f"X{index}"))
            continue
        linear = rng.standard_normal((dim, dim))
        quadratic = 0.3 * rng.standard_normal((dim, dim, dim))

        def formula(x, c=constant, lin=linear, quad=quadratic):
            return jets.einsum("ki,i->k", lin, x) + jets.einsum("kij,i,j->k", quad, x, x) + c

        fields.append(TensorField.from_formula(ctx.manifold, (UPPER,), formula, name=f"X{index}"))
    return fields


@register(
    "s2-lie-bracket-jacobi",
    "§2 Lie bracket",
    Suite.CURVATURE,
    "[X,[Y,Z]] + [Y,[Z,X]] + [Z,[X,Y]] = 0",
)
def lie_bracket_jacobi(ctx: CheckContext, rng) -> float:
    x, y, z = _random_vector_fields(ctx, rng)
    total = lie_bracket(x, lie_bracket(y, z)) + lie_bracket(y, lie_bracket(z, x)) + lie_bracket(z, lie_bracket(x, y))
    return field_residual(total, ctx.subset(16))


@register(
    "s3-backend-equivalence",
    "§3 coordinate and frame computations",
    Suite.CURVATURE,
    "chart and frame backends agree on g, F, h, P, Ric, scal and W₁ at matched points",
    applies=with_twin,
)
def backend_equivalence(ctx: CheckContext, rng) -> float:
    s = ctx.structure
    twin = get_entry(ctx.entry.frame_twin).structure
    ric, scal = s.ricci
    twin_ric, twin_scal = twin.ricci
    w1 = connection_curvature(canonical_connection(s)).w1
    twin_w1 = connection_curvature(canonical_connection(twin)).w1
    pairs = [(s.g, twin.g), (s.fundamental, twin.fundamental), (s.h, twin.h), (s.p, twin.p), (ric, twin_ric)]
    residuals = []
    for point in ctx.subset(settings.equivalence_points):
        frame = frame_at(ctx.entry, point)
        for field, twin_field in pairs:
            residuals.append(to_frame(field.evaluate(point), field.kinds, frame) - twin_field.evaluate(BASEPOINT))
        residuals.append(scal.value(point) - twin_scal.value(BASEPOINT))
        residuals.append(w1.value(point) - twin_w1.value(BASEPOINT))
    return worst(residuals)


# ----------------------------------------------------------------------
# Ricci identities along ξ
# ----------------------------------------------------------------------
@register(
    "f9-ricci-xi-xi",
    "Eq. f9",
    Suite.CURVATURE,
    "Ric(ξ,ξ) = −2n + |h|²",
    applies=PARACONTACT,
)
def ricci_xi_xi(ctx: CheckContext, rng) -> float:
    s = ctx.structure
    ric, _ = s.ricci
    residuals = []
    for point in ctx.points:
        xi = s.xi.evaluate(point)
        residuals.append(xi @ ric.evaluate(point) @ xi + 2 * s.n - p_norms(s, point).h_squared)
    return worst(residuals)


@register(
    "p2-ricci-xi",
    "Prop. p2",
    Suite.CURVATURE,
    "Ric(X,ξ) = −2nη(X)",
    applies=K_PARACONTACT,
)
def ricci_xi(ctx: CheckContext, rng) -> float:
    s = ctx.structure
    ric, _ = s.ricci
    return worst(
        ric.evaluate(p) @ s.xi.evaluate(p) + 2 * s.n * s.eta.evaluate(p) for p in ctx.points
    )


@register(
    "p2-curvature-xi",
    "Prop. p2",
    Suite.CURVATURE,
    "R(X,Y)ξ = η(X)Y − η(Y)X",
    applies=PARA_SASAKIAN,
)
def curvature_xi(ctx: CheckContext, rng) -> float:
    s = ctx.structure
    r31, _ = s.curvature
    identity = np.eye(s.dim)
    residuals = []
    for point in ctx.points:
        v = s.at(point)
        lhs = np.einsum("lijk,k->lij", r31.evaluate(point), v.xi)
        rhs = np.einsum("i,lj->lij", v.eta, identity) - np.einsum("j,li->lij", v.eta, identity)
        residuals.append(lhs - rhs)
    return worst(residuals)


@register(
    "f7-nabla-xi-h",
    "Prop. p1, Eq. f7",
    Suite.CURVATURE,
    "∇_ξh = −φ + h²φ + φR(ξ,·)ξ",
    applies=PARACONTACT,
)
def nabla_xi_h(ctx: CheckContext, rng) -> float:
    s = ctx.structure
    r31, _ = s.curvature
    nabla_h = s.levi_civita.covariant_derivative(s.h)
    residuals = []
    for point in ctx.points:
        v = s.at(point)
        h = s.h.evaluate(point)
        lhs = np.einsum("r,rkj->kj", v.xi, nabla_h.evaluate(point))
        rhs = -v.phi + h @ h @ v.phi + np.einsum("kl,lajb,a,b->kj", v.phi, r31.evaluate(point), v.xi, v.xi)
        residuals.append(lhs - rhs)
    return worst(residuals)


@register(
    "f8-jacobi-operator-xi",
    "Prop. p1, Eq. f8",
    Suite.CURVATURE,
    "R(·,ξ)ξ + φR(φ·,ξ)ξ = 2φ² − 2h²",
    applies=PARACONTACT,
)
def jacobi_operator_xi(ctx: CheckContext, rng) -> float:
    s = ctx.structure
    r31, _ = s.curvature
    residuals = []
    for point in ctx.points:
        v = s.at(point)
        h = s.h.evaluate(point)
        m = np.einsum("lajb,a,b->lj", r31.evaluate(point), v.xi, v.xi)
        residuals.append(m + v.phi @ m @ v.phi - 2 * v.phi @ v.phi + 2 * h @ h)
    return worst(residuals)


def _xi_curvature(r4: np.ndarray, xi: np.ndarray) -> np.ndarray:
    return np.einsum("a,axyz->xyz", xi, r4)


@register(
    "f10-curvature-xi-form",
    "Lemma l4, Eq. f10",
    Suite.CURVATURE,
    "R(ξ,X,Y,Z) = −(∇_XF)(Y,Z) + g(X,(∇_Y φh)Z) − g(X,(∇_Z φh)Y)",
    applies=PARACONTACT,
)
def curvature_xi_form(ctx: CheckContext, rng) -> float:
    s = ctx.structure
    _, r4 = s.curvature
    nabla_phi_h = s.levi_civita.covariant_derivative(_phi_h(s))
    residuals = []
    for point in ctx.points:
        v = s.at(point)
        d = nabla_phi_h.evaluate(point)
        rhs = (
            -s.nabla_fundamental.evaluate(point)
            + np.einsum("xk,ykz->xyz", v.g, d)
            - np.einsum("xk,zky->xyz", v.g, d)
        )
        residuals.append(_xi_curvature(r4.evaluate(point), v.xi) - rhs)
    return worst(residuals)


@register(
    "f11-curvature-xi-phi-sum",
    "Lemma l4, Eq. f11",
    Suite.CURVATURE,
    "R(ξ,X,Y,Z) + R(ξ,X,φY,φZ) − R(ξ,φX,φY,Z) − R(ξ,φX,Y,φZ) = −2(∇_{hX}F)(Y,Z) + 2M(X,Z)η(Y) − 2M(X,Y)η(Z)",
    applies=PARACONTACT,
)
def curvature_xi_phi_sum(ctx: CheckContext, rng) -> float:
    s = ctx.structure
    _, r4 = s.curvature
    residuals = []
    for point in ctx.points:
        v = s.at(point)
        h = s.h.evaluate(point)
        a = _xi_curvature(r4.evaluate(point), v.xi)
        lhs = (
            a
            + np.einsum("xbc,by,cz->xyz", a, v.phi, v.phi)
            - np.einsum("abz,ax,by->xyz", a, v.phi, v.phi)
            - np.einsum("ayc,ax,cz->xyz", a, v.phi, v.phi)
        )
        m = v.g - h.T @ v.g
        rhs = (
            -2 * np.einsum("ax,ayz->xyz", h, s.nabla_fundamental.evaluate(point))
            + 2 * np.einsum("xz,y->xyz", m, v.eta)
            - 2 * np.einsum("xy,z->xyz", m, v.eta)
        )
        residuals.append(lhs - rhs)
    return worst(residuals)


@register(
    "f15-curvature-xi-xi-phi",
    "Eq. f15",
    Suite.CURVATURE,
    "R(X,ξ,ξ,Y) − R(φX,ξ,ξ,φY) = −2g + 2η⊗η + 2g(h·,h·)",
    applies=PARACONTACT,
)
def curvature_xi_xi_phi(ctx: CheckContext, rng) -> float:
    s = ctx.structure
    _, r4 = s.curvature
    residuals = []
    for point in ctx.points:
        v = s.at(point)
        r = r4.evaluate(point)
        lhs = np.einsum("irsj,r,s->ij", r, v.xi, v.xi) - np.einsum(
            "arsb,r,s,ai,bj->ij", r, v.xi, v.xi, v.phi, v.phi
        )
        rhs = -2 * v.g + 2 * np.outer(v.eta, v.eta) + 2 * s.h_low.evaluate(point) @ s.h.evaluate(point)
        residuals.append(lhs - rhs)
    return worst(residuals)


@register(
    "f16-ricci-xi-laplacian",
    "Lemma l5, Eq. f16",
    Suite.CURVATURE,
    "Ric(·,ξ) = ∇_k∇_·ξ^k = g^{ra}∇_r∇_aη − 4nη",
    applies=PARACONTACT,
)
def ricci_xi_laplacian(ctx: CheckContext, rng) -> float:
    s = ctx.structure
    ric, _ = s.ricci
    second_xi = s.levi_civita.covariant_derivative(s.nabla_xi)
    second_eta = s.levi_civita.covariant_derivative(s.nabla_eta)
    residuals = []
    for point in ctx.subset(32):
        v = s.at(point)
        ric_xi = ric.evaluate(point) @ v.xi
        trace = np.einsum("kjk->j", second_xi.evaluate(point))
        laplacian = np.einsum("ra,raj->j", v.g_inv, second_eta.evaluate(point)) - 4 * s.n * v.eta
        residuals.extend([ric_xi - trace, ric_xi - laplacian])
    return worst(residuals)


@register(
    "f17-phi-laplacian",
    "Lemma l5, Eq. f17",
    Suite.CURVATURE,
    "φ-symmetrized rough Laplacian of F against ∇φ·∇φ, Ric(ξ), h and η⊗η",
    applies=PARACONTACT,
)
def phi_laplacian(ctx: CheckContext, rng) -> float:
    s = ctx.structure
    ric, _ = s.ricci
    second_f = s.levi_civita.covariant_derivative(s.nabla_fundamental)
    residuals = []
    for point in ctx.subset(32):
        v = s.at(point)
        h_low = s.h_low.evaluate(point)
        laplacian = np.einsum("ar,arks->ks", v.g_inv, second_f.evaluate(point))
        lhs = np.einsum("sj,ks->jk", v.phi, laplacian) + np.einsum("sk,js->jk", v.phi, laplacian)
        ric_xi = ric.evaluate(point) @ v.xi
        rhs = (
            2 * np.einsum("rsj,ra,ask->jk", s.nabla_phi_low.evaluate(point), v.g_inv, s.nabla_phi.evaluate(point))
            - np.outer(ric_xi, v.eta)
            - np.outer(v.eta, ric_xi)
            + 2 * h_low @ s.h.evaluate(point)
            + 4 * h_low
            + 2 * v.g
            - 2 * (4 * s.n + 1) * np.outer(v.eta, v.eta)
        )
        residuals.append(lhs - rhs)
    return worst(residuals)


@register(
    "f20-star-ricci-symmetrized",
    "Lemma l7, Eq. f20",
    Suite.CURVATURE,
    "Ric* + Ric*ᵀ = −Ric + Ric(φ·,φ·) − 2(2n−1)g + 2(n−1)η⊗η + P·P + g(h·,h·)",
    applies=PARACONTACT,
)
def star_ricci_symmetrized(ctx: CheckContext, rng) -> float:
    s = ctx.structure
    ric, _ = s.ricci
    ric_star, _ = s.star_ricci
    residuals = []
    for point in ctx.points:
        v = s.at(point)
        rc = ric.evaluate(point)
        star = ric_star.evaluate(point)
        p = s.p.evaluate(point)
        pp = np.einsum("ra,sb,rsi,abj->ij", v.g_inv, v.g_inv, p, p)
        rhs = (
            -rc
            + v.phi.T @ rc @ v.phi
            - 2 * (2 * s.n - 1) * v.g
            + 2 * (s.n - 1) * np.outer(v.eta, v.eta)
            + pp
            + s.h_low.evaluate(point) @ s.h.evaluate(point)
        )
        residuals.append(star + star.T - rhs)
    return worst(residuals)


def _scalar_ledger(s: PacStructure, point) -> float:
    _, scal = s.ricci
    _, scal_star = s.star_ricci
    return scal.value(point) + scal_star.value(point) + 4 * s.n * s.n


@register(
    "f27-scalar-ledger",
    "Corollary c2, Eq. f27",
    Suite.CURVATURE,
    "scal + scal* + 4n² = |h|² + ½|∇φ|² − 2n",
    applies=PARACONTACT,
)
def scalar_ledger(ctx: CheckContext, rng) -> float:
    s = ctx.structure
    residuals = []
    for point in ctx.points:
        norms = p_norms(s, point)
        residuals.append(_scalar_ledger(s, point) - norms.h_squared - 0.5 * norms.grad_phi_squared + 2 * s.n)
    return worst(residuals)


@register(
    "c2-scalar-ledger-parasasakian",
    "Corollary c2",
    Suite.CURVATURE,
    "scal + scal* + 4n² = 0",
    applies=PARA_SASAKIAN,
)
def scalar_ledger_parasasakian(ctx: CheckContext, rng) -> float:
    return worst(_scalar_ledger(ctx.structure, point) for point in ctx.points)


# ----------------------------------------------------------------------
# paraSasakian curvature
# ----------------------------------------------------------------------
@register(
    "f29-curvature-phi-twist",
    "Lemma l8, Eq. f29",
    Suite.CURVATURE,
    "R(X,Y,φZ,W) + R(X,Y,Z,φW) = −dη(X,W)g(Y,Z) + dη(X,Z)g(Y,W) − dη(Y,Z)g(X,W) + dη(Y,W)g(X,Z)",
    applies=PARA_SASAKIAN,
)
def curvature_phi_twist(ctx: CheckContext, rng) -> float:
    s = ctx.structure
    _, r4 = s.curvature
    residuals = []
    for point in ctx.points:
        v = s.at(point)
        r = r4.evaluate(point)
        de = s.d_eta.evaluate(point)
        lhs = np.einsum("xyaw,az->xyzw", r, v.phi) + np.einsum("xyza,aw->xyzw", r, v.phi)
        rhs = (
            -np.einsum("xw,yz->xyzw", de, v.g)
            + np.einsum("xz,yw->xyzw", de, v.g)
            - np.einsum("yz,xw->xyzw", de, v.g)
            + np.einsum("yw,xz->xyzw", de, v.g)
        )
        residuals.append(lhs - rhs)
    return worst(residuals)


@register(
    "f30-curvature-phi-invariance",
    "Lemma l8, Eq. f30",
    Suite.CURVATURE,
    "R(φX,φY,φZ,φW) − R(X,Y,Z,W) = η(X)η(W)g(Y,Z) + η(Y)η(Z)g(X,W) − η(Y)η(W)g(X,Z) − η(X)η(Z)g(Y,W)",
    applies=PARA_SASAKIAN,
)
def curvature_phi_invariance(ctx: CheckContext, rng) -> float:
    s = ctx.structure
    _, r4 = s.curvature
    residuals = []
    for point in ctx.points:
        v = s.at(point)
        r = r4.evaluate(point)
        e = v.eta
        lhs = np.einsum("abcd,ax,by,cz,dw->xyzw", r, v.phi, v.phi, v.phi, v.phi) - r
        rhs = (
            np.einsum("x,w,yz->xyzw", e, e, v.g)
            + np.einsum("y,z,xw->xyzw", e, e, v.g)
            - np.einsum("y,w,xz->xyzw", e, e, v.g)
            - np.einsum("x,z,yw->xyzw", e, e, v.g)
        )
        residuals.append(lhs - rhs)
    return worst(residuals)


@register(
    "f31-curvature-horizontal-planes",
    "Lemma l8, Eq. f31",
    Suite.CURVATURE,
    "for horizontal X, Y: R(X,φX,Y,φY) = −R(X,Y,X,Y) + R(X,φY,X,φY) + 2(dη(X,Y)² − g(X,Y)² + g(X,X)g(Y,Y))",
    applies=PARA_SASAKIAN,
)
def curvature_horizontal_planes(ctx: CheckContext, rng) -> float:
    s = ctx.structure
    _, r4 = s.curvature
    residuals = []
    for point in ctx.points:
        v = s.at(point)
        r = r4.evaluate(point)
        de = s.d_eta.evaluate(point)
        projector = v.phi @ v.phi
        x, y = (projector @ w for w in rng.standard_normal((2, s.dim)))
        px, py = v.phi @ x, v.phi @ y

        def curv(a, b, c, d):
            return np.einsum("ijkw,i,j,k,w->", r, a, b, c, d)

        gxy = x @ v.g @ y
        rhs = -curv(x, y, x, y) + curv(x, py, x, py) + 2 * ((x @ de @ y) ** 2 - gxy**2 + (x @ v.g @ x) * (y @ v.g @ y))
        residuals.append(curv(x, px, y, py) - rhs)
    return worst(residuals)


@register(
    "f32-ricci-phi-skew",
    "Lemma l8, Eq. f32",
    Suite.CURVATURE,
    "Ric(X,φY) + Ric(φX,Y) = 0",
    applies=PARA_SASAKIAN,
)
def ricci_phi_skew(ctx: CheckContext, rng) -> float:
    s = ctx.structure
    ric, _ = s.ricci
    residuals = []
    for point in ctx.points:
        rc = ric.evaluate(point)
        phi = s.phi.evaluate(point)
        residuals.append(rc @ phi + phi.T @ rc)
    return worst(residuals)


@register(
    "l10-ricci-phi-trace",
    "Lemma l10",
    Suite.CURVATURE,
    "Ric(X,Y) = ½ Σ ε_i R(X,φY,e_i,φe_i) − (2n−1)g(X,Y) − η(X)η(Y)",
    applies=PARA_SASAKIAN,
)
def ricci_phi_trace(ctx: CheckContext, rng) -> float:
    s = ctx.structure
    ric, _ = s.ricci
    _, r4 = s.curvature
    residuals = []
    for point in ctx.points:
        v = s.at(point)
        trace = 0.5 * np.einsum("ab,cb,xqac,qy->xy", v.g_inv, v.phi, r4.evaluate(point), v.phi)
        rhs = trace - (2 * s.n - 1) * v.g - np.outer(v.eta, v.eta)
        residuals.append(ric.evaluate(point) - rhs)
    return worst(residuals)


@register(
    "l10-ricci-phi-conjugate",
    "Lemma l10",
    Suite.CURVATURE,
    "Ric(φX,φY) = −Ric(X,Y) − 2nη(X)η(Y)",
    applies=PARA_SASAKIAN,
)
def ricci_phi_conjugate(ctx: CheckContext, rng) -> float:
    s = ctx.structure
    ric, _ = s.ricci
    residuals = []
    for point in ctx.points:
        v = s.at(point)
        rc = ric.evaluate(point)
        residuals.append(v.phi.T @ rc @ v.phi + rc + 2 * s.n * np.outer(v.eta, v.eta))
    return worst(residuals)


@register(
    "l10-ricci-derivative-cyclic",
    "Lemma l10",
    Suite.CURVATURE,
    "(∇_ZRic)(X,Y) through (∇_XRic)(Y,Z), (∇_{φY}Ric)(φX,Z) and Ric(φ·,Z) terms",
    applies=PARA_SASAKIAN,
)
def ricci_derivative_cyclic(ctx: CheckContext, rng) -> float:
    s = ctx.structure
    ric, _ = s.ricci
    nabla_ric = s.levi_civita.covariant_derivative(ric)
    n = s.n
    residuals = []
    for point in ctx.subset(32):
        v = s.at(point)
        rc = ric.evaluate(point)
        d = nabla_ric.evaluate(point)
        rhs = (
            np.einsum("xyz->zxy", d)
            - np.einsum("ay,bx,abz->zxy", v.phi, v.phi, d)
            - np.einsum("x,ay,az->zxy", v.eta, v.phi, rc)
            - 2 * np.einsum("y,ax,az->zxy", v.eta, v.phi, rc)
            - 2 * n * np.einsum("x,ay,az->zxy", v.eta, v.phi, v.g)
            - 4 * n * np.einsum("y,ax,az->zxy", v.eta, v.phi, v.g)
        )
        residuals.append(d - rhs)
    return worst(residuals)


@register(
    "f80-eta-einstein-fit",
    "Eqs. f80–f81",
    Suite.CURVATURE,
    "Ric = a g + b η⊗η with constant a + b = −2n and a = scal/2n + 1",
    applies=PARA_SASAKIAN,
)
def eta_einstein(ctx: CheckContext, rng) -> float:
    s = ctx.structure
    _, scal = s.ricci
    fit = fit_eta_einstein(s, ctx.points)
    mean_scal = float(np.mean([scal.value(p) for p in ctx.points]))
    a, b = einstein_coefficients(mean_scal, s.n)
    return max(
        abs(fit.a + fit.b + 2 * s.n),
        abs(fit.a - a),
        abs(fit.b - b),
        fit.residual,
        fit.a_spread,
        fit.b_spread,
    )
