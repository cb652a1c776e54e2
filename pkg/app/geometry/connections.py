"""Metric connections with torsion adapted to a paracontact structure.

Torsion 3-forms are stored ``[i, j, l]`` = ``g(T(e_i, e_j), e_l)``.
"""

from enum import Enum
from functools import cached_property
from typing import NamedTuple, Optional, Sequence

import numpy as np

from app.config import settings
from app.errors import NotKillingError, NotSkewError, StructureRejectedError
from app.geometry.paracontact import PacStructure
from app.geometry.riemann import (
    CONNECTION_KINDS,
    AffineConnection,
    lower_curvature,
    ricci_tensor,
    trace_with,
)
from app.geometry.tensors import (
    LOWER,
    ScalarField,
    TensorField,
    exterior_derivative,
    symmetry_defect,
    wedge_jet,
)
from app.logger import get_logger
from app.models.manifold import Point
from app.utils import jet as jets
from app.utils.jet import Jet
from app.utils.sampling import default_tolerance

logger = get_logger("connections")

TORSION_KINDS = (LOWER, LOWER, LOWER)


class ConnectionKind(str, Enum):
    CANONICAL = "canonical"
    SKEW_TORSION = "skew_torsion"


class TorsionConnection:
    """A connection together with the structure it is adapted to"""

    def __init__(
        self,
        base: AffineConnection,
        structure: PacStructure,
        kind: ConnectionKind,
        torsion3: Optional[TensorField] = None,
    ):
        self.base = base
        self.structure = structure
        self.kind = kind
        self._torsion3 = torsion3

    def __repr__(self) -> str:
        return f"TorsionConnection({self.kind.value}, {self.structure.name!r})"

    @property
    def coefficients(self) -> TensorField:
        return self.base.coefficients

    @cached_property
    def torsion(self) -> TensorField:
        """T^k_ij computed from the coefficients"""
        return self.base.torsion()

    @cached_property
    def torsion3(self) -> TensorField:
        if self._torsion3 is not None:
            return self._torsion3
        return lower_torsion(self.torsion, self.structure.g)

    @cached_property
    def curvature(self):
        """(R^l_ijk, R_ijkw) of this connection"""
        r31 = self.base.curvature()
        return r31, lower_curvature(r31, self.structure.g)

    @cached_property
    def ricci(self) -> TensorField:
        return ricci_tensor(self.base)

    def covariant_derivative(self, t: TensorField) -> TensorField:
        return self.base.covariant_derivative(t)


def lower_torsion(torsion: TensorField, g: TensorField) -> TensorField:
    return TensorField.derived(
        TORSION_KINDS, lambda t, metric: jets.einsum("kij,kl->ijl", t, metric), torsion, g, name="T_low"
    )


def _require_paracontact(s: PacStructure, points: Sequence[Point], tol: float) -> None:
    for point in points:
        defect = float(np.max(np.abs(s.fundamental.evaluate(point) - s.d_eta.evaluate(point))))
        if defect >= tol:
            raise StructureRejectedError(
                f"{s.name} is not paracontact at {point.coords} (|F - dη| = {defect:.3e})"
            )


def canonical_connection(
    s: PacStructure, points: Sequence[Point] = (), tol: Optional[float] = None
) -> TorsionConnection:
    """∇̃_X Y = ∇_X Y + η(X)φY − η(Y)∇_X ξ + (∇_X η)(Y) ξ

    Raises:
        StructureRejectedError: F ≠ dη at one of ``points``
    """
    _require_paracontact(s, points, default_tolerance(s.manifold) if tol is None else tol)

    def difference(eta: Jet, phi: Jet, nabla_xi: Jet, nabla_eta: Jet, xi: Jet) -> Jet:
        return (
            jets.einsum("i,kj->kij", eta, phi)
            - jets.einsum("j,ik->kij", eta, nabla_xi)
            + jets.einsum("ij,k->kij", nabla_eta, xi)
        )

    w = TensorField.derived(
        CONNECTION_KINDS, difference, s.eta, s.phi, s.nabla_xi, s.nabla_eta, s.xi, name="W_canonical"
    )
    base = s.levi_civita.shifted(w, name=f"canonical[{s.name}]")
    logger.debug("built canonical connection of %s", s.name)
    return TorsionConnection(base, s, ConnectionKind.CANONICAL)


def canonical_torsion_formula(s: PacStructure) -> TensorField:
    """η(X)φhY − η(Y)φhX + 2g(X,φY)ξ, stored [k, i, j]"""

    def compute(eta: Jet, phi: Jet, h: Jet, f: Jet, xi: Jet) -> Jet:
        phi_h = jets.einsum("ka,aj->kj", phi, h)
        return (
            jets.einsum("i,kj->kij", eta, phi_h)
            - jets.einsum("j,ki->kij", eta, phi_h)
            + jets.einsum("ij,k->kij", f, xi).scale(2.0)
        )

    return TensorField.derived(CONNECTION_KINDS, compute, s.eta, s.phi, s.h, s.fundamental, s.xi, name="T_formula")


class CanonicalCurvature(NamedTuple):
    r31: TensorField
    r4: TensorField
    ricci: TensorField
    w1: ScalarField


def connection_curvature(c: TorsionConnection) -> CanonicalCurvature:
    """R̃, R̃ic and W₁ = g^{jk} R̃ic_jk, all computed from ∇̃ directly"""
    r31, r4 = c.curvature
    w1 = trace_with(c.structure.g, c.ricci, name=f"W1[{c.structure.name}]")
    return CanonicalCurvature(r31, r4, c.ricci, w1)


def canonical_curvature_formula(s: PacStructure) -> TensorField:
    """R̃ expressed through the Levi-Civita data of ``s``, stored [l, i, j, k]"""
    r31, _ = s.curvature

    def compute(r: Jet, nphi: Jet, eta: Jet, f: Jet, phi: Jet, nxi: Jet, neta: Jet, xi: Jet) -> Jet:
        return (
            r
            + jets.einsum("ilk,j->lijk", nphi, eta)
            - jets.einsum("jlk,i->lijk", nphi, eta)
            + jets.einsum("ij,lk->lijk", f, phi).scale(2.0)
            - jets.einsum("ls,js,i,k->lijk", phi, nxi, eta, eta)
            + jets.einsum("ls,is,j,k->lijk", phi, nxi, eta, eta)
            + jets.einsum("l,is,sk,j->lijk", xi, neta, phi, eta)
            - jets.einsum("l,js,sk,i->lijk", xi, neta, phi, eta)
            - jets.einsum("l,sijk,s->lijk", xi, r, eta)
            - jets.einsum("k,lijs,s->lijk", eta, r, xi)
            + jets.einsum("jk,il->lijk", neta, nxi)
            - jets.einsum("ik,jl->lijk", neta, nxi)
        )

    return TensorField.derived(
        r31.kinds, compute, r31, s.nabla_phi, s.eta, s.fundamental, s.phi, s.nabla_xi, s.nabla_eta, s.xi,
        name="R~formula",
    )


def canonical_ricci_formula(s: PacStructure) -> TensorField:
    """R̃ic_jk = Ric_jk − 2g_jk + 2η_jη_k − η_k Ric_js ξ^s − R_jsrk ξ^s ξ^r − ∇_r η_k ∇_j ξ^r"""
    ric, _ = s.ricci
    _, r4 = s.curvature

    def compute(rc: Jet, g: Jet, eta: Jet, xi: Jet, r: Jet, neta: Jet, nxi: Jet) -> Jet:
        return (
            rc
            - g.scale(2.0)
            + jets.einsum("j,k->jk", eta, eta).scale(2.0)
            - jets.einsum("k,js,s->jk", eta, rc, xi)
            - jets.einsum("jsrk,s,r->jk", r, xi, xi)
            - jets.einsum("rk,jr->jk", neta, nxi)
        )

    return TensorField.derived((LOWER, LOWER), compute, ric, s.g, s.eta, s.xi, r4, s.nabla_eta, s.nabla_xi, name="Ric~formula")


# ----------------------------------------------------------------------
# skew torsion
# ----------------------------------------------------------------------
def lowered_n1(s: PacStructure) -> TensorField:
    """N¹(X,Y,Z) = g(N¹(X,Y), Z)"""
    return TensorField.derived(
        TORSION_KINDS, lambda n, g: jets.einsum("kij,kl->ijl", n, g), s.nijenhuis["N1"], s.g, name="N1_low"
    )


class PhiForms(NamedTuple):
    d_f_minus: TensorField
    d_f_phi: TensorField


def phi_forms(s: PacStructure) -> PhiForms:
    """dF⁻ and dF^φ(X,Y,Z) = −dF(φX,φY,φZ)"""

    def minus(df: Jet, phi: Jet) -> Jet:
        return (
            jets.einsum("ajk,ai->ijk", df, phi)
            + jets.einsum("ibc,bj,ck->ijk", df, phi, phi)
            + jets.einsum("ajc,ai,ck->ijk", df, phi, phi)
            + df
        )

    def twisted(df: Jet, phi: Jet) -> Jet:
        return -jets.einsum("abc,ai,bj,ck->ijk", df, phi, phi, phi)

    return PhiForms(
        TensorField.derived(TORSION_KINDS, minus, s.d_fundamental, s.phi, name="dF-"),
        TensorField.derived(TORSION_KINDS, twisted, s.d_fundamental, s.phi, name="dF^φ"),
    )


def skew_torsion_form(s: PacStructure) -> TensorField:
    """T = 2η∧dη + dF^φ − N¹ + η∧(ξ⌟N¹)"""
    d_f_phi = phi_forms(s).d_f_phi

    def compute(eta: Jet, deta: Jet, dfp: Jet, n1: Jet, xi: Jet) -> Jet:
        xi_n1 = jets.einsum("a,ajk->jk", xi, n1)
        return wedge_jet(eta, deta).scale(2.0) + dfp - n1 + wedge_jet(eta, xi_n1)

    return TensorField.derived(
        TORSION_KINDS, compute, s.eta, s.d_eta, d_f_phi, lowered_n1(s), s.xi, name="T_skew"
    )


def _raise_half(t3: TensorField, s: PacStructure) -> TensorField:
    """½ g^{kl} T_ijl as connection coefficients"""
    return TensorField.derived(
        CONNECTION_KINDS, lambda t, gi: jets.einsum("ijl,kl->kij", t, gi).scale(0.5), t3, s.g_inv, name="½T"
    )


def skew_torsion_connection(
    s: PacStructure, points: Sequence[Point], tol: Optional[float] = None
) -> TorsionConnection:
    """g(∇̄_X Y, Z) = g(∇_X Y, Z) + ½T(X,Y,Z)

    Raises:
        NotSkewError: N¹ lowered with g is not totally skew at some sample
        NotKillingError: ξ is not a Killing field at some sample
    """
    tol = default_tolerance(s.manifold) if tol is None else tol
    killing = max((s.killing.jet(p).max_abs() for p in points), default=0.0)
    if killing >= tol:
        raise NotKillingError(killing)
    n1 = lowered_n1(s)
    skew = max((symmetry_defect(n1.evaluate(p)) for p in points), default=0.0)
    if skew >= tol:
        raise NotSkewError(skew)
    t3 = skew_torsion_form(s)
    base = s.levi_civita.shifted(_raise_half(t3, s), name=f"skew[{s.name}]")
    logger.debug("built skew-torsion connection of %s", s.name)
    return TorsionConnection(base, s, ConnectionKind.SKEW_TORSION, torsion3=t3)


def perturbed_connection(c: TorsionConnection, delta: np.ndarray) -> AffineConnection:
    """∇̄ shifted by a constant skew 3-form δ (same ½-raising as T)"""
    s = c.structure
    field = TensorField.constant(s.manifold, TORSION_KINDS, delta, name="δ")
    return c.base.shifted(_raise_half(field, s), name="perturbed")


def random_skew_form(rng: np.random.Generator, dim: int, size: float) -> np.ndarray:
    """Totally antisymmetric 3-form with max component ``size``"""
    raw = rng.standard_normal((dim,) * 3)
    skew = (
        raw
        - raw.transpose(1, 0, 2)
        - raw.transpose(0, 2, 1)
        - raw.transpose(2, 1, 0)
        + raw.transpose(1, 2, 0)
        + raw.transpose(2, 0, 1)
    )
    return size * skew / np.max(np.abs(skew))


def uniqueness_margin(c: TorsionConnection, points: Sequence[Point], rng: np.random.Generator) -> float:
    """Largest failure of ∇′g, ∇′η or ∇′φ to vanish after perturbing T"""
    s = c.structure
    delta = random_skew_form(rng, s.dim, settings.perturbation_norm)
    perturbed = perturbed_connection(c, delta)
    derivatives = [perturbed.covariant_derivative(t) for t in (s.g, s.eta, s.phi)]
    return max(
        (d.jet(p).max_abs() for d in derivatives for p in points),
        default=0.0,
    )


# ----------------------------------------------------------------------
# Ricci forms of the skew-torsion connection
# ----------------------------------------------------------------------
class RicciForms(NamedTuple):
    rho: TensorField
    t: TensorField
    dt: TensorField


def _half_phi_trace(kinds, subscripts: str, b: TensorField, s: PacStructure, name: str) -> TensorField:
    return TensorField.derived(
        kinds,
        lambda gi, phi, value: jets.einsum(subscripts, gi, phi, value).scale(0.5),
        s.g_inv,
        s.phi,
        b,
        name=name,
    )


def rho_t_dt(c: TorsionConnection) -> RicciForms:
    """ρ(X,Y) = ½Σε R̄(X,Y,e_i,φe_i), t(X) = ½Σε T(X,e_i,φe_i), dt(X,Y) = ½Σε dT(X,Y,e_i,φe_i)

    Signed traces over a pseudo-orthonormal basis collapse to g^{ab}φ^c_b(·)_ac.
    """
    s = c.structure
    _, r4 = c.curvature
    d_torsion = exterior_derivative(c.torsion3)
    rho = _half_phi_trace((LOWER, LOWER), "ab,cb,ijac->ij", r4, s, "ρ")
    t = _half_phi_trace((LOWER,), "ab,cb,iac->i", c.torsion3, s, "t")
    dt = _half_phi_trace((LOWER, LOWER), "ab,cb,ijac->ij", d_torsion, s, "dt")
    return RicciForms(rho, t, dt)
