"""Affine connections, the Levi-Civita connection and metric curvature.

Conventions:

* ``∇_{e_i} e_j = Γ^k_ij e_k`` with coefficients stored as ``[k, i, j]``.
* ``R(X,Y)Z = ∇_X∇_Y Z − ∇_Y∇_X Z − ∇_[X,Y] Z`` with ``R(e_i,e_j)e_k = R^l_ijk e_l``
  stored as ``[l, i, j, k]``; the (4,0) form is ``R(X,Y,Z,W) = g(R(X,Y)Z, W)``.
* ``Ric(Y,Z) = tr(X ↦ R(X,Y)Z)``.
* Covariant derivatives put the derivative index first.
"""

from typing import Optional, Tuple

import numpy as np

from app.config import settings
from app.errors import PlaneDegeneracyError, UsageError
from app.geometry.tensors import (
    LOWER,
    UPPER,
    ScalarField,
    TensorField,
    _letters,
    inverse_metric,
    structure_jet,
)
from app.logger import get_logger
from app.models.manifold import Point
from app.utils import jet as jets
from app.utils.jet import Jet

logger = get_logger("riemann")

CONNECTION_KINDS = (UPPER, LOWER, LOWER)


class AffineConnection:
    """Connection given by its coefficients in the active backend basis"""

    def __init__(
        self,
        coefficients: TensorField,
        metric: Optional[TensorField] = None,
        torsion_spec: Optional[TensorField] = None,
        name: str = "connection",
    ):
        if coefficients.kinds != CONNECTION_KINDS:
            raise UsageError(f"connection coefficients must have kinds {CONNECTION_KINDS}")
        self.coefficients = coefficients
        self.metric = metric
        self.torsion_spec = torsion_spec
        self.name = name
        self._torsion: Optional[TensorField] = None
        self._curvature: Optional[TensorField] = None

    @property
    def manifold(self):
        return self.coefficients.manifold

    def shifted(self, difference: TensorField, name: str = "") -> "AffineConnection":
        """∇ + W for a (1,2) tensor W with the same index layout"""
        return AffineConnection(self.coefficients + difference, self.metric, name=name or f"{self.name}+W")

    def torsion(self) -> TensorField:
        """T^k_ij = Γ^k_ij − Γ^k_ji − c^k_ij"""
        if self._torsion is None:
            c = structure_jet(self.manifold)
            self._torsion = TensorField.derived(
                CONNECTION_KINDS,
                lambda gamma: gamma - gamma.transpose(0, 2, 1) - c,
                self.coefficients,
                name=f"T[{self.name}]",
            )
        return self._torsion

    def covariant_derivative(self, t: TensorField) -> TensorField:
        return covariant_derivative(self, t)

    def curvature(self) -> TensorField:
        if self._curvature is None:
            self._curvature = _curvature_field(self)
        return self._curvature


def covariant_derivative_jet(gamma: Jet, t: Jet, kinds) -> Jet:
    rank = len(kinds)
    letters = _letters(rank, skip="amz")
    out = jets.einsum(f"a{letters}->a{letters}", t.grad())
    for slot, kind in enumerate(kinds):
        src = letters[:slot] + "m" + letters[slot + 1:]
        if kind == UPPER:
            out = out + jets.einsum(f"{letters[slot]}am,{src}->a{letters}", gamma, t)
        else:
            out = out - jets.einsum(f"ma{letters[slot]},{src}->a{letters}", gamma, t)
    return out


def covariant_derivative(connection: AffineConnection, t: TensorField) -> TensorField:
    """(∇T)[a, ...] = ∇_{e_a} T"""
    kinds = t.kinds
    coefficients = connection.coefficients

    def compute(point: Point, order: int) -> Jet:
        return covariant_derivative_jet(coefficients.jet(point, order), t.jet(point, order + 1), kinds)

    return TensorField(t.manifold, (LOWER,) + kinds, compute, name=f"∇{t.name}")


def levi_civita_jet(g: Jet, g_inv: Jet, c: Jet) -> Jet:
    """Koszul formula: Γ_ijl = g(∇_i e_j, e_l), then raised with g^{kl}"""
    dg = g.grad()
    lowered = (
        dg
        + jets.einsum("jli->ijl", dg)
        - jets.einsum("lij->ijl", dg)
        + jets.einsum("mij,ml->ijl", c, g)
        - jets.einsum("mjl,mi->ijl", c, g)
        + jets.einsum("mli,mj->ijl", c, g)
    ).scale(0.5)
    return jets.einsum("kl,ijl->kij", g_inv, lowered)


def levi_civita(g: TensorField) -> AffineConnection:
    """Torsion-free metric connection of g"""
    cached = getattr(g, "_levi_civita", None)
    if cached is not None:
        return cached
    g_inv = inverse_metric(g)
    c = structure_jet(g.manifold)

    def compute(point: Point, order: int) -> Jet:
        return levi_civita_jet(g.jet(point, order + 1), g_inv.jet(point, order), c)

    coefficients = TensorField(g.manifold, CONNECTION_KINDS, compute, name=f"Γ[{g.name}]")
    connection = AffineConnection(coefficients, metric=g, name=f"LC[{g.name}]")
    g._levi_civita = connection
    logger.debug("built Levi-Civita connection of %s", g.name)
    return connection


def curvature_jet(gamma: Jet, c: Jet) -> Jet:
    grad = gamma.grad()
    return (
        jets.einsum("iljk->lijk", grad)
        - jets.einsum("jlik->lijk", grad)
        + jets.einsum("lim,mjk->lijk", gamma, gamma)
        - jets.einsum("ljm,mik->lijk", gamma, gamma)
        - jets.einsum("mij,lmk->lijk", c, gamma)
    )


def _curvature_field(connection: AffineConnection) -> TensorField:
    coefficients = connection.coefficients
    c = structure_jet(connection.manifold)

    def compute(point: Point, order: int) -> Jet:
        return curvature_jet(coefficients.jet(point, order + 1), c)

    return TensorField(connection.manifold, (UPPER, LOWER, LOWER, LOWER), compute, name=f"R[{connection.name}]")


def lower_curvature(r31: TensorField, g: TensorField) -> TensorField:
    """R(X,Y,Z,W) = g(R(X,Y)Z, W), indexed [i, j, k, w]"""
    return TensorField.derived(
        (LOWER,) * 4,
        lambda r, metric: jets.einsum("lijk,wl->ijkw", r, metric),
        r31,
        g,
        name=f"{r31.name}_4",
    )


def riemann_curvature(
    connection: AffineConnection, g: Optional[TensorField] = None
) -> Tuple[TensorField, TensorField]:
    metric = g if g is not None else connection.metric
    if metric is None:
        raise UsageError(f"{connection.name} has no metric to lower its curvature with")
    r31 = connection.curvature()
    return r31, lower_curvature(r31, metric)


def ricci_tensor(connection: AffineConnection) -> TensorField:
    return TensorField.derived(
        (LOWER, LOWER), lambda r: jets.einsum("iijk->jk", r), connection.curvature(), name=f"Ric[{connection.name}]"
    )


def trace_with(g: TensorField, b: TensorField, name: str = "") -> ScalarField:
    """g^{jk} B_jk"""
    g_inv = inverse_metric(g)
    field = TensorField.derived((), lambda gi, m: jets.einsum("jk,jk->", gi, m), g_inv, b, name=name or f"tr {b.name}")
    return ScalarField.wrap(field)


def ricci_scalar(connection: AffineConnection, g: Optional[TensorField] = None) -> Tuple[TensorField, ScalarField]:
    metric = g if g is not None else connection.metric
    if metric is None:
        raise UsageError(f"{connection.name} has no metric to trace with")
    ric = ricci_tensor(connection)
    return ric, trace_with(metric, ric, name=f"scal[{connection.name}]")


def sectional_curvature(g: TensorField, r4: TensorField, x: np.ndarray, y: np.ndarray, p: Point) -> float:
    """K(X,Y) = R(X,Y,Y,X) / (g(X,X)g(Y,Y) − g(X,Y)²)"""
    metric = g.evaluate(p)
    denominator = (x @ metric @ x) * (y @ metric @ y) - (x @ metric @ y) ** 2
    if abs(denominator) < settings.plane_threshold:
        raise PlaneDegeneracyError(f"plane is degenerate at {p.coords} (|Δ| = {abs(denominator):.3e})")
    numerator = np.einsum("ijkw,i,j,k,w->", r4.evaluate(p), x, y, y, x)
    return float(numerator / denominator)


def codifferential(g: TensorField, eta: TensorField, connection: Optional[AffineConnection] = None) -> ScalarField:
    """δη = −g^{ij}(∇_i η)_j"""
    if eta.kinds != (LOWER,):
        raise UsageError(f"{eta.name} is not a 1-form")
    connection = connection or levi_civita(g)
    nabla_eta = connection.covariant_derivative(eta)
    divergence = trace_with(g, nabla_eta)
    return ScalarField.wrap(divergence.scaled(-1.0))
