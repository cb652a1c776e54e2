"""Almost paracontact metric structures (φ, ξ, η, g).

Index layouts follow :mod:`app.geometry.riemann`. In particular

* ``φ`` is stored ``[k, j]`` with ``φ e_j = φ^k_j e_k``;
* ``F_ij = F(e_i, e_j) = g(e_i, φ e_j)``;
* ``∇φ`` is stored ``[r, k, i]`` = ``(∇_{e_r} φ)^k_i`` and its lowered form
  ``[r, s, i]`` = ``g(e_s, (∇_{e_r} φ) e_i)``;
* the N-tensors of valence (1,2) are stored ``[k, i, j]`` = ``N(e_i, e_j)^k``.
"""

from functools import cached_property
from typing import Dict, List, NamedTuple, Optional, Sequence

import numpy as np
from tenacity import Retrying, retry_if_exception_type, stop_after_attempt

from app.config import settings
from app.errors import (
    CompatibilityError,
    ConstructionError,
    DegeneracyError,
    NullPivotError,
    StructureRejectedError,
    UsageError,
)
from app.geometry.riemann import levi_civita, riemann_curvature, ricci_scalar, trace_with
from app.geometry.tensors import (
    LOWER,
    UPPER,
    TensorField,
    _common_manifold,
    exterior_derivative,
    inverse_metric,
    lie_derivative,
    structure_jet,
)
from app.logger import get_logger
from app.models.manifold import Point
from app.models.report import (
    ClassificationReport,
    EtaEinsteinFit,
    FlagResult,
    ResidualReport,
    StructureFlag,
    StructureNorms,
)
from app.utils import jet as jets
from app.utils.jet import Jet
from app.utils.sampling import default_tolerance

logger = get_logger("paracontact")


class PointValues(NamedTuple):
    """Structure tensors evaluated at one point"""
    phi: np.ndarray
    xi: np.ndarray
    eta: np.ndarray
    g: np.ndarray
    g_inv: np.ndarray


class PacStructure:
    """An almost paracontact structure, optionally with a compatible metric.

    Derived tensors are built lazily on first access and cached on the
    instance; each field in turn caches its jets per point.
    """

    def __init__(
        self,
        phi: TensorField,
        xi: TensorField,
        eta: TensorField,
        g: Optional[TensorField] = None,
        name: str = "",
    ):
        fields = [phi, xi, eta] + ([g] if g is not None else [])
        self.manifold = _common_manifold(*fields)
        if phi.kinds != (UPPER, LOWER):
            raise UsageError(f"phi must be a (1,1) tensor, got kinds {phi.kinds}")
        if xi.kinds != (UPPER,):
            raise UsageError(f"xi must be a vector field, got kinds {xi.kinds}")
        if eta.kinds != (LOWER,):
            raise UsageError(f"eta must be a 1-form, got kinds {eta.kinds}")
        if g is not None and g.kinds != (LOWER, LOWER):
            raise UsageError(f"g must be a (0,2) tensor, got kinds {g.kinds}")
        self.phi = phi
        self.xi = xi
        self.eta = eta
        self._g = g
        self.name = name or self.manifold.name

    def __repr__(self) -> str:
        return f"PacStructure({self.name!r}, dim={self.dim})"

    @property
    def dim(self) -> int:
        return self.manifold.dim

    @property
    def n(self) -> int:
        return self.manifold.n

    @property
    def g(self) -> TensorField:
        if self._g is None:
            raise UsageError(f"{self.name} has no metric; build one with build_compatible_metric")
        return self._g

    def with_metric(self, g: TensorField) -> "PacStructure":
        return PacStructure(self.phi, self.xi, self.eta, g, name=self.name)

    def at(self, point: Point) -> PointValues:
        return PointValues(
            phi=self.phi.evaluate(point),
            xi=self.xi.evaluate(point),
            eta=self.eta.evaluate(point),
            g=self.g.evaluate(point),
            g_inv=self.g_inv.evaluate(point),
        )

    # ------------------------------------------------------------------
    # metric data
    # ------------------------------------------------------------------
    @cached_property
    def g_inv(self) -> TensorField:
        return inverse_metric(self.g)

    @cached_property
    def levi_civita(self):
        return levi_civita(self.g)

    @cached_property
    def fundamental(self) -> TensorField:
        """F(X,Y) = g(X, φY)"""
        return TensorField.derived(
            (LOWER, LOWER), lambda g, phi: jets.einsum("ia,aj->ij", g, phi), self.g, self.phi, name="F"
        )

    @cached_property
    def d_eta(self) -> TensorField:
        return exterior_derivative(self.eta)

    @cached_property
    def d_fundamental(self) -> TensorField:
        return exterior_derivative(self.fundamental)

    @cached_property
    def phi_squared(self) -> TensorField:
        return TensorField.derived(
            (UPPER, LOWER), lambda phi: jets.einsum("ka,aj->kj", phi, phi), self.phi, name="φ²"
        )

    @cached_property
    def nijenhuis(self) -> Dict[str, TensorField]:
        return nijenhuis_suite(self)

    @cached_property
    def killing(self) -> TensorField:
        """£_ξ g"""
        return lie_derivative(self.xi, self.g)

    @cached_property
    def h_pair(self) -> "HTensor":
        return compute_h(self)

    @property
    def h(self) -> TensorField:
        return self.h_pair.h

    @property
    def h_low(self) -> TensorField:
        return self.h_pair.h_low

    @cached_property
    def nabla_phi(self) -> TensorField:
        return self.levi_civita.covariant_derivative(self.phi)

    @cached_property
    def nabla_phi_low(self) -> TensorField:
        return TensorField.derived(
            (LOWER,) * 3,
            lambda nphi, g: jets.einsum("rki,sk->rsi", nphi, g),
            self.nabla_phi,
            self.g,
            name="∇φ_low",
        )

    @cached_property
    def nabla_eta(self) -> TensorField:
        return self.levi_civita.covariant_derivative(self.eta)

    @cached_property
    def nabla_xi(self) -> TensorField:
        return self.levi_civita.covariant_derivative(self.xi)

    @cached_property
    def nabla_fundamental(self) -> TensorField:
        return self.levi_civita.covariant_derivative(self.fundamental)

    @cached_property
    def p(self) -> TensorField:
        return p_tensor(self)

    # ------------------------------------------------------------------
    # curvature
    # ------------------------------------------------------------------
    @cached_property
    def curvature(self):
        """(R^l_ijk, R_ijkw)"""
        return riemann_curvature(self.levi_civita, self.g)

    @cached_property
    def ricci(self):
        """(Ric, scal)"""
        return ricci_scalar(self.levi_civita, self.g)

    @cached_property
    def star_ricci(self):
        return star_ricci(self)


# ----------------------------------------------------------------------
# pointwise helpers
# ----------------------------------------------------------------------
def phi_trace(g_inv: np.ndarray, phi: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Σ ε_i B(..., e_i, φe_i) over a pseudo-orthonormal basis, for B's last two slots"""
    return np.einsum("ab,cb,...ac->...", g_inv, phi, b)


def basis_phi_trace(basis: "PhiBasis", phi: np.ndarray, b: np.ndarray) -> np.ndarray:
    """The same signed trace summed over an explicit φ-basis"""
    e = basis.vectors
    return np.einsum("ai,i,ci,...ac->...", e, basis.signs, phi @ e, b)


def squared_norm(g_inv: np.ndarray, t: np.ndarray) -> float:
    """Full contraction of a covariant tensor with itself through g^{-1}; may be negative"""
    letters = "abcdef"[: t.ndim]
    raised = "ABCDEF"[: t.ndim]
    operands = [g_inv] * t.ndim + [t, t]
    subscripts = ",".join(f"{a}{b}" for a, b in zip(letters, raised)) + f",{letters},{raised}->"
    return float(np.einsum(subscripts, *operands))


def signature(g: np.ndarray) -> tuple:
    eigenvalues = np.linalg.eigvalsh(0.5 * (g + g.T))
    scale = max(1.0, float(np.max(np.abs(eigenvalues))))
    positive = int(np.sum(eigenvalues > settings.det_threshold * scale))
    negative = int(np.sum(eigenvalues < -settings.det_threshold * scale))
    return positive, negative


# ----------------------------------------------------------------------
# operations
# ----------------------------------------------------------------------
def validate_structure(s: PacStructure, points: Sequence[Point]) -> ResidualReport:
    """Max-abs residual per axiom over ``points``.

    Raises:
        StructureRejectedError: g does not have signature (n+1, n) somewhere
    """
    dim, n = s.dim, s.n
    identity = np.eye(dim)
    worst: Dict[str, float] = {
        "phi_xi": 0.0,
        "eta_phi": 0.0,
        "eta_xi": 0.0,
        "phi_squared": 0.0,
        "compatibility": 0.0,
        "metric_xi": 0.0,
        "metric_symmetry": 0.0,
    }
    expected = (n + 1, n)
    for point in points:
        v = s.at(point)
        residuals = {
            "phi_xi": v.phi @ v.xi,
            "eta_phi": v.eta @ v.phi,
            "eta_xi": np.asarray(v.eta @ v.xi - 1.0),
            "phi_squared": v.phi @ v.phi - identity + np.outer(v.xi, v.eta),
            "compatibility": v.phi.T @ v.g @ v.phi + v.g - np.outer(v.eta, v.eta),
            "metric_xi": v.g @ v.xi - v.eta,
            "metric_symmetry": v.g - v.g.T,
        }
        for key, value in residuals.items():
            worst[key] = max(worst[key], float(np.max(np.abs(value))))
        found = signature(v.g)
        if found != expected:
            raise StructureRejectedError(
                f"{s.name}: metric signature {found} at {point.coords}, expected {expected}"
            )
    logger.debug("validated %s at %d points: %s", s.name, len(points), worst)
    return ResidualReport(manifold=s.name, residuals=worst, signature=expected, points=len(points))


def build_compatible_metric(
    s: PacStructure, big_g: TensorField, points: Sequence[Point] = ()
) -> TensorField:
    """Compatible metric from an arbitrary symmetric G.

    Two steps: ḡ(X,Y) = G(φ²X, φ²Y) + η(X)η(Y), then
    g(X,Y) = ½(ḡ(X,Y) − ḡ(φX,φY) + η(X)η(Y)).

    Raises:
        ConstructionError: the result is degenerate or has the wrong signature
            at one of ``points``
    """
    if big_g.kinds != (LOWER, LOWER):
        raise UsageError(f"{big_g.name} is not a (0,2) tensor")

    def compute(G: Jet, phi: Jet, eta: Jet) -> Jet:
        p2 = jets.einsum("ka,aj->kj", phi, phi)
        eta_eta = jets.einsum("i,j->ij", eta, eta)
        g_bar = jets.einsum("ab,ai,bj->ij", G, p2, p2) + eta_eta
        twisted = jets.einsum("ab,ai,bj->ij", g_bar, phi, phi)
        return (g_bar - twisted + eta_eta).scale(0.5)

    g = TensorField.derived((LOWER, LOWER), compute, big_g, s.phi, s.eta, name=f"g[{big_g.name}]")
    expected = (s.n + 1, s.n)
    for point in points:
        value = g.evaluate(point)
        if abs(np.linalg.det(value)) < settings.det_threshold:
            raise ConstructionError(f"compatible metric from {big_g.name} is degenerate at {point.coords}")
        found = signature(value)
        if found != expected:
            raise ConstructionError(
                f"compatible metric from {big_g.name} has signature {found} at {point.coords}, expected {expected}"
            )
    return g


class FundamentalForm(NamedTuple):
    form: TensorField
    is_paracontact: bool
    residual: float
    min_volume: float


def fundamental_form(s: PacStructure, points: Sequence[Point], tol: Optional[float] = None) -> FundamentalForm:
    """F together with the paracontact test F = dη.

    Raises:
        CompatibilityError: F has a symmetric part above tolerance
        StructureRejectedError: η ∧ Fⁿ vanishes at a sample
    """
    tol = default_tolerance(s.manifold) if tol is None else tol
    residual = 0.0
    min_volume = np.inf
    for point in points:
        f = s.fundamental.evaluate(point)
        symmetric = float(np.max(np.abs(f + f.T)))
        if symmetric >= tol:
            raise CompatibilityError(f"{s.name}: F is not antisymmetric at {point.coords} ({symmetric:.3e})")
        eta = s.eta.evaluate(point)
        # η ∧ Fⁿ ≠ 0 exactly when F + η⊗η is invertible
        volume = abs(float(np.linalg.det(f + np.outer(eta, eta))))
        if volume < settings.det_threshold:
            raise StructureRejectedError(f"{s.name}: η ∧ F^n vanishes at {point.coords}")
        min_volume = min(min_volume, volume)
        residual = max(residual, float(np.max(np.abs(f - s.d_eta.evaluate(point)))))
    return FundamentalForm(s.fundamental, residual < tol, residual, float(min_volume))


class PhiBasis(NamedTuple):
    """Columns ordered (X_1, φX_1, ..., X_n, φX_n, ξ)"""
    vectors: np.ndarray
    signs: np.ndarray

    def gram(self, g: np.ndarray) -> np.ndarray:
        return self.vectors.T @ g @ self.vectors


def build_phi_basis(
    s: PacStructure, point: Point, seed: int = 0, candidates: Sequence[np.ndarray] = ()
) -> PhiBasis:
    """Pseudo-orthonormal basis (X_i, φX_i, ξ) at ``point``.

    Each X_i comes from a candidate vector projected to 𝔻 with φ² and
    orthogonalized against the pairs found so far; a candidate of negative
    square is replaced by its φ-image. ``candidates`` are tried first, then
    seeded random draws.

    Raises:
        NullPivotError: no non-null pivot after the configured number of draws
    """
    v = s.at(point)
    rng = np.random.default_rng(seed)
    queue = [np.asarray(c, dtype=float) for c in candidates]
    columns: List[np.ndarray] = []
    signs: List[float] = []

    def next_pivot() -> np.ndarray:
        raw = queue.pop(0) if queue else rng.standard_normal(s.dim)
        w = v.phi @ (v.phi @ raw)
        for column, sign in zip(columns, signs):
            w = w - sign * (column @ v.g @ w) * column
        norm = w @ v.g @ w
        if abs(norm) < settings.null_pivot_threshold:
            logger.debug("null pivot candidate at %s (g(v,v) = %.3e), resampling", point.coords, norm)
            raise NullPivotError(f"null pivot at {point.coords} (|g(v,v)| = {abs(norm):.3e})")
        if norm < 0:
            w = v.phi @ w
            norm = -norm
        return w / np.sqrt(norm)

    for _ in range(s.n):
        for attempt in Retrying(
            stop=stop_after_attempt(settings.null_pivot_retries),
            retry=retry_if_exception_type(NullPivotError),
            reraise=True,
        ):
            with attempt:
                x = next_pivot()
        columns.extend([x, v.phi @ x])
        signs.extend([1.0, -1.0])
    columns.append(v.xi)
    signs.append(1.0)
    return PhiBasis(np.stack(columns, axis=1), np.asarray(signs))


def _bracket_tensor(a: Jet, da: Jet, b: Jet, db: Jet, c: Jet) -> Jet:
    """B^k_ij = [A e_i, C e_j]^k for (1,1) tensors A and C"""
    return (
        jets.einsum("ai,akj->kij", a, db)
        - jets.einsum("aj,aki->kij", b, da)
        + jets.einsum("kab,ai,bj->kij", c, a, b)
    )


def nijenhuis_suite(s: PacStructure) -> Dict[str, TensorField]:
    """N_φ and the four tensors N¹..N⁴ of the structure"""
    manifold = s.manifold
    c = structure_jet(manifold)
    identity = Jet.constant(np.eye(manifold.dim), manifold.dim)

    zero = identity.grad()

    # products truncate to the lower order, so the parents' extra order drops out
    def n_phi(phi: Jet) -> Jet:
        dphi = phi.grad()
        b_pp = _bracket_tensor(phi, dphi, phi, dphi, c)
        b_pi = _bracket_tensor(phi, dphi, identity, zero, c)
        b_ip = _bracket_tensor(identity, zero, phi, dphi, c)
        p2 = jets.einsum("ka,aj->kj", phi, phi)
        return (
            b_pp
            - jets.einsum("km,mij->kij", phi, b_pi)
            - jets.einsum("km,mij->kij", phi, b_ip)
            + jets.einsum("km,mij->kij", p2, c)
        )

    def second(phi: Jet, eta: Jet) -> Jet:
        b_pi = _bracket_tensor(phi, phi.grad(), identity, zero, c)
        m = jets.einsum("ai,aj->ij", phi, eta.grad()) - jets.einsum("k,kij->ij", eta, b_pi)
        return m - m.transpose(1, 0)

    nphi = TensorField.derived((UPPER, LOWER, LOWER), n_phi, s.phi, extra=1, name="N_φ")
    n1 = TensorField.derived(
        (UPPER, LOWER, LOWER),
        lambda nj, deta, xi: nj - jets.einsum("ij,k->kij", deta, xi).scale(2.0),
        nphi,
        s.d_eta,
        s.xi,
        name="N1",
    )
    n2 = TensorField.derived((LOWER, LOWER), second, s.phi, s.eta, extra=1, name="N2")
    n3 = lie_derivative(s.xi, s.phi)
    n4 = lie_derivative(s.xi, s.eta)
    return {"N_phi": nphi, "N1": n1, "N2": n2, "N3": n3, "N4": n4}


class HTensor(NamedTuple):
    h: TensorField
    h_low: TensorField


def compute_h(s: PacStructure) -> HTensor:
    """h = ½ £_ξ φ and h_ij = g_ia h^a_j"""
    h = TensorField.derived((UPPER, LOWER), lambda n3: n3.scale(0.5), s.nijenhuis["N3"], name="h")
    h_low = TensorField.derived((LOWER, LOWER), lambda g, a: jets.einsum("ia,aj->ij", g, a), s.g, h, name="h_low")
    return HTensor(h, h_low)


def p_tensor(s: PacStructure) -> TensorField:
    """P_rsi = ∇_r φ_si − η_i g_rs + η_s g_ri"""
    return TensorField.derived(
        (LOWER,) * 3,
        lambda nphi, eta, g: nphi - jets.einsum("i,rs->rsi", eta, g) + jets.einsum("s,ri->rsi", eta, g),
        s.nabla_phi_low,
        s.eta,
        s.g,
        name="P",
    )


class PNorms(NamedTuple):
    p_squared: float
    p_xi_squared: float
    grad_phi_squared: float
    h_squared: float


def p_norms(s: PacStructure, point: Point) -> PNorms:
    """|P|², |P(ξ)|², |∇φ|² and |h|² at a point"""
    g_inv = s.g_inv.evaluate(point)
    p = s.p.evaluate(point)
    xi = s.xi.evaluate(point)
    return PNorms(
        p_squared=squared_norm(g_inv, p),
        p_xi_squared=squared_norm(g_inv, p @ xi),
        grad_phi_squared=squared_norm(g_inv, s.nabla_phi_low.evaluate(point)),
        h_squared=squared_norm(g_inv, s.h_low.evaluate(point)),
    )


def _nabla_phi_vector(nphi: np.ndarray, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """(∇_X φ)Y"""
    return np.einsum("r,rki,i->k", x, nphi, y)


def covariant_derivative_phi_checks(
    s: PacStructure, points: Sequence[Point], rng: np.random.Generator, paracontact: bool
) -> Dict[str, float]:
    """Both sides of the ∇φ formulas at random (X, Y, Z) per point.

    The general formula is always evaluated; its paracontact reduction and
    the (∇_{φX}φ)φY relation only when ``paracontact`` is set.
    """
    worst = {"general": 0.0}
    if paracontact:
        worst.update({"paracontact": 0.0, "phi_phi": 0.0})
    n1 = s.nijenhuis["N1"]
    n2 = s.nijenhuis["N2"]
    for point in points:
        v = s.at(point)
        nphi = s.nabla_phi.evaluate(point)
        df = s.d_fundamental.evaluate(point)
        deta = s.d_eta.evaluate(point)
        n1v = np.einsum("kij,kw->ijw", n1.evaluate(point), v.g)
        n2v = n2.evaluate(point)
        h = s.h.evaluate(point)
        x, y, z = rng.standard_normal((3, s.dim))
        px, py, pz = v.phi @ x, v.phi @ y, v.phi @ z
        ex, ey, ez = v.eta @ x, v.eta @ y, v.eta @ z

        lhs = 2.0 * (_nabla_phi_vector(nphi, x, y) @ v.g @ z)
        tail = (
            -np.einsum("ijw,i,j,w->", n1v, y, z, px)
            - 2.0 * np.einsum("ij,i,j->", deta, pz, x) * ey
            + 2.0 * np.einsum("ij,i,j->", deta, py, x) * ez
        )
        general = (
            -np.einsum("ijk,i,j,k->", df, x, y, z)
            - np.einsum("ijk,i,j,k->", df, x, py, pz)
            + tail
            + np.einsum("ij,i,j->", n2v, y, z) * ex
        )
        worst["general"] = max(worst["general"], abs(lhs - general))
        if paracontact:
            worst["paracontact"] = max(worst["paracontact"], abs(lhs - tail))
            left = _nabla_phi_vector(nphi, px, py) - _nabla_phi_vector(nphi, x, y)
            right = 2.0 * (x @ v.g @ y) * v.xi - (x - h @ x + ex * v.xi) * ey
            worst["phi_phi"] = max(worst["phi_phi"], float(np.max(np.abs(left - right))))
    return worst


def star_ricci(s: PacStructure):
    """Ric*_ij = g^{ps} R_pilk φ^l_j φ^k_s and scal* = g^{ij} Ric*_ij"""
    _, r4 = s.curvature
    ric_star = TensorField.derived(
        (LOWER, LOWER),
        lambda gi, r, phi: jets.einsum("ps,pilk,lj,ks->ij", gi, r, phi, phi),
        s.g_inv,
        r4,
        s.phi,
        name="Ric*",
    )
    return ric_star, trace_with(s.g, ric_star, name="scal*")


# ----------------------------------------------------------------------
# classification
# ----------------------------------------------------------------------
def _max_over(field: TensorField, points: Sequence[Point]) -> float:
    return max((field.jet(point).max_abs() for point in points), default=0.0)


def integrability_residual(s: PacStructure, point: Point) -> float:
    """N¹ on 𝔻 together with η([φX,Y] + [X,φY]) on 𝔻.

    With 𝔻 the image of the projector φ², both conditions are tensorial:
    the second equals −2(dη(φX,Y) + dη(X,φY)).
    """
    proj = s.phi_squared.evaluate(point)
    phi = s.phi.evaluate(point)
    n1 = np.einsum("kab,ai,bj->kij", s.nijenhuis["N1"].evaluate(point), proj, proj)
    deta = s.d_eta.evaluate(point)
    mixed = np.einsum("ab,ai,bj->ij", deta, phi @ proj, proj) + np.einsum("ab,ai,bj->ij", deta, proj, phi @ proj)
    return max(float(np.max(np.abs(n1))), float(np.max(np.abs(mixed))))


def fit_eta_einstein(s: PacStructure, points: Sequence[Point]) -> EtaEinsteinFit:
    """Pointwise least-squares fit of Ric ≈ a g + b η⊗η"""
    ric, _ = s.ricci
    coefficients = []
    residual = 0.0
    for point in points:
        g = s.g.evaluate(point)
        eta = s.eta.evaluate(point)
        target = ric.evaluate(point)
        design = np.stack([g.ravel(), np.outer(eta, eta).ravel()], axis=1)
        solution, *_ = np.linalg.lstsq(design, target.ravel(), rcond=None)
        coefficients.append(solution)
        residual = max(residual, float(np.max(np.abs(design @ solution - target.ravel()))))
    values = np.asarray(coefficients)
    a, b = values.mean(axis=0)
    spread = values.std(axis=0) if len(values) > 1 else np.zeros(2)
    return EtaEinsteinFit(a=float(a), b=float(b), residual=residual, a_spread=float(spread[0]), b_spread=float(spread[1]))


def structure_norms(s: PacStructure, points: Sequence[Point]) -> StructureNorms:
    """Sample means of |h|², |P|², |∇φ|², scal and scal*"""
    _, scal = s.ricci
    _, scal_star = s.star_ricci
    rows = []
    for point in points:
        norms = p_norms(s, point)
        rows.append(
            (norms.h_squared, norms.p_squared, norms.grad_phi_squared, scal.value(point), scal_star.value(point))
        )
    mean = np.mean(np.asarray(rows), axis=0)
    return StructureNorms(
        h_squared=float(mean[0]),
        p_squared=float(mean[1]),
        grad_phi_squared=float(mean[2]),
        scal=float(mean[3]),
        scal_star=float(mean[4]),
    )


def classify(s: PacStructure, points: Sequence[Point], tol: Optional[float] = None) -> ClassificationReport:
    """Run the predicate ladder on ``s``.

    Flags are decided from max residuals against ``tol``; the η-Einstein fit
    is attempted only on K-paracontact structures.
    """
    tol = default_tolerance(s.manifold) if tol is None else tol
    flags: Dict[StructureFlag, FlagResult] = {}

    # 1. axioms
    try:
        axioms = validate_structure(s, points).max_residual
        flags[StructureFlag.ALMOST_PAC_METRIC] = FlagResult(value=axioms < tol, residual=axioms)
    except (StructureRejectedError, DegeneracyError) as exc:
        logger.info("%s rejected as almost paracontact metric: %s", s.name, exc)
        flags[StructureFlag.ALMOST_PAC_METRIC] = FlagResult(value=False, residual=float("inf"))

    # 2. F = dη
    paracontact = max(
        (float(np.max(np.abs(s.fundamental.evaluate(p) - s.d_eta.evaluate(p)))) for p in points), default=0.0
    )
    flags[StructureFlag.PARACONTACT] = FlagResult(value=paracontact < tol, residual=paracontact)

    # 3. ξ Killing
    killing = max(paracontact, _max_over(s.killing, points))
    flags[StructureFlag.K_PARACONTACT] = FlagResult(value=killing < tol, residual=killing)

    # 4. integrability on 𝔻
    integrable = max((integrability_residual(s, p) for p in points), default=0.0)
    flags[StructureFlag.INTEGRABLE] = FlagResult(value=integrable < tol, residual=integrable)

    # 5. normality
    normal = max(_max_over(s.nijenhuis[key], points) for key in ("N1", "N2", "N3", "N4"))
    flags[StructureFlag.NORMAL] = FlagResult(value=normal < tol, residual=normal)

    # 6. paraSasakian
    para_sasakian = max(paracontact, _max_over(s.p, points))
    flags[StructureFlag.PARA_SASAKIAN] = FlagResult(value=para_sasakian < tol, residual=para_sasakian)

    eta_einstein = None
    if flags[StructureFlag.K_PARACONTACT].value:
        fit = fit_eta_einstein(s, points)
        if max(fit.residual, fit.a_spread, fit.b_spread) < tol:
            eta_einstein = fit
        else:
            logger.debug("%s: η-Einstein fit rejected (residual %.3e)", s.name, fit.residual)

    report = ClassificationReport(
        manifold=s.name, flags=flags, eta_einstein=eta_einstein, norms=structure_norms(s, points)
    )
    logger.debug("classified %s: %s", s.name, report.flag_values())
    return report
