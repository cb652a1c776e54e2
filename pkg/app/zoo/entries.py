"""Builders for the concrete structures in the zoo.

Heisenberg-type charts use coordinates (x1, y1, ..., xn, yn, z) with the
frame e_{2a-1} = ∂x_a + y_a ∂z, e_{2a} = ∂y_a, ξ = ∂z and coframe
dx_a, dy_a, η = dz − Σ y_a dx_a. Structures are written in that frame and
pushed to coordinates: g = Θᵀ G Θ and φ = E Φ Θ with Θ = E⁻¹.
"""

from typing import Callable, Optional

import numpy as np

from app.geometry.paracontact import PacStructure
from app.geometry.tensors import LOWER, UPPER, TensorField
from app.models.manifold import Manifold
from app.utils import jet as jets
from app.utils.jet import Jet

PhiBlock = Callable[[Jet], Jet]


def _unit(dim: int, row: int, col: int) -> np.ndarray:
    m = np.zeros((dim, dim))
    m[row, col] = 1.0
    return m


def swap_block(n: int) -> np.ndarray:
    """φ on 𝔻 in the frame: e_{2a-1} ↔ e_{2a}"""
    block = np.zeros((2 * n, 2 * n))
    for a in range(n):
        block[2 * a + 1, 2 * a] = 1.0
        block[2 * a, 2 * a + 1] = 1.0
    return block


def symplectic_block(n: int) -> np.ndarray:
    """dη on 𝔻 in the frame: dη(e_{2a-1}, e_{2a}) = ½"""
    block = np.zeros((2 * n, 2 * n))
    for a in range(n):
        block[2 * a, 2 * a + 1] = 0.5
        block[2 * a + 1, 2 * a] = -0.5
    return block


def heisenberg_manifold(name: str, n: int) -> Manifold:
    return Manifold.chart(name, [(-1.0, 1.0)] * (2 * n + 1))


def heisenberg_frame(x: Jet, n: int) -> Jet:
    """E with columns e_1 .. e_2n, ξ in coordinates"""
    dim = 2 * n + 1
    frame = Jet.constant(np.eye(dim), dim)
    for a in range(n):
        frame = frame + x[2 * a + 1] * Jet.constant(_unit(dim, dim - 1, 2 * a), dim)
    return frame


def heisenberg_structure(manifold: Manifold, phi_block: Optional[PhiBlock] = None, name: str = "") -> PacStructure:
    """Paracontact structure on a Heisenberg chart with F = dη.

    ``phi_block`` returns φ on 𝔻 in the frame as a function of the coordinate
    jet; it must anti-preserve dη so that G = dη·φ is symmetric.
    """
    n = manifold.n
    dim = manifold.dim
    omega = symplectic_block(n)
    embed = np.eye(dim)[:, : 2 * n]
    xi_xi = _unit(dim, dim - 1, dim - 1)
    phi_block = phi_block or (lambda x: Jet.constant(swap_block(n), dim))

    def frame_data(x: Jet):
        frame = heisenberg_frame(x, n)
        coframe = frame.inv()
        block = phi_block(x)
        phi_frame = jets.einsum("ia,ab,jb->ij", embed, block, embed)
        g_frame = jets.einsum("ia,ab,bc,jc->ij", embed, omega, block, embed) + xi_xi
        return frame, coframe, phi_frame, g_frame

    def metric(x: Jet) -> Jet:
        _, coframe, _, g_frame = frame_data(x)
        return jets.einsum("ai,ab,bj->ij", coframe, g_frame, coframe)

    def phi(x: Jet) -> Jet:
        frame, coframe, phi_frame, _ = frame_data(x)
        return jets.einsum("ka,ab,bj->kj", frame, phi_frame, coframe)

    def eta(x: Jet) -> Jet:
        one_form = [0.0] * dim
        one_form[dim - 1] = 1.0
        for a in range(n):
            one_form[2 * a] = -x[2 * a + 1]
        return jets.array(one_form, dim)

    xi = np.zeros(dim)
    xi[-1] = 1.0
    return PacStructure(
        phi=TensorField.from_formula(manifold, (UPPER, LOWER), phi, name="φ"),
        xi=TensorField.constant(manifold, (UPPER,), xi, name="ξ"),
        eta=TensorField.from_formula(manifold, (LOWER,), eta, name="η"),
        g=TensorField.from_formula(manifold, (LOWER, LOWER), metric, name="g"),
        name=name or manifold.name,
    )


def twisted_block(x: Jet) -> Jet:
    """S φ₀ S⁻¹ for the symplectic shear S: e2 ↦ e2 + t e3, e4 ↦ e4 + t e1, t = sinh y1"""
    dim = x.shape[0]
    t = jets.sinh(x[1])
    nilpotent = Jet.constant(_unit(4, 2, 1) + _unit(4, 0, 3), dim)
    identity = Jet.constant(np.eye(4), dim)
    shear = identity + t * nilpotent
    inverse = identity - t * nilpotent
    return jets.einsum("ab,bc,cd->ad", shear, Jet.constant(swap_block(2), dim), inverse)


def frame_structure(manifold: Manifold, phi, xi, eta, g, name: str = "") -> PacStructure:
    """Left-invariant structure from constant frame components"""
    return PacStructure(
        phi=TensorField.constant(manifold, (UPPER, LOWER), phi, name="φ"),
        xi=TensorField.constant(manifold, (UPPER,), xi, name="ξ"),
        eta=TensorField.constant(manifold, (LOWER,), eta, name="η"),
        g=TensorField.constant(manifold, (LOWER, LOWER), g, name="g"),
        name=name or manifold.name,
    )


# ----------------------------------------------------------------------
# entries
# ----------------------------------------------------------------------
def build_flat_pac() -> PacStructure:
    manifold = Manifold.chart("flat-pac", [(-1.0, 1.0)] * 3)
    phi = [[0.0, 1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 0.0]]
    return PacStructure(
        phi=TensorField.constant(manifold, (UPPER, LOWER), phi, name="φ"),
        xi=TensorField.constant(manifold, (UPPER,), [0.0, 0.0, 1.0], name="ξ"),
        eta=TensorField.constant(manifold, (LOWER,), [0.0, 0.0, 1.0], name="η"),
        g=TensorField.constant(manifold, (LOWER, LOWER), np.diag([1.0, -1.0, 1.0]), name="g"),
    )


def build_heis_para() -> PacStructure:
    return heisenberg_structure(heisenberg_manifold("heis-para", 1))


def build_heis_para_5() -> PacStructure:
    return heisenberg_structure(heisenberg_manifold("heis-para-5", 2))


def build_twisted_pac() -> PacStructure:
    return heisenberg_structure(heisenberg_manifold("twisted-pac", 2), phi_block=twisted_block)


def build_heis_para_frame() -> PacStructure:
    # frame (e1, e2, ξ) with [e1, e2] = −ξ
    c = np.zeros((3, 3, 3))
    c[2, 0, 1], c[2, 1, 0] = -1.0, 1.0
    manifold = Manifold.frame("heis-para-frame", c)
    return frame_structure(
        manifold,
        phi=[[0.0, 1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 0.0]],
        xi=[0.0, 0.0, 1.0],
        eta=[0.0, 0.0, 1.0],
        g=np.diag([0.5, -0.5, 1.0]),
    )


def build_solv_para() -> PacStructure:
    # frame (ξ, e1, e2): [ξ, e1] = e1, [ξ, e2] = −e2, [e1, e2] = −2ξ
    c = np.zeros((3, 3, 3))
    c[1, 0, 1], c[1, 1, 0] = 1.0, -1.0
    c[2, 0, 2], c[2, 2, 0] = -1.0, 1.0
    c[0, 1, 2], c[0, 2, 1] = -2.0, 2.0
    manifold = Manifold.frame("solv-para", c)
    return frame_structure(
        manifold,
        phi=[[0.0, 0.0, 0.0], [0.0, 0.0, 1.0], [0.0, 1.0, 0.0]],
        xi=[1.0, 0.0, 0.0],
        eta=[1.0, 0.0, 0.0],
        g=np.diag([1.0, 1.0, -1.0]),
    )


def build_sl2_para() -> PacStructure:
    # frame (ξ, E1, E2): [ξ, E1] = E2, [ξ, E2] = E1, [E1, E2] = −2ξ
    c = np.zeros((3, 3, 3))
    c[2, 0, 1], c[2, 1, 0] = 1.0, -1.0
    c[1, 0, 2], c[1, 2, 0] = 1.0, -1.0
    c[0, 1, 2], c[0, 2, 1] = -2.0, 2.0
    manifold = Manifold.frame("sl2-para", c)
    return frame_structure(
        manifold,
        phi=[[0.0, 0.0, 0.0], [0.0, 0.0, 1.0], [0.0, 1.0, 0.0]],
        xi=[1.0, 0.0, 0.0],
        eta=[1.0, 0.0, 0.0],
        g=np.diag([1.0, 1.0, -1.0]),
    )
