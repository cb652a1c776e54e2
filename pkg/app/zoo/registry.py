from functools import lru_cache
from typing import Callable, Dict, List, Optional

import numpy as np
from pydantic import BaseModel

from app.errors import UnknownEntryError
from app.geometry.paracontact import PacStructure
from app.geometry.tensors import LOWER
from app.logger import get_logger
from app.models.manifold import Manifold, Point
from app.models.report import StructureFlag
from app.utils.jet import Jet
from app.zoo import entries
from app.zoo.entries import heisenberg_frame

logger = get_logger("zoo")


def _flags(**values: bool) -> Dict[StructureFlag, bool]:
    return {StructureFlag(key): value for key, value in values.items()}


ALL_TRUE = _flags(
    almost_pac_metric=True, paracontact=True, k_paracontact=True, integrable=True, normal=True, para_sasakian=True
)


class ZooEntry(BaseModel):
    id: str
    manifold: Manifold
    structure: PacStructure
    expected: Dict[StructureFlag, bool]
    notes: str
    frame_twin: Optional[str] = None

    class Config:
        arbitrary_types_allowed = True
        frozen = True


class _Recipe(BaseModel):
    builder: Callable[[], PacStructure]
    expected: Dict[StructureFlag, bool]
    notes: str
    frame_twin: Optional[str] = None

    class Config:
        arbitrary_types_allowed = True


_REGISTRY: Dict[str, _Recipe] = {
    "flat-pac": _Recipe(
        builder=entries.build_flat_pac,
        expected=_flags(
            almost_pac_metric=True,
            paracontact=False,
            k_paracontact=False,
            integrable=True,
            normal=True,
            para_sasakian=False,
        ),
        notes="Constant structure on [-1,1]^3: η = dz, φ swaps ∂x and ∂y, g = diag(1,-1,1). "
        "dη = 0 while F ≠ 0, so it is normal but not paracontact.",
    ),
    "heis-para": _Recipe(
        builder=entries.build_heis_para,
        expected=ALL_TRUE,
        notes="Heisenberg group chart on [-1,1]^3 with η = dz - y dx and φ swapping ∂x + y∂z with ∂y; "
        "g solves F = dη. ParaSasakian with scal = 2.",
        frame_twin="heis-para-frame",
    ),
    "heis-para-frame": _Recipe(
        builder=entries.build_heis_para_frame,
        expected=ALL_TRUE,
        notes="heis-para as a left-invariant frame (e1, e2, ξ) with [e1, e2] = -ξ and g = diag(1/2, -1/2, 1).",
    ),
    "solv-para": _Recipe(
        builder=entries.build_solv_para,
        expected=_flags(
            almost_pac_metric=True,
            paracontact=True,
            k_paracontact=False,
            integrable=True,
            normal=False,
            para_sasakian=False,
        ),
        notes="Solvable group frame (ξ, e1, e2) with [ξ,e1] = e1, [ξ,e2] = -e2, [e1,e2] = -2ξ. "
        "Paracontact with h ≠ 0 (|h|² = -2).",
    ),
    "heis-para-5": _Recipe(
        builder=entries.build_heis_para_5,
        expected=ALL_TRUE,
        notes="Five-dimensional Heisenberg chart on [-1,1]^5, η = dz - y1 dx1 - y2 dx2. ParaSasakian with n = 2.",
    ),
    "twisted-pac": _Recipe(
        builder=entries.build_twisted_pac,
        expected=_flags(
            almost_pac_metric=True,
            paracontact=True,
            k_paracontact=True,
            integrable=False,
            normal=False,
            para_sasakian=False,
        ),
        notes="heis-para-5 with φ conjugated on 𝔻 by the shear e2 ↦ e2 + t e3, e4 ↦ e4 + t e1, t = sinh y1, "
        "and g rebuilt from F = dη. K-paracontact but the induced paracomplex structure is not integrable.",
    ),
    "sl2-para": _Recipe(
        builder=entries.build_sl2_para,
        expected=ALL_TRUE,
        notes="Frame (ξ, E1, E2) with [ξ,E1] = E2, [ξ,E2] = E1, [E1,E2] = -2ξ and g = diag(1, 1, -1). "
        "ParaSasakian and η-Einstein with scal = -2.",
    ),
}


def list_entries() -> List[str]:
    return sorted(_REGISTRY)


@lru_cache(maxsize=None)
def get_entry(entry_id: str) -> ZooEntry:
    """Build (once) and return a zoo entry

    Raises:
        UnknownEntryError: no entry with this id
    """
    recipe = _REGISTRY.get(entry_id)
    if recipe is None:
        raise UnknownEntryError(f"unknown manifold {entry_id!r}; known: {', '.join(list_entries())}")
    structure = recipe.builder()
    logger.info("built zoo entry %s (dim %d, %s)", entry_id, structure.dim, structure.manifold.backend.value)
    return ZooEntry(
        id=entry_id,
        manifold=structure.manifold,
        structure=structure,
        expected=dict(recipe.expected),
        notes=recipe.notes,
        frame_twin=recipe.frame_twin,
    )


def frame_at(entry: ZooEntry, point: Point) -> np.ndarray:
    """Columns of the left-invariant frame of a Heisenberg chart at ``point``"""
    x = Jet.variable(point.coords, 0)
    return heisenberg_frame(x, entry.manifold.n).value


def to_frame(value: np.ndarray, kinds, frame: np.ndarray) -> np.ndarray:
    """Coordinate components to frame components: covariant slots by E, contravariant by E⁻¹"""
    coframe = np.linalg.inv(frame)
    out = value
    for slot, kind in enumerate(kinds):
        matrix = frame if kind == LOWER else coframe.T
        out = np.moveaxis(np.tensordot(out, matrix, axes=(slot, 0)), -1, slot)
    return out
