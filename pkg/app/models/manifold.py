from enum import Enum
from typing import Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, Field, field_validator, model_validator

Interval = Tuple[float, float]
Constants = Tuple[Tuple[Tuple[float, ...], ...], ...]


class Backend(str, Enum):
    COORDINATE_CHART = "coordinate_chart"
    HOMOGENEOUS_FRAME = "homogeneous_frame"


class Point(BaseModel):
    """A sample point; frame manifolds use the empty basepoint"""
    coords: Tuple[float, ...] = ()

    class Config:
        frozen = True

    def array(self) -> np.ndarray:
        return np.asarray(self.coords, dtype=float)


BASEPOINT = Point()


class Manifold(BaseModel):
    name: str = Field(..., min_length=1)
    dim: int = Field(..., ge=3)
    backend: Backend
    chart_box: Optional[Tuple[Interval, ...]] = None
    structure_constants: Optional[Constants] = None

    class Config:
        frozen = True

    @field_validator("dim")
    @classmethod
    def dim_is_odd(cls, value: int) -> int:
        if value % 2 == 0:
            raise ValueError(f"dim must be odd, got {value}")
        return value

    @model_validator(mode="after")
    def check_backend_data(self) -> "Manifold":
        if self.backend == Backend.COORDINATE_CHART:
            if self.chart_box is None or len(self.chart_box) != self.dim:
                raise ValueError("coordinate charts need one interval per coordinate")
            for lo, hi in self.chart_box:
                if not lo < hi:
                    raise ValueError(f"chart interval [{lo}, {hi}] has empty interior")
        else:
            if self.structure_constants is None:
                raise ValueError("homogeneous frames need structure constants")
            c = np.asarray(self.structure_constants, dtype=float)
            if c.shape != (self.dim,) * 3:
                raise ValueError(f"structure constants must have shape {(self.dim,) * 3}")
            if np.max(np.abs(c + c.transpose(0, 2, 1))) > 1e-12:
                raise ValueError("structure constants must be antisymmetric in the lower indices")
            if jacobi_defect(c) > 1e-12 * max(1.0, float(np.max(np.abs(c))) ** 2):
                raise ValueError("structure constants violate the Jacobi identity")
        return self

    @classmethod
    def chart(cls, name: str, box: Sequence[Interval]) -> "Manifold":
        box = tuple((float(lo), float(hi)) for lo, hi in box)
        return cls(name=name, dim=len(box), backend=Backend.COORDINATE_CHART, chart_box=box)

    @classmethod
    def frame(cls, name: str, constants: np.ndarray) -> "Manifold":
        c = np.asarray(constants, dtype=float)
        return cls(
            name=name,
            dim=c.shape[0],
            backend=Backend.HOMOGENEOUS_FRAME,
            structure_constants=tuple(tuple(tuple(row) for row in plane) for plane in c.tolist()),
        )

    @property
    def n(self) -> int:
        return (self.dim - 1) // 2

    @property
    def is_frame(self) -> bool:
        return self.backend == Backend.HOMOGENEOUS_FRAME

    def constants(self) -> np.ndarray:
        """c^k_ij indexed [k, i, j]; identically zero on coordinate charts"""
        if self.structure_constants is None:
            return np.zeros((self.dim,) * 3)
        return np.asarray(self.structure_constants, dtype=float)

    def contains(self, point: Point) -> bool:
        if self.is_frame:
            return point.coords == ()
        if len(point.coords) != self.dim:
            return False
        return all(lo <= x <= hi for x, (lo, hi) in zip(point.coords, self.chart_box))

    def point(self, *coords: float) -> Point:
        return Point(coords=tuple(float(x) for x in coords))


def jacobi_defect(c: np.ndarray) -> float:
    """max |sum_cyc c^m_ij c^l_mk| over all index choices"""
    cyc = np.einsum("mij,lmk->lijk", c, c)
    total = cyc + cyc.transpose(0, 2, 3, 1) + cyc.transpose(0, 3, 1, 2)
    return float(np.max(np.abs(total)))
