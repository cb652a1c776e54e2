from enum import Enum
from typing import Dict, Optional

from pydantic import BaseModel


class SigmaPreset(str, Enum):
    CONSTANT = "constant"
    EXP_BUMP = "exp-bump"
    EXP_LINEAR = "exp-linear"
    RADIAL_BUMP = "radial-bump"


class TransformKind(str, Enum):
    D_HOMOTHETIC = "d_homothetic"
    GAUGE = "gauge"


class TransformReport(BaseModel):
    manifold: str
    kind: TransformKind
    alpha: Optional[float] = None
    sigma: Optional[SigmaPreset] = None
    epsilon: Optional[float] = None
    points: int
    seed: int
    validate_residual: float
    flags_before: Dict[str, bool]
    flags_after: Dict[str, bool]
    scal_before: float
    scal_after: float
    w1_before: Optional[float] = None
    w1_after: Optional[float] = None
