from enum import Enum
from typing import Dict, Optional, Tuple

from pydantic import BaseModel, Field


class CheckStatus(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    SKIPPED = "skipped"


class StructureFlag(str, Enum):
    ALMOST_PAC_METRIC = "almost_pac_metric"
    PARACONTACT = "paracontact"
    K_PARACONTACT = "k_paracontact"
    INTEGRABLE = "integrable"
    NORMAL = "normal"
    PARA_SASAKIAN = "para_sasakian"


class CheckReport(BaseModel):
    check_id: str
    paper_ref: str
    statement: str
    manifold: str
    max_abs_residual: Optional[float] = None
    tolerance: float
    points: int = Field(..., ge=0)
    seed: int
    passed: bool = Field(False, alias="pass")
    status: CheckStatus
    witness: bool = False

    class Config:
        populate_by_name = True
        frozen = True


class ResidualReport(BaseModel):
    manifold: str
    residuals: Dict[str, float]
    signature: Tuple[int, int]
    points: int

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values(), default=0.0)


class FlagResult(BaseModel):
    value: bool
    residual: float


class EtaEinsteinFit(BaseModel):
    a: float
    b: float
    residual: float
    a_spread: float
    b_spread: float


class StructureNorms(BaseModel):
    h_squared: float
    p_squared: float
    grad_phi_squared: float
    scal: float
    scal_star: float


class ClassificationReport(BaseModel):
    manifold: str
    flags: Dict[StructureFlag, FlagResult]
    eta_einstein: Optional[EtaEinsteinFit] = None
    norms: StructureNorms

    def flag(self, name: StructureFlag) -> bool:
        return self.flags[name].value

    def flag_values(self) -> Dict[str, bool]:
        return {flag.value: result.value for flag, result in self.flags.items()}
