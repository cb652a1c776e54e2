"""Registry of identity checks and the per-run context they evaluate against."""

import zlib
from enum import Enum
from functools import cached_property
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Type

import numpy as np
from pydantic import BaseModel

from app.config import settings
from app.errors import UsageError
from app.geometry.connections import TorsionConnection, canonical_connection, skew_torsion_connection
from app.geometry.paracontact import PacStructure, classify
from app.logger import get_logger
from app.models.manifold import Backend, Point
from app.models.report import ClassificationReport, StructureFlag
from app.utils.sampling import sample_points
from app.zoo.registry import ZooEntry

logger = get_logger("checks")


class CheckSkipped(Exception):
    """Raised by a check whose precondition can only be decided while running"""


class Suite(str, Enum):
    AXIOMS = "axioms"
    CURVATURE = "curvature"
    CONNECTIONS = "connections"
    TRANSFORMS = "transforms"
    ALL = "all"


class CheckContext:
    """Everything a check needs for one (entry, points, seed, tol) run.

    Heavy objects (connections, the classification) are built once per run and
    shared by every check that asks for them.
    """

    def __init__(self, entry: ZooEntry, count: int, seed: int, tol: float):
        self.entry = entry
        self.structure: PacStructure = entry.structure
        self.count = count
        self.seed = seed
        self.tol = tol

    @property
    def manifold(self):
        return self.entry.manifold

    @property
    def n(self) -> int:
        return self.structure.n

    @cached_property
    def points(self) -> List[Point]:
        return sample_points(self.manifold, self.count, np.random.default_rng(self.seed))

    def interior_points(self, limit: int) -> List[Point]:
        """At most ``limit`` points from the chart box shrunk to its interior"""
        rng = np.random.default_rng([self.seed, 1])
        return sample_points(self.manifold, min(self.count, limit), rng, shrink=settings.interior_shrink)

    def subset(self, limit: int) -> List[Point]:
        return self.points[: min(self.count, limit)]

    def rng(self, check_id: str) -> np.random.Generator:
        """Generator seeded by the run seed and the check id, so checks do not share draws"""
        return np.random.default_rng([self.seed, zlib.crc32(check_id.encode())])

    @cached_property
    def classification(self) -> ClassificationReport:
        return classify(self.structure, self.points, self.tol)

    @cached_property
    def canonical(self) -> TorsionConnection:
        return canonical_connection(self.structure, self.points, self.tol)

    @cached_property
    def skew(self) -> TorsionConnection:
        return skew_torsion_connection(self.structure, self.points, self.tol)


CheckFn = Callable[[CheckContext, np.random.Generator], float]
Applies = Callable[[ZooEntry], Optional[str]]


def always(entry: ZooEntry) -> Optional[str]:
    return None


def requires(*flags: StructureFlag) -> Applies:
    """Applicable only to entries declared with every flag in ``flags``"""

    def check(entry: ZooEntry) -> Optional[str]:
        missing = [flag.value for flag in flags if not entry.expected.get(flag, False)]
        return f"requires {', '.join(missing)}" if missing else None

    return check


def lacks(flag: StructureFlag) -> Applies:
    def check(entry: ZooEntry) -> Optional[str]:
        return f"requires not {flag.value}" if entry.expected.get(flag, False) else None

    return check


def on_backend(backend: Backend) -> Applies:
    def check(entry: ZooEntry) -> Optional[str]:
        return None if entry.manifold.backend == backend else f"requires a {backend.value} backend"

    return check


def only(*entry_ids: str) -> Applies:
    def check(entry: ZooEntry) -> Optional[str]:
        return None if entry.id in entry_ids else f"runs on {', '.join(entry_ids)} only"

    return check


def with_twin(entry: ZooEntry) -> Optional[str]:
    return None if entry.frame_twin else "no frame twin registered"


def all_of(*conditions: Applies) -> Applies:
    def check(entry: ZooEntry) -> Optional[str]:
        for condition in conditions:
            reason = condition(entry)
            if reason is not None:
                return reason
        return None

    return check


class Check(BaseModel):
    """A named identity with its evaluation function.

    ``run`` returns the max-abs residual over the context's samples. Witness
    checks pass when the residual reaches their threshold; ``expect`` marks a
    check whose passing outcome is that ``run`` raises the given error.
    """
    id: str
    paper_ref: str
    suite: Suite
    statement: str
    run: CheckFn
    applies: Applies = always
    witness: bool = False
    expect: Optional[Type[Exception]] = None
    threshold: Optional[Callable[[float], float]] = None

    class Config:
        arbitrary_types_allowed = True
        frozen = True

    def tolerance(self, tol: float) -> float:
        return self.threshold(tol) if self.threshold is not None else tol


_CHECKS: Dict[str, Check] = {}


def register(
    check_id: str,
    paper_ref: str,
    suite: Suite,
    statement: str,
    applies: Applies = always,
    witness: bool = False,
    expect: Optional[Type[Exception]] = None,
    threshold: Optional[Callable[[float], float]] = None,
):
    """Decorator adding a check function to the registry"""

    def decorator(fn: CheckFn) -> CheckFn:
        if check_id in _CHECKS:
            raise UsageError(f"duplicate check id {check_id!r}")
        _CHECKS[check_id] = Check(
            id=check_id,
            paper_ref=paper_ref,
            suite=suite,
            statement=statement,
            run=fn,
            applies=applies,
            witness=witness,
            expect=expect,
            threshold=threshold,
        )
        return fn

    return decorator


def checks_for(suite: Suite) -> List[Check]:
    """Checks of one suite (or all of them), ordered by id"""
    _load()
    selected = _CHECKS.values() if suite == Suite.ALL else (c for c in _CHECKS.values() if c.suite == suite)
    return sorted(selected, key=lambda c: c.id)


def get_check(check_id: str) -> Check:
    _load()
    try:
        return _CHECKS[check_id]
    except KeyError:
        raise UsageError(f"unknown check {check_id!r}") from None


def _load() -> None:
    # suite modules register themselves on import
    from app.services import axiom_checks, connection_checks, curvature_checks, transform_checks  # noqa: F401


# ----------------------------------------------------------------------
# residual helpers shared by the suite modules
# ----------------------------------------------------------------------
def max_abs(value) -> float:
    return float(np.max(np.abs(np.asarray(value, dtype=float)))) if np.size(value) else 0.0


def worst(values: Iterable) -> float:
    """Max-abs over an iterable of arrays or scalars"""
    result = 0.0
    for value in values:
        result = max(result, max_abs(value))
    return result


def field_residual(field, points: Sequence[Point]) -> float:
    return worst(field.evaluate(p) for p in points)


def difference_residual(left, right, points: Sequence[Point]) -> float:
    return worst(left.evaluate(p) - right.evaluate(p) for p in points)
