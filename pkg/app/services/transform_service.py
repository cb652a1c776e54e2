from typing import List, Optional

import numpy as np

from app.config import settings
from app.errors import UsageError
from app.geometry.paracontact import PacStructure, classify, validate_structure
from app.geometry.transforms import d_homothetic, gauge_transform, sigma_preset, w1_field
from app.logger import get_logger
from app.models.manifold import Point
from app.models.report import StructureFlag
from app.models.transform import SigmaPreset, TransformKind, TransformReport
from app.utils.sampling import default_tolerance, sample_points
from app.zoo.registry import get_entry

logger = get_logger("transform")


def _mean(field, points: List[Point]) -> float:
    return float(np.mean([field.value(p) for p in points]))


class TransformService:
    def __init__(self, points: Optional[int] = None, seed: Optional[int] = None):
        self.points = settings.default_points if points is None else points
        self.seed = settings.default_seed if seed is None else seed

    def transform(
        self,
        manifold: str,
        alpha: Optional[float] = None,
        sigma: Optional[str] = None,
        epsilon: Optional[float] = None,
    ) -> TransformReport:
        """
        Apply a D-homothety (``alpha``) or a gauge preset (``sigma``) to a zoo entry

        Returns:
            TransformReport with flags, scal and W₁ before and after

        Raises:
            UsageError: neither or both of ``alpha`` and ``sigma`` given, or an unknown preset
            ParameterError: α is zero or not finite
            PositivityError: σ is not positive at a sample point
        """

        # 1. Resolve inputs
        if (alpha is None) == (sigma is None):
            raise UsageError("give exactly one of alpha or sigma")
        if self.points <= 0:
            raise UsageError(f"points must be positive, got {self.points}")
        entry = get_entry(manifold)
        s = entry.structure
        tol = default_tolerance(entry.manifold)
        rng = np.random.default_rng(self.seed)

        # 2. Transform
        if alpha is not None:
            kind = TransformKind.D_HOMOTHETIC
            points = sample_points(entry.manifold, self.points, rng)
            transformed = d_homothetic(s, alpha)
            preset = None
        else:
            kind = TransformKind.GAUGE
            try:
                preset = SigmaPreset(sigma)
            except ValueError:
                raise UsageError(
                    f"unknown σ preset {sigma!r}; known: {', '.join(p.value for p in SigmaPreset)}"
                ) from None
            points = sample_points(entry.manifold, self.points, rng, shrink=settings.interior_shrink)
            transformed = gauge_transform(s, sigma_preset(entry.manifold, preset, epsilon), points)

        # 3. Compare before and after
        before = classify(s, points, tol)
        after = classify(transformed, points, tol)
        report = TransformReport(
            manifold=entry.id,
            kind=kind,
            alpha=alpha,
            sigma=preset,
            epsilon=None if preset is None else (settings.sigma_epsilon if epsilon is None else epsilon),
            points=self.points,
            seed=self.seed,
            validate_residual=validate_structure(transformed, points).max_residual,
            flags_before=before.flag_values(),
            flags_after=after.flag_values(),
            scal_before=before.norms.scal,
            scal_after=after.norms.scal,
            w1_before=self._w1(s, before.flag(StructureFlag.PARACONTACT), points),
            w1_after=self._w1(transformed, after.flag(StructureFlag.PARACONTACT), points),
        )
        logger.info("%s of %s: validate residual %.3e", kind.value, entry.id, report.validate_residual)
        return report

    @staticmethod
    def _w1(s: PacStructure, paracontact: bool, points: List[Point]) -> Optional[float]:
        # the canonical connection only exists on paracontact structures
        return _mean(w1_field(s), points) if paracontact else None
