from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    # Tolerances
    frame_tolerance: float = 1e-10
    coordinate_tolerance: float = 1e-7
    witness_factor: float = 10.0

    # Sampling
    default_points: int = 64
    default_seed: int = 42
    box_shrink: float = 0.05
    interior_shrink: float = 0.25
    gauge_points: int = 32
    equivalence_points: int = 16

    # Numerical thresholds
    det_threshold: float = 1e-12
    plane_threshold: float = 1e-12
    null_pivot_threshold: float = 1e-6
    null_pivot_retries: int = 32
    scale_margin: float = 1e-6
    field_cache_size: int = 256

    # Transforms
    sigma_epsilon: float = 0.05
    perturbation_norm: float = 1e-3
    perturbation_floor: float = 1e-4

    # App
    app_name: str = "paracontact"
    log_level: str = "WARNING"

    class Config:
        env_file = ".env"
        env_prefix = "PARACONTACT_"
        case_sensitive = False


settings = Settings()
