from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """
    Manage toolkit settings using Pydantic
    Reads from MODLIM_* environment variables or a .env file
    """

    model_config = SettingsConfigDict(
        env_prefix="MODLIM_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # Logging
    log_level: str = "INFO"

    # Discrete solver
    tol: float = 1e-3  # relative duality-gap target
    max_iter: int = 400
    seed: int = 0
    paths_per_iter: int = 32
    inner_sweeps: int = 200
    inner_tol: float = 1e-7

    # Quadrature
    quad_tol: float = 1e-10
    quad_max_evals: int = 200_000

    # Special functions
    mu_asymptotic_threshold: float = 1e-8

    # Experiments
    h_factor: float = 8.0  # h <= eps * min f / h_factor
    discretization_allowance: float = 0.03
    sweep_workers: int = 4
    beurling_probes: int = 100
    output_dir: str = "runs"


settings = Settings()  # singleton, import this rather than instantiating
