"""
Hyperbolic Sobolev Lab - Configuration Management
Centralized configuration using pydantic-settings
"""

import logging
import sys
from pathlib import Path

from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """Application settings with environment variable support"""

    # Environment
    env: str = "development"
    debug: bool = False

    # Application
    app_title: str = "Hyperbolic Sobolev Lab"
    app_version: str = "1.0.0"
    app_description: str = "Sharp k-order Sobolev inequalities on hyperbolic space"

    # Quadrature
    rel_tol: float = 1e-10
    quad_max_subdivisions: int = 2000
    endpoint_fit_windows: int = 8
    endpoint_fit_start: float = 1e-2
    divergence_exponent: float = -1.0

    # Extremal family
    beta_margin: float = 1e-10
    cutoff_radius: float = 40.0

    # Taylor jets
    jet_order_extra: int = 4
    conformal_samples: int = 20

    # Output
    float_digits: int = 15
    golden_dir: str = "./data/golden"

    # Concurrency
    max_workers: int = 4

    # Logging
    log_level: str = "INFO"

    class Config:
        env_file = ".env"
        case_sensitive = False

    @property
    def beta_cap(self) -> float:
        """Largest admissible extremal parameter"""
        return 1.0 - self.beta_margin

    @property
    def golden_path(self) -> Path:
        """Directory holding golden CLI documents"""
        return Path(self.golden_dir)

    def default_jet_order(self, k: int) -> int:
        """Jet order used for order-k conformal checks"""
        return 2 * k + self.jet_order_extra

    def ensure_directories(self) -> None:
        """Create necessary directories if they don't exist"""
        self.golden_path.mkdir(parents=True, exist_ok=True)


def configure_logging(level: str | None = None) -> None:
    """Route library logs to stderr so stdout stays a clean document"""
    root = logging.getLogger("app")
    if not root.handlers:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter("%(asctime)s %(levelname)s %(name)s: %(message)s"))
        root.addHandler(handler)
    root.setLevel((level or settings.log_level).upper())


# Global settings instance
settings = Settings()
