"""
Settings for tolerances and desk-scale resource guards.

Values come from the environment:

    KNROOTS_TOL                 both tolerances at once
    KNROOTS_ANGLE_TOL           angle tolerance (overrides KNROOTS_TOL)
    KNROOTS_LOG_TOL             log-modulus tolerance (overrides KNROOTS_TOL)
    KNROOTS_ENUMERATION_LIMIT   largest root-of-unity group that is enumerated
"""

import math
import os
from dataclasses import dataclass, replace
from typing import Mapping, Optional

from .errors import ConfigurationError

TOL_ENV = "KNROOTS_TOL"
ANGLE_TOL_ENV = "KNROOTS_ANGLE_TOL"
LOG_TOL_ENV = "KNROOTS_LOG_TOL"
ENUMERATION_LIMIT_ENV = "KNROOTS_ENUMERATION_LIMIT"
ARCHIVE_URL_ENV = "KNROOTS_ARCHIVE_URL"


@dataclass(frozen=True)
class Settings:
    """Tolerances and resource guards shared by all computations."""

    angle_tol: float = 1e-9
    log_tol: float = 1e-9
    enumeration_limit: int = 10_000
    max_cone_dim: int = 6
    max_hilbert_dim: int = 4
    max_hilbert_rays: int = 8
    max_parallelepiped_volume: int = 100_000

    def __post_init__(self) -> None:
        for name in ("angle_tol", "log_tol"):
            value = getattr(self, name)
            if not math.isfinite(value) or value <= 0:
                raise ConfigurationError(f"{name} must be positive, got {value!r}")
        if self.enumeration_limit < 1:
            raise ConfigurationError("enumeration_limit must be at least 1")

    @classmethod
    def from_env(cls, environ: Optional[Mapping[str, str]] = None) -> "Settings":
        """Build settings from environment variables.

        Args:
            environ: Mapping to read instead of ``os.environ``

        Returns:
            Settings with defaults for unset variables
        """
        env = os.environ if environ is None else environ
        kwargs = {}

        tol = _read_float(env, TOL_ENV)
        if tol is not None:
            kwargs["angle_tol"] = tol
            kwargs["log_tol"] = tol
        angle_tol = _read_float(env, ANGLE_TOL_ENV)
        if angle_tol is not None:
            kwargs["angle_tol"] = angle_tol
        log_tol = _read_float(env, LOG_TOL_ENV)
        if log_tol is not None:
            kwargs["log_tol"] = log_tol

        raw_limit = env.get(ENUMERATION_LIMIT_ENV)
        if raw_limit:
            try:
                kwargs["enumeration_limit"] = int(raw_limit)
            except ValueError as e:
                raise ConfigurationError(
                    f"{ENUMERATION_LIMIT_ENV} must be an integer, got {raw_limit!r}"
                ) from e

        return cls(**kwargs)

    def with_tolerance(self, tol: float) -> "Settings":
        """Return a copy with both tolerances set to ``tol``."""
        return replace(self, angle_tol=tol, log_tol=tol)


def _read_float(env: Mapping[str, str], name: str) -> Optional[float]:
    raw = env.get(name)
    if not raw:
        return None
    try:
        return float(raw)
    except ValueError as e:
        raise ConfigurationError(f"{name} must be a number, got {raw!r}") from e


def resolve(settings: Optional[Settings]) -> Settings:
    """Return ``settings`` or the environment defaults."""
    return settings if settings is not None else Settings.from_env()
