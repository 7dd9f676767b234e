# configuration/runtime_settings.py
from dataclasses import dataclass

MODES = ("sim", "seq", "threads")
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")


@dataclass(frozen=True)
class RuntimeSettings:
    environment: str = "develop"
    default_mode: str = "sim"
    default_quantum: int = 1
    default_tick_ms: float = 1.0
    log_level: str = "WARNING"


def load_settings() -> RuntimeSettings:
    """Read configuration/settings.py when present, otherwise use the defaults."""
    defaults = RuntimeSettings()
    try:
        from configuration import settings as user_settings
    except ImportError:
        return defaults

    loaded = RuntimeSettings(
        environment=getattr(user_settings, "ENVIRONMENT", defaults.environment),
        default_mode=getattr(user_settings, "DEFAULT_MODE", defaults.default_mode),
        default_quantum=getattr(
            user_settings, "DEFAULT_QUANTUM", defaults.default_quantum
        ),
        default_tick_ms=getattr(
            user_settings, "DEFAULT_TICK_MS", defaults.default_tick_ms
        ),
        log_level=getattr(user_settings, "LOG_LEVEL", defaults.log_level),
    )
    validate_settings(loaded)
    return loaded


def validate_settings(settings: RuntimeSettings):
    """Reject values the runners cannot use."""
    if settings.default_mode not in MODES:
        raise ValueError(
            f"DEFAULT_MODE must be one of {', '.join(MODES)}, got {settings.default_mode!r}"
        )
    if not isinstance(settings.default_quantum, int) or settings.default_quantum < 1:
        raise ValueError(
            f"DEFAULT_QUANTUM must be a positive integer, got {settings.default_quantum!r}"
        )
    if settings.default_tick_ms < 0:
        raise ValueError(
            f"DEFAULT_TICK_MS must be non-negative, got {settings.default_tick_ms!r}"
        )
    if str(settings.log_level).upper() not in LOG_LEVELS:
        raise ValueError(
            f"LOG_LEVEL must be one of {', '.join(LOG_LEVELS)}, got {settings.log_level!r}"
        )
