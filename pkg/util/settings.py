import os
from dataclasses import dataclass
from functools import lru_cache

from dotenv import load_dotenv

load_dotenv()


@dataclass(frozen=True)
class Settings:
    """Runtime configuration read from the environment"""
    max_trajs: int = 1_000_000
    default_steps: int = 5
    default_max_tokens: int = 60
    log_level: str = "INFO"
    api_host: str = "127.0.0.1"
    api_port: int = 5000


def _int_env(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"Must set {name} to an integer, got '{raw}'")


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """
    Load settings from environment variables (after .env).

    Returns:
        Settings with PATHQUERY_* overrides applied
    """
    return Settings(
        max_trajs=_int_env("PATHQUERY_MAX_TRAJS", Settings.max_trajs),
        default_steps=_int_env("PATHQUERY_DEFAULT_STEPS", Settings.default_steps),
        default_max_tokens=_int_env("PATHQUERY_DEFAULT_MAX_TOKENS", Settings.default_max_tokens),
        log_level=os.getenv("PATHQUERY_LOG_LEVEL", Settings.log_level).upper(),
        api_host=os.getenv("PATHQUERY_API_HOST", Settings.api_host),
        api_port=_int_env("PATHQUERY_API_PORT", Settings.api_port),
    )
