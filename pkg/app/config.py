"""
Config Module - Caps and switches loaded from the environment
"""

import os
from functools import lru_cache

from dotenv import load_dotenv
from pydantic import BaseModel, Field

load_dotenv()


def _env_bool(name: str, default: str) -> bool:
    return os.getenv(name, default).strip().lower() in ("1", "true", "yes", "on")


class Settings(BaseModel):
    """
    Runtime settings for every capped search in the package

    Responsibilities:
    - Hold the size caps that guard exhaustive searches
    - Hold the debug-check and logging switches

    Does NOT handle:
    - Per-call overrides (callers pass explicit keyword arguments)
    """

    iso_max_n: int = Field(10, gt=0)
    rankwidth_max_n: int = Field(14, gt=0)
    kappa_max_free: int = Field(20, gt=0)
    mf_max_n: int = Field(20, gt=0)
    vm_max_n: int = Field(9, gt=0)
    lec_max_size: int = Field(200_000, gt=0)
    search_max_side: int = Field(12, gt=0)
    search_max_k: int = Field(5, gt=0)
    disentangle_max_n: int = Field(18, gt=0)
    circle_verify_max_n: int = Field(6, gt=0)
    pipeline_max_m: int = Field(4, gt=0)
    bound_max_bits: int = Field(65_536, gt=0)
    debug_checks: bool = True
    log_level: str = "WARNING"

    @classmethod
    def from_env(cls) -> "Settings":
        """Build settings from VMC_* environment variables"""
        return cls(
            iso_max_n=int(os.getenv("VMC_ISO_MAX_N", "10")),
            rankwidth_max_n=int(os.getenv("VMC_RANKWIDTH_MAX_N", "14")),
            kappa_max_free=int(os.getenv("VMC_KAPPA_MAX_FREE", "20")),
            mf_max_n=int(os.getenv("VMC_MF_MAX_N", "20")),
            vm_max_n=int(os.getenv("VMC_VM_MAX_N", "9")),
            lec_max_size=int(os.getenv("VMC_LEC_MAX_SIZE", "200000")),
            search_max_side=int(os.getenv("VMC_SEARCH_MAX_SIDE", "12")),
            search_max_k=int(os.getenv("VMC_SEARCH_MAX_K", "5")),
            disentangle_max_n=int(os.getenv("VMC_DISENTANGLE_MAX_N", "18")),
            circle_verify_max_n=int(os.getenv("VMC_CIRCLE_VERIFY_MAX_N", "6")),
            pipeline_max_m=int(os.getenv("VMC_PIPELINE_MAX_M", "4")),
            bound_max_bits=int(os.getenv("VMC_BOUND_MAX_BITS", "65536")),
            debug_checks=_env_bool("VMC_DEBUG_CHECKS", "true"),
            log_level=os.getenv("VMC_LOG_LEVEL", "WARNING").upper(),
        )


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """Process-wide settings instance"""
    return Settings.from_env()


def cap_or_default(value, name: str) -> int:
    """Return an explicit cap, or the configured one when value is None"""
    if value is not None:
        return int(value)
    return int(getattr(get_settings(), name))
