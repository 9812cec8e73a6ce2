"""
Django settings for the quatnls project.

Uses django-environ to load configuration from an optional .env file.
See .env.example for the supported environment variables.
"""

from pathlib import Path

import environ

from quatnls import constants

# ─── Paths ─────────────────────────────────────────────────────────────────────

BASE_DIR = Path(__file__).resolve().parent.parent

# ─── Environment ───────────────────────────────────────────────────────────────

env = environ.Env(
    DEBUG=(bool, False),
    QUATNLS_STRICT_DYNAMICS=(bool, False),
)

environ.Env.read_env(BASE_DIR / ".env")

# ─── Core ──────────────────────────────────────────────────────────────────────

# No sessions, cookies or signed data exist; the key only satisfies Django.
SECRET_KEY = env("SECRET_KEY", default="quatnls-insecure-local-key")

DEBUG = env("DEBUG")

ALLOWED_HOSTS: list[str] = []

# ─── Application Definition ────────────────────────────────────────────────────

LOCAL_APPS = [
    "quaternions",
    "matrices",
    "triplets",
    "solitons",
    "scattering",
    "batch",
]

INSTALLED_APPS = LOCAL_APPS

# ─── Database ──────────────────────────────────────────────────────────────────
# Every domain type is an in-memory value object; nothing is persisted.

DATABASES: dict = {}

# ─── Internationalisation ──────────────────────────────────────────────────────

LANGUAGE_CODE = "en-us"

TIME_ZONE = env("TIME_ZONE", default="UTC")

USE_I18N = False

USE_TZ = True

# ─── Numerics ──────────────────────────────────────────────────────────────────

# Worker cap for grid evaluation and λ sweeps (ThreadPoolExecutor max_workers).
QUATNLS_THREADS = env.int("QUATNLS_THREADS", default=4)

QUATNLS_ADMISSIBILITY_TOL = env.float(
    "QUATNLS_ADMISSIBILITY_TOL", default=constants.ADMISSIBILITY_TOL
)

QUATNLS_SIGMA_TOL = env.float("QUATNLS_SIGMA_TOL", default=constants.SIGMA_TOL)

# When True, the NLS residual and kernel evolution checks decide the verdict
# of `manage.py verify` instead of being reported as advisory.
QUATNLS_STRICT_DYNAMICS = env("QUATNLS_STRICT_DYNAMICS")

# Test hook: when positive, `manage.py verify` shifts one entry of P_r by this
# relative amount before running the checks. Negative controls set it.
QUATNLS_CORRUPT_P = env.float("QUATNLS_CORRUPT_P", default=0.0)

# ─── Logging ───────────────────────────────────────────────────────────────────

LOG_LEVEL = env("LOG_LEVEL", default="INFO")

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "standard": {
            "format": "[%(asctime)s] %(levelname)s %(name)s: %(message)s",
        },
    },
    "handlers": {
        "console": {
            "class": "logging.StreamHandler",
            "formatter": "standard",
            "level": LOG_LEVEL,
        },
    },
    "loggers": {
        "": {
            "handlers": ["console"],
            "level": LOG_LEVEL,
        },
        "django": {
            "handlers": ["console"],
            "level": LOG_LEVEL,
            "propagate": False,
        },
        "quaternions": {"handlers": ["console"], "level": LOG_LEVEL, "propagate": False},
        "matrices": {"handlers": ["console"], "level": LOG_LEVEL, "propagate": False},
        "triplets": {"handlers": ["console"], "level": LOG_LEVEL, "propagate": False},
        "solitons": {"handlers": ["console"], "level": LOG_LEVEL, "propagate": False},
        "scattering": {"handlers": ["console"], "level": LOG_LEVEL, "propagate": False},
        "batch": {"handlers": ["console"], "level": LOG_LEVEL, "propagate": False},
    },
}
