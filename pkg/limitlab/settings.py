"""
Django settings for the limitlab project.

The project has no database, no HTTP surface and no templates: Django hosts
the app registry, the management-command harness and the logging setup.
"""

import os
from pathlib import Path
from core.config import Config

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

SECRET_KEY = Config.SECRET_KEY

DEBUG = Config.DEBUG

ALLOWED_HOSTS = []

# Application definition

INSTALLED_APPS = [
    # Local apps
    "core",
    "combinatorics",
    "samplers",
    "counters",
    "distributions",
    "limitmetrics",
    "steinlab",
    "cli",
]

# No persistence: every result is recomputed from (arguments, seed)
DATABASES = {}

USE_TZ = True
TIME_ZONE = "UTC"

# ===========================
# LOGGING CONFIGURATION
# ===========================

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "verbose": {
            "format": "{levelname} {asctime} {module} {process:d} {thread:d} {message}",
            "style": "{",
        },
        "simple": {
            "format": "{levelname} {message}",
            "style": "{",
        },
    },
    "handlers": {
        "console": {
            "level": Config.LOG_LEVEL,
            "class": "logging.StreamHandler",
            "formatter": "simple",
        },
        "file": {
            "level": "INFO",
            "class": "logging.handlers.RotatingFileHandler",
            "filename": BASE_DIR / "logs" / "limitlab.log",
            "maxBytes": 1024 * 1024 * 10,  # 10 MB
            "backupCount": 5,
            "formatter": "verbose",
        },
    },
    "loggers": {
        "django": {
            "handlers": ["console", "file"],
            "level": "WARNING",
            "propagate": False,
        },
        **{
            app: {
                "handlers": ["console", "file"],
                "level": Config.LOG_LEVEL,
                "propagate": False,
            }
            for app in INSTALLED_APPS
        },
    },
    "root": {
        "handlers": ["console"],
        "level": "INFO",
    },
}

# Create logs directory if it doesn't exist
os.makedirs(BASE_DIR / "logs", exist_ok=True)
