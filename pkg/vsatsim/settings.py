"""
Django settings for the vsatsim project.

The project hosts a single app, vsatlink, driven entirely through management
commands. There is no URL routing and no database.

Values can be overridden from the environment or from a .env file at the
repository root.
"""

import os
from pathlib import Path

from dotenv import load_dotenv

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

load_dotenv(BASE_DIR / ".env")


# Nothing is signed here, Django just refuses to start without a key.
SECRET_KEY = os.environ.get("DJANGO_SECRET_KEY", "vsatsim-local-simulation-key")

DEBUG = os.environ.get("DJANGO_DEBUG", "0") == "1"

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    'vsatlink',
]

TEMPLATES = [
    {
        'BACKEND': 'django.template.backends.django.DjangoTemplates',
        'DIRS': [],
        'APP_DIRS': True,
        'OPTIONS': {
            # Reports are plain text, never HTML.
            'autoescape': False,
        },
    },
]

# Simulation runs keep no state between invocations.
DATABASES = {}


# Logging
# https://docs.djangoproject.com/en/5.2/topics/logging/

LOG_LEVEL = os.environ.get("VSATLINK_LOG_LEVEL", "INFO").upper()

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "verbose": {
            "format": "{levelname} {asctime} {name} {message}",
            "style": "{",
        },
    },
    "handlers": {
        "console": {
            "class": "logging.StreamHandler",
            "formatter": "verbose",
        },
    },
    "loggers": {
        "vsatlink": {
            "handlers": ["console"],
            "level": LOG_LEVEL,
            "propagate": False,
        },
    },
}


# Simulator

VSATLINK = {
    "DEFAULT_SCENARIO": BASE_DIR / "scenarios" / "cband_vsat.json",
    "SWEEP_WORKERS": int(os.environ.get("VSATLINK_SWEEP_WORKERS", "1")),
    "FRAME_LOG_EVERY": int(os.environ.get("VSATLINK_FRAME_LOG_EVERY", "500")),
}


# Internationalization
# https://docs.djangoproject.com/en/5.2/topics/i18n/

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = False

USE_TZ = True
