from pathlib import Path
import os

# Cargar variables de entorno desde .env
from dotenv import load_dotenv
load_dotenv()

# =============================================================================
# Project Paths
# =============================================================================
BASE_DIR = Path(__file__).resolve().parent.parent

# =============================================================================
# Security Settings
# =============================================================================
SECRET_KEY = os.getenv("BIQ_SECRET_KEY", "biqkit-local-only-not-served")
DEBUG = os.getenv("BIQ_DEBUG", "false").lower() == "true"
ALLOWED_HOSTS = []

# =============================================================================
# Application Definition
# =============================================================================
INSTALLED_APPS = [
    # Django Core Apps
    "django.contrib.contenttypes",
    "django.contrib.auth",
    # Third Party Apps
    "rest_framework",
    # Local Apps
    "core",
    "diagnostics",
]

# =============================================================================
# Database Configuration
# =============================================================================
# Sin modelos propios: la base solo existe para las apps de Django instaladas.
DATABASES = {
    "default": {
        "ENGINE": "django.db.backends.sqlite3",
        "NAME": BASE_DIR / "db.sqlite3",
    }
}

# =============================================================================
# Internationalization
# =============================================================================
LANGUAGE_CODE = "en-us"
TIME_ZONE = "Europe/Madrid"
USE_I18N = True
USE_TZ = True

DEFAULT_AUTO_FIELD = "django.db.models.BigAutoField"

# =============================================================================
# Logging Configuration
# =============================================================================
LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "standard": {
            "format": "%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        },
    },
    "handlers": {
        "console": {
            "class": "logging.StreamHandler",
            "formatter": "standard",
        },
    },
    "loggers": {
        "core": {
            "handlers": ["console"],
            "level": os.getenv("BIQ_LOG_LEVEL", "WARNING"),
            "propagate": False,
        },
        "diagnostics": {
            "handlers": ["console"],
            "level": os.getenv("BIQ_LOG_LEVEL", "WARNING"),
            "propagate": False,
        },
    },
}

# =============================================================================
# REST Framework Configuration
# =============================================================================
# Solo se usan los serializers (esquemas JSON de canales y tablas).
REST_FRAMEWORK = {
    "DEFAULT_AUTHENTICATION_CLASSES": [],
    "DEFAULT_PERMISSION_CLASSES": [],
    "UNAUTHENTICATED_USER": None,
}
