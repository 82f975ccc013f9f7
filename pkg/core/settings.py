"""
Django settings for the Step Pruner pipeline.
"""

import os
from pathlib import Path

from dotenv import load_dotenv

load_dotenv()

BASE_DIR = Path(__file__).resolve().parent.parent

SECRET_KEY = os.getenv("DJANGO_SECRET_KEY", "step-pruner-local")

DEBUG = os.getenv("DEBUG", "false").lower() == "true"

# Application definition
INSTALLED_APPS = [
    "apps.segmentation",
    "apps.rewards",
    "apps.grpo",
    "apps.trainer",
    "apps.evaluation",
    "apps.profiler",
    "apps.pipeline",
]

# Commands only read and write files
DATABASES: dict = {}

# Run configs shipped with the repo
RUN_CONFIG_DIR = BASE_DIR / "configs"

# Judge (chat-completion style endpoint)
JUDGE_API_URL = os.getenv("JUDGE_API_URL", "https://api.deepseek.com/v1/chat/completions")
JUDGE_API_KEY = os.getenv("JUDGE_API_KEY", "")
JUDGE_MODEL = os.getenv("JUDGE_MODEL", "deepseek-chat")
JUDGE_TIMEOUT = float(os.getenv("JUDGE_TIMEOUT", "120"))

# Embeddings (OpenAI-compatible /embeddings endpoint)
EMBEDDING_API_URL = os.getenv("EMBEDDING_API_URL", "https://api.openai.com/v1/embeddings")
EMBEDDING_API_KEY = os.getenv("EMBEDDING_API_KEY", "")
EMBEDDING_MODEL = os.getenv("EMBEDDING_MODEL", "all-MiniLM-L6-v2")
EMBEDDING_TIMEOUT = float(os.getenv("EMBEDDING_TIMEOUT", "30"))

# Internationalization
LANGUAGE_CODE = "en-us"
TIME_ZONE = "UTC"
USE_I18N = False
USE_TZ = True

# Logging
LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "verbose": {
            "format": "{levelname} {asctime} {module} {message}",
            "style": "{",
        },
    },
    "handlers": {
        "console": {
            "class": "logging.StreamHandler",
            "formatter": "verbose",
        },
    },
    "root": {
        "handlers": ["console"],
        "level": "INFO",
    },
    "loggers": {
        "django": {
            "handlers": ["console"],
            "level": os.getenv("DJANGO_LOG_LEVEL", "WARNING"),
            "propagate": False,
        },
        "apps": {
            "handlers": ["console"],
            "level": os.getenv("PIPELINE_LOG_LEVEL", "INFO"),
            "propagate": False,
        },
        # Judge and embedder traffic
        "agents": {
            "handlers": ["console"],
            "level": os.getenv("PIPELINE_LOG_LEVEL", "INFO"),
            "propagate": False,
        },
    },
}
