"""
Django settings for the MBQC Resource Universality Lab.

The project hosts no web surface; Django provides the command framework,
configuration, logging and the run ledger for the numerical apps.
"""

import os
from pathlib import Path
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

import dj_database_url

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

SECRET_KEY = os.getenv('SECRET_KEY', 'mbqclab-local-key-not-used-for-any-signing')

DEBUG = os.getenv('DEBUG', 'False').lower() in ('true', '1', 'yes')

ALLOWED_HOSTS = []

# Application definition

INSTALLED_APPS = [
    'django.contrib.contenttypes',
    'django.contrib.auth',

    # Third-party apps
    'rest_framework',

    # Local apps
    'core',
    'qstate',
    'monotones',
    'epsilon',
    'criteria',
    'percolation',
    'locc',
]

# Database (run ledger only)
DATABASES = {
    'default': dj_database_url.parse(
        os.environ.get('DATABASE_URL', f"sqlite:///{BASE_DIR / 'db.sqlite3'}")
    )
}

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'

USE_TZ = True
TIME_ZONE = 'UTC'

# Django REST Framework is used for payload schemas only
REST_FRAMEWORK = {
    'UNAUTHENTICATED_USER': None,
    'COERCE_DECIMAL_TO_STRING': False,
}

# Dense simulation limits
QSTATE_DENSE_LIMIT = int(os.getenv('QSTATE_DENSE_LIMIT', '14'))
QSTATE_DENSITY_LIMIT = int(os.getenv('QSTATE_DENSITY_LIMIT', '10'))

# Monotone optimizer and tree enumeration
MONOTONES_RESTARTS = int(os.getenv('MONOTONES_RESTARTS', '32'))
MONOTONES_MAX_SWEEPS = int(os.getenv('MONOTONES_MAX_SWEEPS', '500'))
MONOTONES_TOL = float(os.getenv('MONOTONES_TOL', '1e-10'))
MONOTONES_RANK_TOL = float(os.getenv('MONOTONES_RANK_TOL', '1e-8'))
MONOTONES_TREE_CAP = int(os.getenv('MONOTONES_TREE_CAP', '10'))

# LOCC branch trees
LOCC_BRANCH_CAP = int(os.getenv('LOCC_BRANCH_CAP', str(2 ** 20)))

# Command line
CLI_DEFAULT_SEED = int(os.getenv('CLI_DEFAULT_SEED', '20240607'))
CLI_SWEEP_MAX_POINTS = int(os.getenv('CLI_SWEEP_MAX_POINTS', '100000'))

# Logging Configuration - Console only (no file logging)
LOG_LEVEL = os.getenv('LOG_LEVEL', 'INFO').upper()

LOGGING = {
    'version': 1,
    'disable_existing_loggers': True,
    'formatters': {
        'simple': {
            'format': '{levelname} {name}: {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'simple',
        },
    },
    'root': {
        'handlers': ['console'],
        'level': LOG_LEVEL,
    },
}
