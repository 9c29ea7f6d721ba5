# moddouble_project/settings.py

import os
from pathlib import Path

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

# Only used by Django internals; nothing here is served.
SECRET_KEY = os.environ.get('SECRET_KEY', 'moddouble-local-key-not-for-deployment')

DEBUG = os.environ.get('DEBUG', 'False').lower() == 'true'

ALLOWED_HOSTS = []

# Application definition
INSTALLED_APPS = [
    'django.contrib.contenttypes',
    'django.contrib.auth',

    # Third-party apps
    'rest_framework',

    # Project apps
    'params',
    'weyl',
    'qdilog',
    'kernel',
    'representation',
    'verification',
]

ROOT_URLCONF = 'moddouble_project.urls'

# No check touches the database; sqlite keeps Django's test runner happy.
DATABASES = {
    'default': {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': BASE_DIR / 'db.sqlite3',
    }
}

LANGUAGE_CODE = 'en-us'
TIME_ZONE = 'UTC'
USE_I18N = False
USE_TZ = True

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'

# REST Framework settings - only the renderer/serializer layer is used
REST_FRAMEWORK = {
    'DEFAULT_RENDERER_CLASSES': (
        'rest_framework.renderers.JSONRenderer',
    ),
    'COERCE_DECIMAL_TO_STRING': False,
    'UNAUTHENTICATED_USER': None,
}

# Verification settings
MODDOUBLE_SETTINGS = {
    'OUTPUT_DIR': os.environ.get('MODDOUBLE_OUTPUT_DIR', '.'),
    'CONTOUR_NODES': int(os.environ.get('MODDOUBLE_CONTOUR_NODES', '2048')),
    'LADDER_MAX_STEPS': int(os.environ.get('MODDOUBLE_LADDER_MAX_STEPS', '64')),
    'STRIP_FRACTION': float(os.environ.get('MODDOUBLE_STRIP_FRACTION', '0.5')),
    'POLE_PROXIMITY': float(os.environ.get('MODDOUBLE_POLE_PROXIMITY', '1e-6')),
    'IDENTITY_TOL': float(os.environ.get('MODDOUBLE_IDENTITY_TOL', '1e-8')),
    'TRUNCATION_TOL': float(os.environ.get('MODDOUBLE_TRUNCATION_TOL', '1e-3')),
    'OPERATOR_TOL': float(os.environ.get('MODDOUBLE_OPERATOR_TOL', '1e-10')),
    'QUAD_NX': int(os.environ.get('MODDOUBLE_QUAD_NX', '160')),
    'QUAD_NY': int(os.environ.get('MODDOUBLE_QUAD_NY', '48')),
    'DEFAULT_X': float(os.environ.get('MODDOUBLE_DEFAULT_X', '5.0')),
    'DEFAULT_YPAD': float(os.environ.get('MODDOUBLE_DEFAULT_YPAD', '2.0')),
    'GAUSSIAN_SIGMA': float(os.environ.get('MODDOUBLE_GAUSSIAN_SIGMA', '1.0')),
}

# Logging
LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'plain': {
            'format': '%(levelname)s %(name)s: %(message)s',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'plain',
        },
    },
    'root': {
        'handlers': ['console'],
        'level': os.environ.get('MODDOUBLE_LOG_LEVEL', 'INFO'),
    },
}
