# verification/utils.py
from pathlib import Path

from django.conf import settings


def get_moddouble_settings():
    """
    Current numerical settings.
    Other apps read tunables through the helpers below.
    """
    return settings.MODDOUBLE_SETTINGS


def get_setting(key):
    return get_moddouble_settings()[key]


def get_contour_nodes():
    return get_setting('CONTOUR_NODES')


def get_ladder_max_steps():
    return get_setting('LADDER_MAX_STEPS')


def get_strip_fraction():
    return get_setting('STRIP_FRACTION')


def get_pole_proximity():
    return get_setting('POLE_PROXIMITY')


def get_identity_tolerance():
    return get_setting('IDENTITY_TOL')


def get_truncation_tolerance():
    return get_setting('TRUNCATION_TOL')


def get_operator_tolerance():
    return get_setting('OPERATOR_TOL')


def get_quadrature_resolution():
    """(nx, ny) tensor-grid sizes for the planar quadrature"""
    return get_setting('QUAD_NX'), get_setting('QUAD_NY')


def get_default_x_extent():
    return get_setting('DEFAULT_X')


def get_default_y_padding():
    return get_setting('DEFAULT_YPAD')


def get_gaussian_sigma():
    return get_setting('GAUSSIAN_SIGMA')


def resolve_output_path(path):
    """Relative report paths land under OUTPUT_DIR"""
    path = Path(path)
    if not path.is_absolute():
        path = Path(get_setting('OUTPUT_DIR')) / path
    path.parent.mkdir(parents=True, exist_ok=True)
    return path
