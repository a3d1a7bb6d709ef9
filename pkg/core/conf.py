"""
Access to the toolkit tunables defined in the settings module.
"""

from django.conf import settings

DEFAULTS = {
    'QSTATE_DENSE_LIMIT': 14,
    'QSTATE_DENSITY_LIMIT': 10,
    'MONOTONES_RESTARTS': 32,
    'MONOTONES_MAX_SWEEPS': 500,
    'MONOTONES_TOL': 1e-10,
    'MONOTONES_RANK_TOL': 1e-8,
    'MONOTONES_TREE_CAP': 10,
    'LOCC_BRANCH_CAP': 2 ** 20,
    'CLI_DEFAULT_SEED': 20240607,
    'CLI_SWEEP_MAX_POINTS': 100000,
}


def get_setting(name):
    """Return a tunable from settings, falling back to the packaged default."""
    if name not in DEFAULTS:
        raise KeyError(f'Unknown toolkit setting: {name}')
    return getattr(settings, name, DEFAULTS[name])
