"""
Application settings: config/settings.json merged over built-in defaults,
with the CANONLINK_THREADS environment override.
"""

import copy
import json
import logging
import os

logger = logging.getLogger(__name__)

PROJECT_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
SETTINGS_FILE = os.path.join(PROJECT_ROOT, 'config', 'settings.json')
THREADS_ENV = 'CANONLINK_THREADS'

DEFAULTS = {
    'solver': {
        'epsilon': 1e-10,
        'max_iterations': 100,
        'coef_tolerance': 1e-10,
        'score_tolerance': 1e-8,
        'max_halvings': 20,
        'pivot_tolerance': 1e-12,
    },
    'grid': {
        'low': 10,
        'high': 20,
        'step': 2,
        'trials': 200,
        'links': ['identity', 'log', 'logit'],
    },
    'bootstrap': {
        'replicates': 10000,
        'seed': 20210714,
    },
    'threads': 1,
}


class SettingsError(ValueError):
    """Invalid configuration value."""


def _merge(base, override):
    merged = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def parse_threads(value):
    try:
        threads = int(value)
    except (TypeError, ValueError):
        threads = 0
    if threads < 1:
        raise SettingsError(f"{THREADS_ENV} must be a positive integer, got {value!r}")
    return threads


def load_settings(path=None, environ=None):
    """Load settings; a missing or unreadable file falls back to defaults."""
    path = path or SETTINGS_FILE
    environ = os.environ if environ is None else environ
    settings = copy.deepcopy(DEFAULTS)

    try:
        if os.path.exists(path):
            with open(path, 'r', encoding='utf-8') as f:
                settings = _merge(DEFAULTS, json.load(f))
    except (OSError, json.JSONDecodeError) as e:
        logger.warning(f"⚠️ Error loading settings from {path}: {e}; using defaults")

    if environ.get(THREADS_ENV):
        settings['threads'] = parse_threads(environ[THREADS_ENV])
    return settings
