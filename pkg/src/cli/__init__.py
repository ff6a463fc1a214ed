"""Command-line front end."""

from .schema import RunConfig, EventConfig, McConfig
from .commands import (
    COMMANDS,
    cmd_gramians,
    cmd_translate,
    cmd_synthesize,
    cmd_discretize,
    cmd_validate,
    cmd_sweep,
)
from .main import build_parser, load_config, main

__all__ = [
    'RunConfig',
    'EventConfig',
    'McConfig',
    'COMMANDS',
    'cmd_gramians',
    'cmd_translate',
    'cmd_synthesize',
    'cmd_discretize',
    'cmd_validate',
    'cmd_sweep',
    'build_parser',
    'load_config',
    'main',
]
