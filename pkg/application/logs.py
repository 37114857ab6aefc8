"""Logging
=========
"""
import logging
import sys

from errors import InputError

FORMAT = '%(asctime)s %(levelname)s %(name)s: %(message)s'


def configure_logging(level='INFO', stream=None):
    """Send log records at `level` and above to stderr through one handler."""
    numeric = logging.getLevelName(str(level).upper())
    if not isinstance(numeric, int):
        raise InputError('{}: unknown log level'.format(level))
    root = logging.getLogger()
    for handler in list(root.handlers):
        if getattr(handler, 'dalk', False):
            root.removeHandler(handler)
    handler = logging.StreamHandler(stream or sys.stderr)
    handler.setFormatter(logging.Formatter(FORMAT))
    handler.dalk = True
    root.addHandler(handler)
    root.setLevel(numeric)
    return handler
