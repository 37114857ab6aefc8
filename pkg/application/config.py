"""Configuration Options
========================
"""
import logging
import sys
from os import environ

from errors import InputError
from . import defaults

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

logger = logging.getLogger(__name__)

PREFIX = 'DALK_'
TRUE = ('1', 'true', 'yes', 'on')
FALSE = ('0', 'false', 'no', 'off')


def options():
    """Return the option names and defaults of `defaults.py`."""
    return {k: v for k, v in vars(defaults).items() if k.isupper()}


class Config:
    """Config objects store configuration options.
    Default values for each option are loaded from `defaults.py`, then
    overridden by the config file at `path`, then by ``DALK_<OPTION>``
    environment variables, then by `overrides`.
    """

    def __init__(self, path=None, env=None, overrides=None):
        self.defaults()
        if path:
            self.load_file(path)
        self.environment(environ if env is None else env)
        self.update(overrides or {})

    def defaults(self):
        """Read the default configuration options from `defaults.py`."""
        for k, v in options().items():
            setattr(self, k, list(v) if isinstance(v, list) else v)

    def set(self, key, value, source):
        key = key.upper()
        if key not in options():
            raise InputError('{}: unknown option {}'.format(source, key))
        setattr(self, key, self.coerce(key, value, source))

    def coerce(self, key, value, source):
        """Return `value` converted to the type of the option's default."""
        default = options()[key]
        try:
            if isinstance(default, bool):
                if isinstance(value, bool):
                    return value
                if str(value).strip().lower() in TRUE + FALSE:
                    return str(value).strip().lower() in TRUE
                raise ValueError('not a boolean')
            if isinstance(default, list):
                items = value if isinstance(value, (list, tuple)) else str(value).split(',')
                items = [item.strip() if isinstance(item, str) else item for item in items]
                kind = type(default[0]) if default else str
                return [kind(item) for item in items if item != '']
            if isinstance(value, bool):
                raise ValueError('not a {}'.format(type(default).__name__))
            return type(default)(value)
        except (TypeError, ValueError) as error:
            raise InputError('{}: bad value {!r} for {} ({})'.format(source, value, key, error)) from None

    def load_file(self, path):
        """Override options from a TOML file; keys may sit in a ``[dalk]`` table."""
        try:
            with open(path, 'rb') as fp:
                data = tomllib.load(fp)
        except OSError as error:
            raise InputError('config file {}: {}'.format(path, error.strerror)) from None
        except tomllib.TOMLDecodeError as error:
            raise InputError('config file {}: {}'.format(path, error)) from None
        for key, value in data.get('dalk', data).items():
            self.set(key, value, path)
        logger.debug('loaded config file %s', path)

    def environment(self, env):
        """Override each option from a matching ``DALK_`` environment variable."""
        for key in options():
            if PREFIX + key in env:
                self.set(key, env[PREFIX + key], PREFIX + key)

    def update(self, overrides):
        """Override options from a mapping; None values are skipped."""
        for key, value in overrides.items():
            if value is not None:
                self.set(key, value, '--' + key.lower().replace('_', '-'))

    def __iter__(self):
        return ((k, v) for k, v in sorted(vars(self).items()) if k.isupper())

    def json(self):
        """Return a list representation of the conf,
        suitable for JSON encoding.
        """
        return ['%s = %s' % (k, v) for k, v in sorted(self)]
