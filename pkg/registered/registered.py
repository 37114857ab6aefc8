"""Registered
=============
"""
from errors import InputError


class UnknownName(InputError):
    """No class is registered under the requested name."""


class Registered(type):
    """A meta-class for classes that keep a Registry of their sub-classes,
    so that a sub-class can be chosen by name from configuration. E.g.:

        |   class Provider(metaclass=Registered): ...
        |
        |   class Replay(Provider): ...
        |   class Scripted(Provider): ...
        |
        |   Provider['replay']        # -> Replay

    A Registered class can also be iterated over for all its
    Registered subclasses, Usage:

            | for subclass in cls
    """
    _Registry = {}
    """A mapping of a string to a Class."""

    def __init__(cls, name, bases, dct):
        """Register the `cls` in the Registry of its base class."""
        super().__init__(name, bases, dct)
        cls._Registry = {}
        cls._super(bases)._Registry[cls.classCase(name)] = cls

    def _super(cls, bases):
        """Return the base class that implements the Registry."""
        registered = [base for base in bases if isinstance(base, Registered)]
        return registered[0] if registered else Registered

    def __getitem__(cls, name):
        """Return the Registered class called `name`
        ("scripted", "Scripted" and "SCRIPTED" all return `Scripted`).
        """
        try:
            return cls._Registry[cls.classCase(name)]
        except KeyError:
            raise UnknownName('{}: unknown {} (choose from {})'.format(
                name, cls.__name__.lower(), ', '.join(cls.names))) from None

    def __iter__(cls):
        """Return an iterator over all Registered subclasses."""
        return iter(cls._Registry.values())

    def __contains__(cls, name):
        """Return True if `name` is the name of a Registered subclass."""
        return cls.classCase(name) in cls._Registry

    @property
    def names(cls):
        """Return the lower-case names of the Registered subclasses, sorted."""
        return sorted(name.lower() for name in cls._Registry)

    @staticmethod
    def classCase(name):
        return name[:1].upper() + name[1:].lower()
