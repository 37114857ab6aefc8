"""Testing Helpers
=================
"""
from os.path import abspath, dirname, join
from unittest import TestCase

DATA = join(dirname(abspath(__file__)), 'data')
"""Directory of the bundled fixtures (mini-corpus, benchmark, scripts)."""


def fixture(name):
    """Return the path of the bundled fixture file `name`."""
    return join(DATA, name)


def read_fixture(name):
    """Return the text of the bundled fixture file `name`."""
    with open(fixture(name), encoding='utf-8') as fp:
        return fp.read()


class MultipleTests(TestCase):
    """A Test Case that can automatically generate a number of Tests."""

    @classmethod
    def fn_name(cls, check_fn, args, result):
        """Return a name for the check_fn for an individual test. (NB: must start with "test")."""
        name = 'test_%s_%r_%r' % (check_fn.__name__, args, result)
        return name.translate(str.maketrans('', '', "<>()',[]{}:")).replace(' ', '_').replace('.', '_')

    @classmethod
    def generate_test(cls, check_fn, args, result=None):
        """Generate an individual test, and add it to this TestCase."""
        setattr(cls, cls.fn_name(check_fn, args, result), lambda self: check_fn(self, args, result))
