"""Test Registered
==================
"""
from unittest import TestCase
from errors import InputError
from registered import Registered, UnknownName


class Base(metaclass=Registered):
    """A registry root."""


class Alpha(Base):
    pass


class Beta(Base):
    pass


class TestRegistered(TestCase):
    """Test a :class:`.Registered` class registry."""

    def test_lookup(self):
        """Sub-classes are found by name, whatever the case."""
        self.assertIs(Base['alpha'], Alpha)
        self.assertIs(Base['ALPHA'], Alpha)
        self.assertIs(Base['Beta'], Beta)

    def test_unknown(self):
        """Unknown names raise UnknownName listing the choices."""
        with self.assertRaises(UnknownName) as context:
            Base['gamma']
        self.assertIn('alpha, beta', str(context.exception))
        self.assertIsInstance(context.exception, InputError)

    def test_iter_and_contains(self):
        """A Registered class iterates over its sub-classes."""
        self.assertEqual(set(Base), {Alpha, Beta})
        self.assertIn('beta', Base)
        self.assertNotIn('gamma', Base)
        self.assertEqual(Base.names, ['alpha', 'beta'])
