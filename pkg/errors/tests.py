"""Test Errors
==============
"""
from unittest import TestCase
from errors import DalkError, InputError, ProviderError


class TestErrors(TestCase):
    """Test the error hierarchy."""

    def test_input_error(self):
        """InputErrors are DalkErrors and ValueErrors."""
        self.assertTrue(issubclass(InputError, DalkError))
        self.assertTrue(issubclass(InputError, ValueError))

    def test_provider_error(self):
        """ProviderErrors are DalkErrors and RuntimeErrors."""
        self.assertTrue(issubclass(ProviderError, DalkError))
        self.assertTrue(issubclass(ProviderError, RuntimeError))
        self.assertFalse(issubclass(ProviderError, InputError))
