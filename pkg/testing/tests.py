"""Test Testing
===============
"""
import ast
import os
from unittest import TestCase

import requests

from testing import DATA, MultipleTests, StubProvider, fixture, read_fixture


class TestFixtures(TestCase):
    """Test the fixture helpers."""

    def test_fixture(self):
        """Fixture paths point into the data directory."""
        self.assertEqual(fixture('minicorpus.pubtator'), os.path.join(DATA, 'minicorpus.pubtator'))
        self.assertTrue(os.path.exists(fixture('minicorpus.pubtator')))

    def test_read_fixture(self):
        """Fixtures are read as text."""
        self.assertTrue(read_fixture('roundtrip.pubtator').startswith('2000001|t|'))


def check_square(self, args, result):
    self.assertEqual(args * args, result)


class TestGenerated(MultipleTests):
    """Test :meth:`.MultipleTests.generate_test`."""


for n in range(4):
    TestGenerated.generate_test(check_square, n, n * n)


class TestGeneratedNames(TestCase):
    """Generated tests are named after their check and arguments."""

    def test_names(self):
        """One test per generated case."""
        names = [name for name in dir(TestGenerated) if name.startswith('test_check_square')]
        self.assertEqual(len(names), 4)
        self.assertIn('test_check_square_3_9', names)


class TestStubProvider(TestCase):
    """Test :class:`.StubProvider`."""

    def setUp(self):
        self.stub = StubProvider(reply='Hello', failures=[503])
        self.base_url = self.stub.start()

    def tearDown(self):
        self.stub.stop()

    def test_chat(self):
        """The stub fails as scripted, then replies."""
        url = self.base_url + '/chat/completions'
        body = {'model': 'm', 'messages': [{'role': 'user', 'content': 'hi'}]}
        self.assertEqual(requests.post(url, json=body).status_code, 503)
        reply = requests.post(url, json=body).json()
        self.assertEqual(reply['choices'][0]['message']['content'], 'Hello')
        self.assertEqual(len(self.stub.received), 2)

    def test_not_found(self):
        """Unknown paths are 404."""
        self.assertEqual(requests.post(self.base_url + '/nothing', json={}).status_code, 404)


class TestRequirements(TestCase):
    """The stub server's dependency is only needed for testing."""

    def setup_keywords(self):
        with open(os.path.join(os.path.dirname(DATA), os.pardir, 'setup.py'), encoding='utf-8') as fp:
            tree = ast.parse(fp.read())
        call = next(node for node in ast.walk(tree)
                    if isinstance(node, ast.Call) and getattr(node.func, 'id', '') == 'setup')
        return {keyword.arg: ast.literal_eval(keyword.value) for keyword in call.keywords
                if keyword.arg in ('install_requires', 'extras_require')}

    def test_werkzeug_extra(self):
        """werkzeug is a tests extra, not an install requirement."""
        keywords = self.setup_keywords()
        self.assertFalse(any(req.startswith('werkzeug') for req in keywords['install_requires']))
        self.assertTrue(any(req.startswith('werkzeug') for req in keywords['extras_require']['tests']))
