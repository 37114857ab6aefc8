"""Test
=======
"""
import io
import logging
import os
import tempfile
from unittest import TestCase

from application import EXIT_INPUT, EXIT_INTERNAL, EXIT_OK, EXIT_PROVIDER, CLIApplication, Config, configure_logging
from errors import InputError, ProviderError


def toml_file(text):
    fp = tempfile.NamedTemporaryFile('w', suffix='.toml', delete=False, encoding='utf-8')
    with fp:
        fp.write(text)
    return fp.name


class TestConfig(TestCase):
    """Test :class:`.Config`."""

    def setUp(self):
        self.path = toml_file('[dalk]\nretrieve_k = 3\nhop_bound = 3\nmodel = "file-model"\n'
                              'keywords = ["APOE", "Dementia"]\njoint_rerank = true\n')
        self.env = {'DALK_HOP_BOUND': '4', 'DALK_MODEL': 'env-model', 'DALK_API_KEY': 'secret'}

    def tearDown(self):
        os.remove(self.path)

    def test_defaults(self):
        """Test default configuration loaded from defaults.py."""
        config = Config(env={})
        self.assertEqual(config.RETRIEVE_K, 5)
        self.assertEqual(config.TEMPERATURE, 0.7)
        self.assertEqual(config.SWEEP_KS, [1, 3, 5, 10, 20, 30])
        self.assertEqual(config.YEARS[0], 2011)
        self.assertEqual(config.YEARS[-1], 2021)
        self.assertIs(config.JOINT_RERANK, False)

    def test_file(self):
        """Options are read from a TOML file's [dalk] table."""
        config = Config(self.path, env={})
        self.assertEqual((config.RETRIEVE_K, config.MODEL), (3, 'file-model'))
        self.assertEqual(config.KEYWORDS, ['APOE', 'Dementia'])
        self.assertIs(config.JOINT_RERANK, True)

    def test_precedence(self):
        """Flags beat the environment, which beats the file, which beats the defaults."""
        config = Config(self.path, env=self.env, overrides={'MODEL': 'flag-model', 'RETRIEVE_K': None})
        self.assertEqual(config.MODEL, 'flag-model')
        self.assertEqual(config.HOP_BOUND, 4)
        self.assertEqual(config.RETRIEVE_K, 3)
        self.assertEqual(config.MAX_TRIPLES, 40)

    def test_coercion(self):
        """Text values take the type of the default."""
        config = Config(env={'DALK_SWEEP_KS': '1, 2', 'DALK_STRICT': 'yes', 'DALK_TIMEOUT': '5'})
        self.assertEqual(config.SWEEP_KS, [1, 2])
        self.assertIs(config.STRICT, True)
        self.assertEqual(config.TIMEOUT, 5.0)
        self.assertRaises(InputError, Config, env={'DALK_HOP_BOUND': 'two'})
        self.assertRaises(InputError, Config, env={'DALK_STRICT': 'maybe'})

    def test_unknown(self):
        """Unknown file keys are errors; the API key is never an option."""
        path = toml_file('api_key = "secret"\n')
        try:
            self.assertRaises(InputError, Config, path, {})
        finally:
            os.remove(path)
        self.assertFalse(hasattr(Config(env=self.env), 'API_KEY'))
        self.assertRaises(InputError, Config, '/no/such/file.toml', {})

    def test_json(self):
        """Test JSON configuration."""
        lines = Config(env={}).json()
        self.assertEqual(lines, sorted(lines))
        self.assertIn('RETRIEVE_K = 5', lines)
        self.assertFalse(any('secret' in line for line in Config(env=self.env).json()))


class TestLogging(TestCase):
    """Test :func:`.configure_logging`."""

    def tearDown(self):
        configure_logging('WARNING')

    def test_format(self):
        """One handler writes level, logger name and message."""
        stream = io.StringIO()
        configure_logging('debug', stream)
        configure_logging('INFO', stream)
        logging.getLogger('dalk.test').info('hello')
        logging.getLogger('dalk.test').debug('hidden')
        self.assertRegex(stream.getvalue(), r'^\S+ \S+ INFO dalk\.test: hello\n$')

    def test_level(self):
        self.assertRaises(InputError, configure_logging, 'LOUD')


class App(CLIApplication):
    """Test application."""

    def ok(self, args):
        """Say ok."""
        return 'ok ' + ' '.join(args)

    def bad_input(self, args):
        raise InputError('bad')

    def bad_provider(self, args):
        raise ProviderError('down')

    def broken(self, args):
        return {}['missing']

    _cmds = {('ok',): ok, ('input',): bad_input, ('provider',): bad_provider, ('broken',): broken}


class TestCLIApplication(TestCase):
    """Test :class:`.CLIApplication` exit codes."""

    def test_commands(self):
        """Subclass commands join the base ones."""
        names = [names for names, _ in App().cli.commands]
        self.assertIn(('-h', '--help'), names)
        self.assertIn(('ok',), names)

    def test_help(self):
        self.assertIn('Test application.', App().print_help([]))
        self.assertIn('ok\tSay ok.', App().print_help([]))

    def test_exit_codes(self):
        """Each kind of failure has its exit code."""
        self.assertEqual(App.run_application(['ok', 'a']), EXIT_OK)
        with self.assertLogs('application.cliapp', 'ERROR'):
            self.assertEqual(App.run_application(['input']), EXIT_INPUT)
            self.assertEqual(App.run_application(['provider']), EXIT_PROVIDER)
            self.assertEqual(App.run_application(['broken']), EXIT_INTERNAL)
            self.assertEqual(App.run_application(['nonsense']), EXIT_INPUT)
