"""Command Line Application
===========================
Results go to stdout, logging to stderr. The exit code tells what went
wrong: 2 for bad input, 3 for a failing model provider, 4 for anything else.
"""
import logging
import sys
from os.path import abspath, dirname
from unittest import TestLoader, TextTestRunner

from cli.cli import CLI
from errors import InputError, ProviderError
from .logs import configure_logging

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_FAILED, EXIT_INPUT, EXIT_PROVIDER, EXIT_INTERNAL = 0, 1, 2, 3, 4
ROOT = dirname(dirname(abspath(__file__)))


class CLIApplication:
    """An object that runs commands passed from an external invocation of the program.
    Commands return the text to print or an exit code.
    """

    def __init__(self):
        self.cli = CLI(self.description, self.commands())

    @property
    def description(self):
        return (type(self).__doc__ or '').strip().split('\n')[0]

    @classmethod
    def commands(cls):
        """Return the ``_cmds`` of this class and its bases, subclasses winning."""
        cmds = {}
        for klass in reversed(cls.__mro__):
            cmds.update(vars(klass).get('_cmds', {}))
        return cmds

    def print_help(self, args):
        """Print help / usage message."""
        return str(self.cli)

    def run_tests(self, args):
        """Run the Test Suite (-t 2 for verbose)."""
        verbosity = int(args[0]) if args and args[0].isdigit() else 1
        suite = TestLoader().discover(ROOT, 'tests.py', ROOT)
        result = TextTestRunner(verbosity=verbosity).run(suite)
        return EXIT_OK if result.wasSuccessful() else EXIT_FAILED

    _cmds = {
        ('-h', '--help'): print_help,
        ('-t', '--test'): run_tests,
    }

    @classmethod
    def new_application(cls):
        """This method can be subclassed to return a alternative application
        object when testing. (Useful for mocking).
        """
        return cls()

    @classmethod
    def run_application(cls, argv=None):
        """Run the application using `argv` (default: the command line) and
        return the exit code. This is the main entry point to the application.
        """
        configure_logging('WARNING')
        app = cls.new_application()
        try:
            result = app.cli(app, sys.argv[1:] if argv is None else argv)
        except SystemExit as exit:
            return exit.code if isinstance(exit.code, int) else EXIT_INPUT
        except InputError as error:
            logger.error('%s', error)
            return EXIT_INPUT
        except ProviderError as error:
            logger.error('%s', error)
            return EXIT_PROVIDER
        except Exception:
            logger.exception('internal error')
            return EXIT_INTERNAL
        if isinstance(result, str):
            print(result)
            return EXIT_OK
        return int(result or EXIT_OK)
