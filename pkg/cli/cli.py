"""Command Line Interface
=========================
Dispatches the first command-line word to the command registered for it.
"""
from errors import InputError


def doc(func):
    return (func.__doc__ or '').strip().split('\n')[0]


def lines(*args):
    return '\n'.join(args)


class UnknownCommand(InputError):
    """The command line names no registered command."""
    def __init__(self, cmd):
        super().__init__(lines('Unknown command: %s' % cmd, 'Try --help for more information.'))


class CLI:
    """Helper class to implement a Command Line Interface."""

    def __init__(self, description, cmds=None):
        self.description = description
        self.cmds = {}
        self.add(cmds or {})

    def add(self, cmds):
        """Add to the commands: a dict of name tuples to functions of (app, args)."""
        self.cmds.update(cmds)

    @property
    def commands(self):
        return sorted(self.cmds.items(), key=lambda item: item[0][-1].lstrip('-'))

    @property
    def options(self):
        return ['{}\t{}'.format(' '.join(names), doc(func)) for names, func in self.commands]

    def __str__(self):
        """Return help / usage message."""
        return lines(self.description, '', 'Usage: python . <command> [options]', '', 'Commands:', '',
                     *self.options, '', 'Run a command with --help for its options.')

    def find(self, cmd):
        for names, func in self.cmds.items():
            if cmd in names:
                return func
        raise UnknownCommand(cmd)

    def execute(self, app, cmd, args):
        """Call `cmd` passing `args`."""
        return self.find(cmd)(app or self, list(args))

    def __call__(self, app, argv, default='--help'):
        """Run the command named by the first of `argv` with the rest."""
        argv = list(argv)
        return self.execute(app, argv[0] if argv else default, argv[1:])
