from .cli import CLI, UnknownCommand
