"""Prompt Templates
===================
Prompts live in plain-text files in each package's ``prompts`` directory
and use ``{placeholder}`` substitution. Setting
:attr:`PromptTemplate.override_dir` makes files of the same name there win.
"""
import os
import re

from errors import InputError

PLACEHOLDER = re.compile(r'\{(\w+)\}')


class PromptTemplate:
    """A prompt text with ``{name}`` placeholders."""

    override_dir = None
    """A directory of replacement template files (the PROMPT_DIR option)."""

    def __init__(self, name, text):
        self.name, self.text = name, text

    @property
    def placeholders(self):
        return sorted(set(PLACEHOLDER.findall(self.text)))

    @classmethod
    def load(cls, directory, name):
        """Return the template ``name.txt`` from `directory` (or the override dir)."""
        filename = name + '.txt'
        path = os.path.join(directory, filename)
        if cls.override_dir and os.path.exists(os.path.join(cls.override_dir, filename)):
            path = os.path.join(cls.override_dir, filename)
        try:
            with open(path, encoding='utf-8') as fp:
                return cls(name, fp.read().rstrip('\n'))
        except OSError as error:
            raise InputError('prompt template {}: {}'.format(name, error)) from None

    def format(self, **fields):
        """Return the text with every placeholder replaced by ``fields[name]``."""
        def substitute(match):
            try:
                return str(fields[match.group(1)])
            except KeyError:
                raise InputError('prompt template {} needs {}'.format(self.name, match.group(1))) from None
        return PLACEHOLDER.sub(substitute, self.text)


def templates(package_file):
    """Return a loader for the ``prompts`` directory next to `package_file`."""
    directory = os.path.join(os.path.dirname(os.path.abspath(package_file)), 'prompts')
    return lambda name: PromptTemplate.load(directory, name)
