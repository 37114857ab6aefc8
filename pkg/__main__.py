import sys

from cli.commands import Dalk

if __name__ == '__main__':
    sys.exit(Dalk.run_application())
