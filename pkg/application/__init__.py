from .cliapp import EXIT_FAILED, EXIT_INPUT, EXIT_INTERNAL, EXIT_OK, EXIT_PROVIDER, CLIApplication
from .config import PREFIX, Config, options
from .logs import FORMAT, configure_logging
