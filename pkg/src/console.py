"""
Console logging
Bracketed status tags ([OK], [INFO], [WARNING], [ERROR]) on stderr, so that
stdout stays reserved for JSON/CSV reports.
"""

import logging
import sys

OK = 25
logging.addLevelName(OK, "OK")


def ok(logger, msg, *args):
    """Log a completion line at the OK level."""
    logger.log(OK, msg, *args)


def setup_logging(verbose=False):
    root = logging.getLogger()
    for handler in list(root.handlers):
        root.removeHandler(handler)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("[%(levelname)s] %(message)s"))
    root.addHandler(handler)
    root.setLevel(logging.DEBUG if verbose else logging.INFO)


def progress_enabled():
    return sys.stderr.isatty()
