"""
Configuration Module

Runtime settings for the CQA toolkit. Every value has a module-level default
that can be overridden through the environment.
"""

import logging
import os
import sys
from typing import Optional

DEFAULT_MAX_REPAIRS = int(os.environ.get("CQA_MAX_REPAIRS", 1 << 20))
DEFAULT_SEARCH_NODE_CAP = int(os.environ.get("CQA_SEARCH_NODE_CAP", 5_000_000))
DEFAULT_SEED = int(os.environ.get("CQA_SEED", 0))

# Reserved namespaces for generated names; user input must not use them.
FRESH_PREFIX = "__g"
EXTENSION_RELATION = "__ext_N"
EXTENSION_CONSTANT = "__ext_d"

LOG_FORMAT = "%(asctime)s %(levelname)-7s %(name)s: %(message)s"
LOG_LEVEL = os.environ.get("CQA_LOG_LEVEL", "WARNING")


def configure_logging(level: Optional[str] = None) -> None:
    """
    Install a single stderr handler on the root logger.

    Args:
        level (Optional[str]): Level name such as "DEBUG"; defaults to LOG_LEVEL
    """
    name = (level or LOG_LEVEL).upper()
    numeric = logging.getLevelName(name)
    if not isinstance(numeric, int):
        raise ValueError(f"unknown log level: {level}")

    root = logging.getLogger()
    for handler in list(root.handlers):
        root.removeHandler(handler)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    root.addHandler(handler)
    root.setLevel(numeric)
