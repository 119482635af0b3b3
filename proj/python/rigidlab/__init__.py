"""Matrix rigidity experiments backed by the C++ rigidlab library."""

import json as _json

from ._rigidlab import *  # noqa: F401,F403
from ._rigidlab import __version__, run_experiment as _run_experiment


def run(subcommand, **config):
    """Runs one experiment and returns the rendered CSV or JSON text."""
    config["subcommand"] = subcommand
    return _run_experiment(_json.dumps(config))
