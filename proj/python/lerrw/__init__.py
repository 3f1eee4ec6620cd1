"""Python bindings for the lerrw laboratory."""

import json

from ._core import *  # noqa: F401,F403
from ._core import __version__, _run_experiment


def run_experiment(config, threads=1):
    """Run an experiment described by a config dict.

    Returns ``(csv_text, summary)`` where ``summary`` is the parsed JSON
    summary the command-line tool would write.
    """
    csv_text, summary = _run_experiment(json.dumps(config), threads)
    return csv_text, json.loads(summary)
