"""Numerical diagnostics for parameterized set-valued inclusions."""

import json as _json

from ._svilab import *  # noqa: F401,F403
from ._svilab import _run_config


def run_config(config, seed=None, threads=1):
    """Run a scenario config (dict or JSON text).

    Returns (exit_code, report dict, {csv name: csv text}).
    """
    text = config if isinstance(config, str) else _json.dumps(config)
    code, report, csv = _run_config(text, seed, threads)
    return code, _json.loads(report), csv
