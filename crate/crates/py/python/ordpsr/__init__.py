"""Python bindings for ordpsr.

Reports come back as JSON strings; ``run_report`` and friends decode them.
"""

import json

from ._ordpsr import (
    BudgetExceeded,
    InputError,
    InvariantError,
    OrdpsrError,
    UnsupportedError,
    __version__,
    audit,
    corpus,
    lenstra,
    render_text,
    run,
)


def run_report(command, scenario, seed=None, budget=None):
    """``run`` with the report decoded into a dict."""
    return json.loads(run(command, scenario, seed=seed, budget=budget))


__all__ = [
    "BudgetExceeded",
    "InputError",
    "InvariantError",
    "OrdpsrError",
    "UnsupportedError",
    "__version__",
    "audit",
    "corpus",
    "lenstra",
    "render_text",
    "run",
    "run_report",
]
