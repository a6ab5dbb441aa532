"""Python bindings for the tlg toolkit.

Most operations go through :func:`run`, which mirrors the command-line tool and
returns the parsed JSON report.
"""

import json

from . import _core

__all__ = ["TlgError", "commands", "run", "normalize_fan", "box_elements", "check_sl", "digest"]

TlgError = _core.TlgError
commands = _core.commands
box_elements = _core.box_elements
check_sl = _core.check_sl
digest = _core.digest


def _text(fan):
    if isinstance(fan, (dict, list)):
        return json.dumps(fan)
    return fan


def run(command, fan, resolution=None, basis=None, order=3, emit_certificates=False):
    """Run a pipeline command. ``fan`` may be a dict or JSON text.

    Returns ``(exit_code, report, error)`` with ``report`` and ``error`` as dicts
    (``None`` when absent).
    """
    code, report, error = _core.run(
        command,
        _text(fan),
        None if resolution is None else _text(resolution),
        None if basis is None else _text(basis),
        order,
        emit_certificates,
    )
    return code, (json.loads(report) if report else None), (json.loads(error) if error else None)


def normalize_fan(fan):
    return json.loads(_core.normalize_fan(_text(fan)))
