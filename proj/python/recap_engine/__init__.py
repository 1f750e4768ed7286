"""Python access to the recap engine.

Bundles are passed as document text; results come back as plain Python
values.
"""

import json

from . import _recap_engine as _core

ENGINE_VERSION = _core.ENGINE_VERSION


class BundleError(ValueError):
    """A bundle or command was rejected; ``diagnostics`` lists why."""

    def __init__(self, diagnostics):
        self.diagnostics = diagnostics
        codes = ", ".join(d["code"] for d in diagnostics) or "unknown error"
        super().__init__(codes)


def _call(fn, *args):
    try:
        return fn(*args)
    except ValueError as exc:
        try:
            diagnostics = json.loads(str(exc))
        except json.JSONDecodeError:
            raise exc from None
        raise BundleError(diagnostics) from None


def parse(text):
    """Parse a bundle; returns {"ok", "diagnostics", "bundle"?}."""
    return json.loads(_core.parse(text))


def canonicalize(text):
    return _call(_core.canonicalize, text)


def validate(text):
    """Compliance report: {"artifact", "verdict", "findings"}."""
    return json.loads(_core.validate(text))


def tier(text):
    return json.loads(_call(_core.tier, text))


def scan(text):
    return json.loads(_call(_core.scan, text))


def execute(text, command):
    """Apply one command; returns the new bundle text or raises BundleError."""
    result = json.loads(_call(_core.execute, text, json.dumps(command)))
    if not result["ok"]:
        raise BundleError(result["diagnostics"])
    return result["bundle"]


def render(text, artifact, fmt="md", project=""):
    return _call(_core.render, text, artifact, fmt, project)


def command_names():
    return list(_core.command_names())


__all__ = [
    "ENGINE_VERSION",
    "BundleError",
    "canonicalize",
    "command_names",
    "execute",
    "parse",
    "render",
    "scan",
    "tier",
    "validate",
]
