"""Lorentzian curve frames and relatively normal-slant helix analysis."""

import json

from ._core import (
    CSV_HEADER,
    RnshelixError,
    __version__,
    canonical_form,
    causal_character,
    evaluate,
    lorentz_angle,
    mcross,
    mdot,
    mnorm,
    run_document,
)

__all__ = [
    "CSV_HEADER",
    "RnshelixError",
    "__version__",
    "analyze",
    "canonical_form",
    "causal_character",
    "evaluate",
    "lorentz_angle",
    "mcross",
    "mdot",
    "mnorm",
    "run_document",
]


def analyze(document, mode="analyze", **settings):
    """Run a document given as a dict or JSON string and return (report dict, csv text)."""
    text = document if isinstance(document, str) else json.dumps(document)
    report, csv, _rows = run_document(text, mode, **settings)
    return json.loads(report), csv
