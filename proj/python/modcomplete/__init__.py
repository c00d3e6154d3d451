"""Requirement-driven completion of partial state-machine models."""

import json

from ._core import (
    ModcompleteError,
    __version__,
    canonical_model,
    default_kb_text,
    lint_kb,
    match,
    normalize_phrase,
    normalize_signal_phrase,
    parse_corpus,
    parse_requirement,
    tokenize,
)
from ._core import complete as _complete


def load_model(text):
    """Validate a model document and return it as a canonical dict."""
    return json.loads(canonical_model(text))


def complete(model, corpus, kb=None):
    """Complete `model` (JSON text) with the requirements in `corpus`.

    Returns a dict with the completed model, report and trace decoded from
    JSON, plus the requirement diagrams keyed by requirement id.
    """
    out = _complete(model, corpus, kb)
    return {
        "model": json.loads(out["model"]),
        "report": json.loads(out["report"]),
        "trace": json.loads(out["trace"]),
        "diagrams": out["diagrams"],
        "raw": out,
    }


__all__ = [
    "ModcompleteError",
    "__version__",
    "canonical_model",
    "complete",
    "default_kb_text",
    "lint_kb",
    "load_model",
    "match",
    "normalize_phrase",
    "normalize_signal_phrase",
    "parse_corpus",
    "parse_requirement",
    "tokenize",
]
