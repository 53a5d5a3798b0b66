"""Python bindings for the tfgen T-function generator toolkit."""

import json

from . import _core
from ._core import (
    BudgetError,
    TfgenError,
    check_expression,
    count_transitive,
    example_kinds,
    linear_complexity,
    pack_words,
    q1_pass,
)

__all__ = [
    "BudgetError",
    "TfgenError",
    "analyze",
    "check_expression",
    "count_transitive",
    "example",
    "example_kinds",
    "generate",
    "linear_complexity",
    "measure_period",
    "pack_words",
    "q1_pass",
    "states",
    "validate",
]


def _spec_text(spec):
    return spec if isinstance(spec, str) else json.dumps(spec)


def example(kind, **params):
    """Build a named example; returns a dict with spec, validation and note."""
    return json.loads(_core.example_json(kind, json.dumps(params) if params else ""))


def validate(spec):
    return json.loads(_core.validate_json(_spec_text(spec)))


def generate(spec, count):
    return _core.generate(_spec_text(spec), count)


def states(spec, count):
    return _core.states(_spec_text(spec), count)


def measure_period(spec):
    return _core.measure_period(_spec_text(spec))


def analyze(words, word_bits, full_period=False, lc=False, kdist=0, q1=False):
    return json.loads(_core.analyze_json(list(words), word_bits, full_period, lc, kdist, q1))
