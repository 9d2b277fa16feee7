"""Reading and writing decision problems as JSON.

A problem file looks like:

    {
      "outcomes": [{"label": "red", "probability": "4/9"}, ...],
      "options": [{"label": "option-1", "favorable": ["red", "black"]}, ...],
      "utilities": {"favorable": "1", "unfavorable": "0"}
    }

Probabilities and utilities are exact rationals written as strings
("4/9", "1", "0.5" is not accepted). The "utilities" block is optional
and defaults to 1 for favorable and 0 for unfavorable outcomes.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .decision import DecisionMatrix, build_matrix, validate_matrix


class ProblemFormatError(ValueError):
    """The problem file is malformed; the message names the offending field."""


def _fraction(raw, where: str) -> Fraction:
    if not isinstance(raw, str):
        raise ProblemFormatError(
            f"{where}: expected a rational written as a string, got {type(raw).__name__}"
        )
    try:
        return Fraction(raw)
    except ZeroDivisionError:
        raise ProblemFormatError(f"{where}: denominator is zero in {raw!r}") from None
    except ValueError:
        raise ProblemFormatError(f"{where}: cannot parse {raw!r} as a rational") from None


def _string(raw, where: str) -> str:
    if not isinstance(raw, str) or not raw:
        raise ProblemFormatError(f"{where}: expected a non-empty string")
    return raw


def parse_problem(text: str) -> DecisionMatrix:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemFormatError(f"not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ProblemFormatError("top level: expected an object")
    for key in ("outcomes", "options"):
        if key not in doc:
            raise ProblemFormatError(f"top level: missing required key {key!r}")
        if not isinstance(doc[key], list) or not doc[key]:
            raise ProblemFormatError(f"{key}: expected a non-empty list")
    stray = set(doc) - {"outcomes", "options", "utilities"}
    if stray:
        raise ProblemFormatError(f"top level: unknown key {sorted(stray)[0]!r}")

    outcomes = []
    for i, entry in enumerate(doc["outcomes"]):
        if not isinstance(entry, dict):
            raise ProblemFormatError(f"outcomes[{i}]: expected an object")
        label = _string(entry.get("label"), f"outcomes[{i}].label")
        prob = _fraction(entry.get("probability"), f"outcomes[{i}].probability")
        outcomes.append((label, prob))

    options = []
    for i, entry in enumerate(doc["options"]):
        if not isinstance(entry, dict):
            raise ProblemFormatError(f"options[{i}]: expected an object")
        label = _string(entry.get("label"), f"options[{i}].label")
        favorable = entry.get("favorable")
        if not isinstance(favorable, list):
            raise ProblemFormatError(f"options[{i}].favorable: expected a list")
        favorable = [
            _string(f, f"options[{i}].favorable[{j}]") for j, f in enumerate(favorable)
        ]
        options.append((label, favorable))

    utilities = doc.get("utilities", {"favorable": "1", "unfavorable": "0"})
    if not isinstance(utilities, dict) or set(utilities) != {"favorable", "unfavorable"}:
        raise ProblemFormatError(
            "utilities: expected exactly the keys 'favorable' and 'unfavorable'"
        )
    u_fav = _fraction(utilities["favorable"], "utilities.favorable")
    u_unf = _fraction(utilities["unfavorable"], "utilities.unfavorable")

    matrix = build_matrix(outcomes, options, u_favorable=u_fav, u_unfavorable=u_unf)
    return validate_matrix(matrix)


def load_problem(path: str | Path) -> DecisionMatrix:
    return parse_problem(Path(path).read_text())


def dump_problem(matrix: DecisionMatrix) -> str:
    doc = {
        "outcomes": [
            {"label": o.label, "probability": str(o.probability)}
            for o in matrix.outcomes
        ],
        "options": [
            {
                "label": opt.label,
                "favorable": [
                    matrix.outcomes[i].label for i in opt.favorable_indices()
                ],
            }
            for opt in matrix.options
        ],
        "utilities": {
            "favorable": str(matrix.u_favorable),
            "unfavorable": str(matrix.u_unfavorable),
        },
    }
    return json.dumps(doc, indent=2) + "\n"
