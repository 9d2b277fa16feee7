"""Exact expected-utility core for decisions under risk.

A problem is a matrix: mutually exclusive chance outcomes with rational
probabilities, options that classify every outcome as favorable or
unfavorable, and a two-level utility assignment. All arithmetic is done
with `fractions.Fraction`; floats never enter the ranking.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction


class MatrixError(ValueError):
    """A decision matrix violates one of its invariants."""


class EmptyOptionsError(MatrixError):
    pass


class ProbabilitySumError(MatrixError):
    pass


class DuplicateLabelError(MatrixError):
    pass


class MissingPayoffClassError(MatrixError):
    pass


class UtilityOrderError(MatrixError):
    pass


class Payoff(Enum):
    FAVORABLE = "favorable"
    UNFAVORABLE = "unfavorable"


@dataclass(frozen=True)
class Outcome:
    label: str
    probability: Fraction


@dataclass(frozen=True)
class Option:
    """One course of action, with a payoff class per outcome (matrix order)."""

    label: str
    payoffs: tuple[Payoff, ...]

    def favorable_indices(self) -> tuple[int, ...]:
        return tuple(j for j, p in enumerate(self.payoffs) if p is Payoff.FAVORABLE)


@dataclass(frozen=True)
class DecisionMatrix:
    outcomes: tuple[Outcome, ...]
    options: tuple[Option, ...]
    u_favorable: Fraction = Fraction(1)
    u_unfavorable: Fraction = Fraction(0)

    @property
    def probabilities(self) -> tuple[Fraction, ...]:
        return tuple(o.probability for o in self.outcomes)

    def utility(self, payoff: Payoff) -> Fraction:
        return self.u_favorable if payoff is Payoff.FAVORABLE else self.u_unfavorable


def build_matrix(
    outcomes: list[tuple[str, Fraction]],
    options: list[tuple[str, list[str]]],
    u_favorable: Fraction = Fraction(1),
    u_unfavorable: Fraction = Fraction(0),
) -> DecisionMatrix:
    """Assemble a matrix from labels; each option lists its favorable outcomes."""
    outs = tuple(Outcome(lbl, Fraction(p)) for lbl, p in outcomes)
    labels = [o.label for o in outs]
    opts = []
    for lbl, favorable in options:
        unknown = [f for f in favorable if f not in labels]
        if unknown:
            raise MatrixError(f"option {lbl!r} marks unknown outcome {unknown[0]!r} favorable")
        payoffs = tuple(
            Payoff.FAVORABLE if o in favorable else Payoff.UNFAVORABLE for o in labels
        )
        opts.append(Option(lbl, payoffs))
    return validate_matrix(
        DecisionMatrix(outs, tuple(opts), Fraction(u_favorable), Fraction(u_unfavorable))
    )


def validate_matrix(matrix: DecisionMatrix) -> DecisionMatrix:
    """Check all structural invariants; return the matrix unchanged if sound."""
    if not matrix.options:
        raise EmptyOptionsError("a decision needs at least one option")
    for out in matrix.outcomes:
        if not 0 <= out.probability <= 1:
            raise MatrixError(f"probability of outcome {out.label!r} is outside [0, 1]")
    total = sum((o.probability for o in matrix.outcomes), Fraction(0))
    if total != 1:
        raise ProbabilitySumError(f"outcome probabilities sum to {total}, expected 1")
    for family, labels in (
        ("outcome", [o.label for o in matrix.outcomes]),
        ("option", [o.label for o in matrix.options]),
    ):
        seen: set[str] = set()
        for lbl in labels:
            if lbl in seen:
                raise DuplicateLabelError(f"duplicate {family} label {lbl!r}")
            seen.add(lbl)
    for opt in matrix.options:
        if len(opt.payoffs) != len(matrix.outcomes):
            raise MissingPayoffClassError(
                f"option {opt.label!r} classifies {len(opt.payoffs)} outcomes, "
                f"expected {len(matrix.outcomes)}"
            )
    if matrix.u_favorable < matrix.u_unfavorable:
        raise UtilityOrderError(
            "favorable utility must be at least the unfavorable utility"
        )
    return matrix


def expected_utility(matrix: DecisionMatrix, option_index: int) -> Fraction:
    """Probability-weighted utility of one option, as an exact rational."""
    opt = matrix.options[option_index]
    total = Fraction(0)
    for out, payoff in zip(matrix.outcomes, opt.payoffs):
        total += out.probability * matrix.utility(payoff)
    return total


def best_options(matrix: DecisionMatrix) -> list[int]:
    """Indices of all maximal-expected-utility options, ascending (ties kept)."""
    scores = [expected_utility(matrix, i) for i in range(len(matrix.options))]
    top = max(scores)
    return [i for i, s in enumerate(scores) if s == top]


# -- network view -------------------------------------------------------------
#
# The matrix unrolls into a single-source, single-sink DAG whose layers are
# choice -> option -> chance -> probability -> utility -> termination.
# Probability and utility nodes are shared across options, so the graph has
# one root-to-sink path per (option, outcome) pair.

ROLE_CHOICE = "choice"
ROLE_TERM = "term"


def _slug(label: str) -> str:
    return "_".join(label.split())


def role_option(label: str) -> str:
    return f"option:{_slug(label)}"


def role_chance(option_label: str, outcome_label: str) -> str:
    return f"chance:{_slug(option_label)}:{_slug(outcome_label)}"


def role_prob(outcome_label: str) -> str:
    return f"prob:{_slug(outcome_label)}"


def role_util(outcome_label: str) -> str:
    return f"util:{_slug(outcome_label)}"


@dataclass(frozen=True)
class DecisionNetwork:
    nodes: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]
    source: str = ROLE_CHOICE
    sink: str = ROLE_TERM

    def successors(self, node: str) -> list[str]:
        return [b for a, b in self.edges if a == node]

    def paths(self) -> list[tuple[str, ...]]:
        """All source-to-sink paths, in deterministic edge order."""
        found: list[tuple[str, ...]] = []
        stack: list[tuple[str, ...]] = [(self.source,)]
        while stack:
            path = stack.pop()
            if path[-1] == self.sink:
                found.append(path)
                continue
            for nxt in reversed(self.successors(path[-1])):
                stack.append(path + (nxt,))
        return found


def to_network(matrix: DecisionMatrix) -> DecisionNetwork:
    nodes = [ROLE_CHOICE]
    edges: list[tuple[str, str]] = []
    for opt in matrix.options:
        nodes.append(role_option(opt.label))
        edges.append((ROLE_CHOICE, role_option(opt.label)))
    for opt in matrix.options:
        for out in matrix.outcomes:
            nodes.append(role_chance(opt.label, out.label))
            edges.append((role_option(opt.label), role_chance(opt.label, out.label)))
            edges.append((role_chance(opt.label, out.label), role_prob(out.label)))
    for out in matrix.outcomes:
        nodes.append(role_prob(out.label))
        edges.append((role_prob(out.label), role_util(out.label)))
    for out in matrix.outcomes:
        nodes.append(role_util(out.label))
        edges.append((role_util(out.label), ROLE_TERM))
    nodes.append(ROLE_TERM)
    return DecisionNetwork(tuple(nodes), tuple(edges))
