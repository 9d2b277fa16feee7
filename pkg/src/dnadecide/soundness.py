"""End-to-end soundness sweeps against the exact expected-utility oracle.

Each trial draws a random decision problem, pushes it through the whole
pipeline (compile, simulate, image, read out), and checks that the set
of options chosen from the gel equals the exact argmax set. Probabilities
are built from small integer weights so every denominator stays modest
and every comparison stays exact.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .compiler import EncodingPlan, ProtocolPlan, compile_problem
from .decision import DecisionMatrix, best_options, build_matrix
from .formats import dump_problem
from .gel import DecisionReport, GelRun, readout, run_gel
from .strands import EXTENDED_BLUNT_CUTTERS
from .wetlab import run_protocol


def random_matrix(
    rng: random.Random,
    max_options: int = 5,
    max_outcomes: int = 5,
    max_weight: int = 12,
) -> DecisionMatrix:
    """A random problem with exact probabilities and binary utilities.

    Outcome probabilities are integer weights over a common denominator
    (at most `max_outcomes * max_weight`, i.e. 60 by default), every
    option marks a non-empty proper-or-full subset of outcomes favorable.
    """
    n_out = rng.randint(2, max_outcomes)
    n_opt = rng.randint(2, max_options)
    weights = [rng.randint(1, max_weight) for _ in range(n_out)]
    total = sum(weights)
    outcomes = [(f"outcome-{i + 1}", Fraction(w, total)) for i, w in enumerate(weights)]
    labels = [lbl for lbl, _ in outcomes]
    options = []
    for j in range(n_opt):
        picked = [lbl for lbl in labels if rng.random() < 0.5]
        if not picked:
            picked = [rng.choice(labels)]
        options.append((f"option-{j + 1}", picked))
    return build_matrix(outcomes, options)


def run_end_to_end(
    matrix: DecisionMatrix,
    seed: int = 0,
    cycles: int = 5,
    use_fixture: bool = False,
) -> tuple[DecisionReport, EncodingPlan, ProtocolPlan, GelRun]:
    """Compile, simulate, image, and read out one problem."""
    plan, protocol = compile_problem(
        matrix,
        seed=seed,
        library=EXTENDED_BLUNT_CUTTERS,
        use_fixture=use_fixture,
        pcr_cycles=cycles,
    )
    tubes = run_protocol(plan, protocol)
    run = run_gel(tubes)
    return readout(run, plan), plan, protocol, run


@dataclass
class SoundnessResult:
    trials: int
    agreements: int
    elapsed: float
    failures: list[tuple[int, str, tuple[int, ...], tuple[int, ...]]] = field(
        default_factory=list
    )

    @property
    def ok(self) -> bool:
        # zero trials pass vacuously; a sweep only fails on a counterexample
        return self.agreements == self.trials

    def describe(self) -> str:
        lines = [
            f"soundness sweep: {self.agreements}/{self.trials} agree "
            f"with the exact oracle ({self.elapsed:.2f}s)"
        ]
        for index, problem, chosen, oracle in self.failures:
            lines.append(f"  trial {index}: chose {chosen}, oracle says {oracle}")
            lines.append("    " + problem.replace("\n", "\n    "))
        return "\n".join(lines) + "\n"


def verify_soundness(
    trials: int = 200, seed: int = 0, cycles: int = 3
) -> SoundnessResult:
    rng = random.Random(seed)
    started = time.perf_counter()
    agreements = 0
    failures = []
    for index in range(trials):
        matrix = random_matrix(rng)
        report, _, _, _ = run_end_to_end(matrix, seed=index, cycles=cycles)
        if report.chosen == tuple(best_options(matrix)):
            agreements += 1
        else:
            failures.append(
                (index, dump_problem(matrix), report.chosen, tuple(best_options(matrix)))
            )
    return SoundnessResult(trials, agreements, time.perf_counter() - started, failures)
