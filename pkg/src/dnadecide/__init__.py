"""dnadecide: compile decision problems into DNA protocols and simulate them."""

from .compiler import EncodingPlan, ProtocolPlan, compile_problem
from .decision import (
    DecisionMatrix,
    Option,
    Outcome,
    Payoff,
    best_options,
    build_matrix,
    expected_utility,
    to_network,
    validate_matrix,
)
from .formats import dump_problem, load_problem, parse_problem
from .gel import DecisionReport, GelConfig, band_table, readout, render, run_gel
from .soundness import run_end_to_end, verify_soundness
from .wetlab import run_protocol

__all__ = [
    "DecisionMatrix",
    "DecisionReport",
    "EncodingPlan",
    "GelConfig",
    "Option",
    "Outcome",
    "Payoff",
    "ProtocolPlan",
    "band_table",
    "best_options",
    "build_matrix",
    "compile_problem",
    "dump_problem",
    "expected_utility",
    "load_problem",
    "parse_problem",
    "readout",
    "render",
    "run_end_to_end",
    "run_gel",
    "run_protocol",
    "to_network",
    "validate_matrix",
    "verify_soundness",
]

__version__ = "0.1.0"
