#!/usr/bin/env python3
"""Sweep random decision problems end to end against the exact oracle.

Every trial compiles a fresh random matrix, runs the simulated wet
protocol, reads the gel, and compares the chosen option set with the
exact expected-utility argmax. Prints a summary and any counterexamples
(none are expected; a non-empty list is a bug).
"""

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from dnadecide.soundness import verify_soundness


@dataclass
class SweepConfig:
    trials: int = 500
    seed: int = 0
    cycles: int = 3


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    defaults = SweepConfig()
    ap.add_argument("--count", type=int, default=defaults.trials)
    ap.add_argument("--seed", type=int, default=defaults.seed)
    ap.add_argument("--cycles", type=int, default=defaults.cycles)
    args = ap.parse_args()

    result = verify_soundness(trials=args.count, seed=args.seed, cycles=args.cycles)
    print(result.describe(), end="")
    return 0 if result.ok else 1


if __name__ == "__main__":
    raise SystemExit(main())
