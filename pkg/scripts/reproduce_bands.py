#!/usr/bin/env python3
"""Reproduce the canonical three-option gel from scratch and print it.

Compiles the bundled urn problem (or any problem file you point it at),
simulates the full protocol, and prints the exact band table, an ASCII
gel, and the decision readout. Optionally writes the SVG image.
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from dnadecide.compiler import compile_problem
from dnadecide.formats import load_problem, parse_problem
from dnadecide.gel import band_table, readout, render, run_gel
from dnadecide.wetlab import run_protocol


def bundled_problem():
    from importlib import resources

    text = resources.files("dnadecide").joinpath("data/ballgame.json").read_text()
    return parse_problem(text)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--input", default=None, help="problem JSON (default: bundled)")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--cycles", type=int, default=5)
    ap.add_argument("--svg", default=None, metavar="FILE", help="also write the gel image")
    args = ap.parse_args()

    matrix = load_problem(args.input) if args.input else bundled_problem()
    plan, protocol = compile_problem(matrix, seed=args.seed, pcr_cycles=args.cycles)
    tubes = run_protocol(plan, protocol)
    gel = run_gel(tubes)

    print(band_table(gel))
    print(render(gel, "text"))
    print(readout(gel, plan).describe())
    if args.svg:
        Path(args.svg).write_text(render(gel, "svg"))
        print(f"wrote {args.svg}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
