#!/usr/bin/env python3
"""Run the norm-separation experiment and write a JSON report.

Computes the commuting-shift norm of z1 + z1*z2 on the monomial basis and
the symmetrized-calculus norm on the word basis across a range of word
lengths, together with the monotonicity table and the gap verdict.

Usage:
  python scripts/run_davidson_pitts.py
  python scripts/run_davidson_pitts.py --L-full 12 --N-sym 12 --out results/dp.json
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from herglotzlab.cli import main  # noqa: E402


def parse_args():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--L-full", type=int, default=16)
    ap.add_argument("--N-sym", type=int, default=16)
    ap.add_argument("--out", default="dp_report.json")
    ap.add_argument("--csv", default="")
    return ap.parse_args()


if __name__ == "__main__":
    args = parse_args()
    argv = ["davidson-pitts",
            "--param", f"L_full={args.L_full}",
            "--param", f"N_sym={args.N_sym}",
            "--out", args.out]
    if args.csv:
        argv += ["--csv", args.csv]
    code = main(argv)
    print(f"report written to {args.out} (exit {code})")
    sys.exit(code)
