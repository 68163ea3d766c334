#!/usr/bin/env python3
"""Run the class-duality sweeps and the commuting-calculus identity check.

Samples (positive-real-part, boundary-measure) and (row-contractive,
commuting) generator pairs, evaluates the minimum of Re Q_r over the
standard radius grid through the exact reductions, and reports the worst
identity residual.

Usage:
  python scripts/run_duality.py --trials 200 --seed 42 --out results/duality.json
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from herglotzlab.cli import main  # noqa: E402


def parse_args():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--d", type=int, default=2)
    ap.add_argument("--out", default="duality_report.json")
    return ap.parse_args()


if __name__ == "__main__":
    args = parse_args()
    code = main(["duality",
                 "--param", f"trials={args.trials}",
                 "--param", f"d={args.d}",
                 "--seed", str(args.seed),
                 "--out", args.out])
    print(f"report written to {args.out} (exit {code})")
    sys.exit(code)
