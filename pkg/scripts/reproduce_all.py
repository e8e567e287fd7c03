"""Run every reproduction check and write the report.

    python3 scripts/reproduce_all.py --out results/report.txt
"""

import argparse
import sys
from pathlib import Path

from opwitness.reproduce import Reproduction, format_report


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", type=Path, default=Path("results/report.txt"))
    parser.add_argument("--samples", type=int, default=100_000)
    parser.add_argument("--shots", type=int, default=1_000_000)
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args()
    checks = Reproduction(samples=args.samples, shots=args.shots, seed=args.seed).run()
    text = format_report(checks)
    args.out.parent.mkdir(parents=True, exist_ok=True)
    args.out.write_text(text, encoding="utf-8")
    sys.stdout.write(text)
    return 1 if any(c.failed for c in checks) else 0


if __name__ == "__main__":
    sys.exit(main())
