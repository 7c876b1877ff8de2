"""Randomised check of the matrix inequalities behind the bounds.

    python scripts/ineq_campaign.py [trials] [seed]
"""

import sys

from openqsl.inequalities import run_campaign

if __name__ == "__main__":
    trials = int(sys.argv[1]) if len(sys.argv) > 1 else 500
    seed = int(sys.argv[2]) if len(sys.argv) > 2 else 0
    report = run_campaign(trials, 8, seed)
    print(report.format(), end="")
    sys.exit(3 if report.violations else 0)
