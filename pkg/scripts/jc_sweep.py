"""Minimal evolution time, the three bounds and BLP non-Markovianity against gamma0.

    python scripts/jc_sweep.py [out_dir] [jobs]
"""

import sys

from openqsl.cli import main

if __name__ == "__main__":
    out = sys.argv[1] if len(sys.argv) > 1 else "out/jc_sweep"
    jobs = sys.argv[2] if len(sys.argv) > 2 else "1"
    sys.exit(main(["jc-sweep", "--out", out, "--jobs", jobs]))
