"""Spin-dot ensembles for both initial states at the default settings (ten seeds each).

    python scripts/dot_ensemble.py [out_dir] [jobs]

Takes roughly a minute per ten-seed ensemble on one core.
"""

import sys

from openqsl.cli import main

if __name__ == "__main__":
    out = sys.argv[1] if len(sys.argv) > 1 else "out/dot"
    jobs = sys.argv[2] if len(sys.argv) > 2 else "1"
    for kind in ("excited", "coherent"):
        rc = main(["dot-run", "--kind", kind, "--out", f"{out}/{kind}", "--jobs", jobs])
        if rc:
            sys.exit(rc)
