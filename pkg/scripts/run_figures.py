"""Run the shipped Monte Carlo studies and write their result tables.

    python scripts/run_figures.py                 # all four configs
    python scripts/run_figures.py figure1 figure3 --workers 2
"""
import argparse
import sys
import time
from pathlib import Path

from extremalindex.cli import main as cli_main

ROOT = Path(__file__).resolve().parent.parent
CONFIGS = ROOT / "configs"


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("names", nargs="*", default=["figure1", "figure2", "figure3", "figure4"])
    parser.add_argument("--workers", default="1")
    parser.add_argument("--outdir", default=str(ROOT / "results"))
    args = parser.parse_args(argv)
    status = 0
    for name in args.names:
        out = Path(args.outdir) / f"{name}.csv"
        start = time.perf_counter()
        code = cli_main(["experiment", str(CONFIGS / f"{name}.json"), "--out", str(out), "--workers", args.workers])
        print(f"{name}: exit {code}, {time.perf_counter() - start:.1f}s -> {out}", file=sys.stderr)
        status = status or code
    return status


if __name__ == "__main__":
    sys.exit(main())
