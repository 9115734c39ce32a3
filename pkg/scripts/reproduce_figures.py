"""Write CSV data and sidecar JSON for every figure preset."""
import argparse
import time
from pathlib import Path

from resonance_mirror.sweep import EVALUATORS, PRESETS, run_figure


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--outdir", type=Path, default=Path("figures"))
    parser.add_argument("--only", nargs="+", choices=PRESETS, default=list(PRESETS))
    parser.add_argument("--evaluator", choices=EVALUATORS, default="closed_form")
    parser.add_argument("--workers", type=int, default=1)
    args = parser.parse_args()

    for name in args.only:
        t0 = time.perf_counter()
        curves = run_figure(name, outdir=args.outdir, evaluator=args.evaluator,
                            workers=args.workers)
        points = sum(len(rows) for rows in curves.values())
        print(f"{name:7s} {len(curves)} curves, {points:5d} rows, "
              f"{time.perf_counter() - t0:6.2f} s")
    print(f"written to {args.outdir}/")


if __name__ == "__main__":
    main()
