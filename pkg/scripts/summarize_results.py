"""Print a compact mean/RMSE/variance-ratio table from an experiment CSV.

    python scripts/summarize_results.py results/figure1.csv --k-n 100
"""
import argparse
import csv


def main(argv=None) -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("table")
    parser.add_argument("--k-n", type=int, default=None)
    args = parser.parse_args(argv)
    with open(args.table) as fh:
        rows = list(csv.DictReader(line for line in fh if not line.startswith("#")))
    if args.k_n is not None:
        rows = [r for r in rows if int(r["k_n"]) == args.k_n]
    print(f"{'estimator':<20} {'k_n':>4} {'angle':>5} {'truth':>7} {'mean':>7} {'rmse':>7} {'var_ratio':>9} {'fail':>5}")
    for r in rows:
        ratio = f"{float(r['variance_ratio']):.3f}" if r["variance_ratio"] else "-"
        print(f"{r['estimator']:<20} {r['k_n']:>4} {r['angle_index']:>5} {float(r['theta_true']):>7.3f} "
              f"{float(r['mean']):>7.3f} {float(r['rmse']):>7.3f} {ratio:>9} {r['failures']:>5}")


if __name__ == "__main__":
    main()
