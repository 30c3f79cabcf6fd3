"""Print the size/event-count table for both generator families as CSV."""

import argparse
import sys

from attdel.syntactic_events import succinctness_report


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--g-max", type=int, default=8)
    ap.add_argument("--gprime-max", type=int, default=12)
    args = ap.parse_args()
    print("family,n,size,events,millis")
    for family, n_max in (("G", args.g_max), ("Gprime", args.gprime_max)):
        rep = succinctness_report(n_max, family)
        for r in rep.rows:
            print(f"{family},{r.n},{r.size},{r.events},{r.millis:.1f}")
        print(f"# {family}: size = {rep.slope:g}*n {rep.intercept:+g}, max residual {rep.max_residual:g}",
              file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
