"""Run the soundness fuzzer for every axiom form and tabulate failures per schema."""

import argparse
import json
import sys

from attdel.axioms import FORMS, SCHEMAS, soundness_fuzz


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--json", help="write the full reports here")
    args = ap.parse_args()
    reports = {}
    print("form," + ",".join(SCHEMAS))
    for form in FORMS:
        rep = soundness_fuzz(args.trials, args.seed, form=form)
        reports[form] = rep.to_json()
        print(form + "," + ",".join(str(len(rep.failures_for(s))) for s in SCHEMAS))
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(reports, fh, indent=2)
    return 0


if __name__ == "__main__":
    sys.exit(main())
