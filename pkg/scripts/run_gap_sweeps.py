"""Run every gap sweep on the default grids and write one CSV per report."""

import argparse
import json
import os
import time

from ccdp.harness import report as hr
from ccdp.harness import sweeps as hs
from ccdp.harness.strong import random_strong_specs
from ccdp.rates import PRINTED


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="results", help="output directory")
    ap.add_argument("--format", choices=("csv", "json"), default="csv")
    ap.add_argument("--seed", type=int, default=7, help="seed for the strong-fading specs")
    ap.add_argument("--printed", action="store_true", help="also run the flagged printed forms")
    args = ap.parse_args()
    os.makedirs(args.out, exist_ok=True)

    jobs = [
        lambda: [hs.gap_sweep_wrdp2()],
        lambda: [hs.gap_sweep_wrdpM()],
        lambda: [hs.gap_sweep_wsfd2()],
        lambda: [hs.gap_sweep_strong(random_strong_specs(args.seed, 100)
                                     + random_strong_specs(args.seed, 100, v2=True))],
        lambda: hs.gap_sweep_ccdpes(),
    ]
    if args.printed:
        jobs += [lambda: [hs.gap_sweep_wrdpM(form=PRINTED)], lambda: hs.gap_sweep_ccdpes(form=PRINTED)]

    summaries = []
    for job in jobs:
        t0 = time.perf_counter()
        reports = job()
        dt = time.perf_counter() - t0
        for rep in reports:
            path = os.path.join(args.out, f"{rep.theorem}.{args.format}")
            hr.emit_report(rep, args.format, path)
            s = rep.summary()
            s["seconds"] = round(dt, 3)
            s["file"] = path
            summaries.append(s)
    print(json.dumps(summaries, indent=1))
    failed = [s["theorem"] for s in summaries if s["gating"] and not s["passed"]]
    return 1 if failed else 0


if __name__ == "__main__":
    raise SystemExit(main())
