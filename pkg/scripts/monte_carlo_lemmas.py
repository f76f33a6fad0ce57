"""Monte Carlo checks of the channel reductions for several seeds and state structures."""

import argparse
import json

from ccdp.channel_model import cov_ccdp_es, cov_wrdp, cov_wsfd
from ccdp.harness.lemmas import lemma_validation


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=100_000)
    ap.add_argument("--seeds", type=int, nargs="+", default=[7, 8, 9])
    args = ap.parse_args()
    cases = {
        "independent M=3": (3, cov_wrdp(3)),
        "scaled a=[1, 2, -3]": (3, cov_wsfd([1.0, 2.0, -3.0])),
        "equi-correlated rho=0.6 M=4": (4, cov_ccdp_es(4, 0.6)),
    }
    rows, ok = [], True
    for name, (M, sigma) in cases.items():
        for seed in args.seeds:
            rep = lemma_validation(seed=seed, n=args.n, M=M, sigma_s=sigma)
            ok &= rep.passed
            rows.append({"case": name, "seed": seed, "passed": rep.passed,
                         "max_z": max(c.max_z for c in rep.checks)})
    print(json.dumps(rows, indent=1))
    return 0 if ok else 1


if __name__ == "__main__":
    raise SystemExit(main())
