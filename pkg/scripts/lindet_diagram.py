"""Print bit-level diagrams of the deterministic model for a few scaled-state settings."""

import argparse

from ccdp import bounds_wsfd as ws
from ccdp import lindet as ld

CASES = [
    (3.0, 4.0, [0.0, 1.0, 2.0]),
    (3.0, 4.0, [0.0, 1.0, 1.1]),
    (15.0, 8.0, [0.0, 1.0, 16.0, 256.0]),
    (1023.0, 2.0, [0.0, 1.0, 40.0]),
]


def show(P, c, a):
    spec = ld.lindet_params(P, c, a)
    ov = ld.lindet_overlap(spec)
    strong = ws.strong_fading_check(P, c, a) if a[0] == 0.0 and P >= 1.0 else None
    print(f"P={P:g} c={c:g} a={a}")
    print(ld.lindet_diagram(spec), end="")
    print(f"  windows disjoint: {ov.disjoint}   strong fading conditions: "
          f"{'n/a' if strong is None else bool(strong)}\n")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--P", type=float)
    ap.add_argument("--c", type=float)
    ap.add_argument("--a", help="comma-separated scalings")
    args = ap.parse_args()
    if args.P is not None:
        show(args.P, args.c, [float(x) for x in args.a.split(",")])
        return
    for case in CASES:
        show(*case)


if __name__ == "__main__":
    main()
