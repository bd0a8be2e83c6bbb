"""Node count of the propositional translation over a normal-form family."""
import argparse

import numpy as np

from standpoint.corpus import ssnf_family
from standpoint.prop import node_count
from standpoint.translate import translate_formula


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--lo", type=int, default=5)
    ap.add_argument("--hi", type=int, default=50)
    args = ap.parse_args()

    ms = np.arange(args.lo, args.hi + 1)
    counts = np.array([node_count(translate_formula(ssnf_family(int(m)), int(m)).formula)
                       for m in ms])
    for m, c in zip(ms, counts):
        print(f"{m:4d} {c:8d} {c / m**3:.3f}")
    slope, _ = np.polyfit(np.log(ms), np.log(counts), 1)
    print(f"log-log slope {slope:.3f}")


if __name__ == "__main__":
    main()
