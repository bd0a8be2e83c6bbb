"""Compare the SAT pipeline with the exhaustive oracle on the formula corpus."""
import argparse
import time

from standpoint.corpus import core_corpus
from standpoint.pipeline import decide_global
from standpoint.semantics import sat_oracle
from standpoint.syntax import size


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--height", type=int, default=3)
    ap.add_argument("--full-bound", action="store_true",
                    help="translate with n = |Sub| instead of the witness bound")
    args = ap.parse_args()

    corpus = core_corpus(args.height)
    t_oracle = t_pipe = 0.0
    sat = disagree = 0
    for phi in corpus:
        t0 = time.perf_counter()
        expected = sat_oracle(phi) is not None
        t1 = time.perf_counter()
        got = decide_global(phi, n=size(phi) if args.full_bound else None).satisfiable
        t2 = time.perf_counter()
        t_oracle += t1 - t0
        t_pipe += t2 - t1
        sat += expected
        if got != expected:
            disagree += 1
            print("disagreement:", phi)
    print(f"formulas {len(corpus)}  satisfiable {sat}  disagreements {disagree}")
    print(f"oracle {t_oracle:.1f}s  pipeline {t_pipe:.1f}s")


if __name__ == "__main__":
    main()
