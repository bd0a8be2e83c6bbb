"""Labelling steps of the model checker against |Sub|^2 on random inputs."""
import argparse
import random

from standpoint.corpus import random_formula, random_structure
from standpoint.semantics import model_check
from standpoint.syntax import size


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-size", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    worst = 0.0
    for target in range(5, args.max_size + 1, 5):
        phi = random_formula(rng, target)
        m = size(phi)
        steps = model_check(random_structure(rng, m), phi).steps
        worst = max(worst, steps / m**2)
        print(f"|Sub| {m:4d}  |Pi| {m:4d}  steps {steps:7d}  ratio {steps / m**2:.3f}")
    print(f"max steps / m^2 = {worst:.3f}")


if __name__ == "__main__":
    main()
