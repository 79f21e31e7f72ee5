#!/usr/bin/env python3
"""Sample external decider speaking the matroidkit line protocol.

Reads one JSON header line {"n":N,"k":K,"alpha":A,"seed":S} on stdin,
queries a seed-dependent sample of the target family (the k-subsets of
[n] with id-sum alpha), and gives up with "V no".

Usage: budget_decider.py [BUDGET]
  BUDGET >= 0: query at most BUDGET target sets (default: family size - 1).
  BUDGET < 0:  family size + BUDGET.
"""
import itertools
import json
import random
import sys


def main() -> None:
    header = json.loads(sys.stdin.readline())
    n, k, alpha, seed = header["n"], header["k"], header["alpha"], header["seed"]

    family = [
        s
        for s in itertools.combinations(range(1, n + 1), k)
        if sum(s) == alpha
    ]
    raw = int(sys.argv[1]) if len(sys.argv) > 1 else -1
    budget = raw if raw >= 0 else max(0, len(family) + raw)

    rng = random.Random(seed)
    rng.shuffle(family)
    for probe in family[:budget]:
        sys.stdout.write("Q " + " ".join(map(str, probe)) + "\n")
        sys.stdout.flush()
        sys.stdin.readline()  # 1 or 0; this decider ignores the answer

    sys.stdout.write("V no\n")
    sys.stdout.flush()


if __name__ == "__main__":
    main()
