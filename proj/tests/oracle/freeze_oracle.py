#!/usr/bin/env python3
"""Freeze golden values for the C++ tests from independent references.

Requires the `cvss` package (pip install cvss) and numpy. Run from the repo
root; writes tests/data/reference_scores.csv and prints constants that are
pasted into tests/golden_constants.hpp.
"""
import itertools
import random

import numpy as np
from cvss import CVSS3

FIELDS = ["AV", "AC", "PR", "UI", "S", "C", "I", "A"]
DOMAINS = [
    ["N", "A", "L", "P"],
    ["L", "H"],
    ["N", "L", "H"],
    ["N", "R"],
    ["U", "C"],
    ["N", "L", "H"],
    ["N", "L", "H"],
    ["N", "L", "H"],
]


def vec_str(letters):
    return "/".join(f"{f}:{l}" for f, l in zip(FIELDS, letters))


def main():
    space = list(itertools.product(*DOMAINS))
    assert len(space) == 2592

    rows = []
    for letters in space:
        s = vec_str(letters)
        base = CVSS3("CVSS:3.1/" + s).scores()[0]
        rows.append((s, base))

    with open("tests/data/reference_scores.csv", "w") as f:
        f.write("vector,base\n")
        for s, b in rows:
            f.write(f"{s},{b:.1f}\n")

    rng = random.Random(20200314)
    sample = rng.sample(rows, 20)
    print("// 20 sampled golden pairs")
    for s, b in sample:
        print(f'    {{"{s}", {b:.1f}}},')

    twos = [s for s, b in rows if b == 2.0]
    print("score-2.0 vectors:", len(twos))
    print("below 2.0:", sum(1 for _, b in rows if b < 2.0))

    # brute-force mean pairwise Hamming over all unordered pairs
    idx = np.array([[DOMAINS[k].index(l) for k, l in enumerate(v)] for v in space],
                   dtype=np.int8)
    n = len(idx)
    total = 0
    sq = 0
    for i in range(n - 1):
        d = (idx[i + 1:] != idx[i]).sum(axis=1).astype(np.int64)
        total += int(d.sum())
        sq += int((d * d).sum())
    pairs = n * (n - 1) // 2
    mean = total / pairs
    var = sq / pairs - mean * mean
    print(f"pairs={pairs} sum={total} sumsq={sq}")
    print(f"mean_pairwise_hamming={mean:.17g}")
    print(f"hamming_stddev={var ** 0.5:.17g}")


if __name__ == "__main__":
    main()
