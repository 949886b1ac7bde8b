#!/usr/bin/env python3
"""Export a two-class slice of the scikit-learn 8x8 digits as binary CSV.

Pixels (0..16) are scaled to 0..255 (x * 16, capped at 255) and binarized
with the same strict rule the library uses: bit = 1 iff intensity > 127.
Rows are `b1,...,b64,label` where label is 1 for the second class.

    python3 scripts/export_digits.py 3 8 crates/core/tests/data/digits_3v8
"""
import sys

import numpy as np
from sklearn.datasets import load_digits


def main():
    if len(sys.argv) != 4:
        sys.exit(__doc__)
    neg, pos, prefix = int(sys.argv[1]), int(sys.argv[2]), sys.argv[3]
    digits = load_digits()
    keep = (digits.target == neg) | (digits.target == pos)
    x = np.minimum(digits.data[keep] * 16, 255).astype(int)
    y = (digits.target[keep] == pos).astype(int)
    bits = (x > 127).astype(int)
    order = np.random.RandomState(0).permutation(len(y))
    bits, y = bits[order], y[order]
    n_test = len(y) // 4
    splits = {"test": slice(0, n_test), "train": slice(n_test, None)}
    for name, sl in splits.items():
        with open(f"{prefix}_{name}.csv", "w") as f:
            for row, label in zip(bits[sl], y[sl]):
                f.write(",".join(map(str, row)) + f",{label}\n")
        print(f"{prefix}_{name}.csv: {len(y[sl])} rows")


if __name__ == "__main__":
    main()
