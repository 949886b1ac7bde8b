#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
"""Turn labelled text into a presence-vector CSV for `tsmv train`.

Input is a CSV with a 0/1 label in the first column and free text in the
second. Text is lowercased and split on non-word characters; the
vocabulary is the `--vocab-size` most frequent tokens of the input (ties
broken alphabetically), or an existing vocabulary given with `--vocab`
so a test split uses the same columns as its training split.

    scripts/bag_of_words.py reviews_train.csv train.csv --vocab-size 5000 --save-vocab vocab.txt
    scripts/bag_of_words.py reviews_test.csv test.csv --vocab vocab.txt

Each output row is `b1,...,bV,label`.
"""
import argparse
import collections
import csv
import re
import sys

TOKEN = re.compile(r"[a-z0-9']+")


def tokens(text):
    return TOKEN.findall(text.lower())


def read_rows(path):
    with open(path, newline="", encoding="utf-8") as f:
        for lineno, row in enumerate(csv.reader(f), 1):
            if not row:
                continue
            if len(row) < 2 or row[0].strip() not in ("0", "1"):
                sys.exit(f"{path}:{lineno}: expected `label,text` with label 0 or 1")
            yield int(row[0]), tokens(row[1])


def build_vocab(docs, size):
    counts = collections.Counter(t for _, toks in docs for t in toks)
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return [t for t, _ in ranked[:size]]


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("input")
    ap.add_argument("output")
    group = ap.add_mutually_exclusive_group(required=True)
    group.add_argument("--vocab-size", type=int)
    group.add_argument("--vocab", help="one token per line")
    ap.add_argument("--save-vocab")
    args = ap.parse_args()

    docs = list(read_rows(args.input))
    if args.vocab:
        with open(args.vocab, encoding="utf-8") as f:
            vocab = [line.strip() for line in f if line.strip()]
    else:
        vocab = build_vocab(docs, args.vocab_size)
    index = {t: i for i, t in enumerate(vocab)}
    if args.save_vocab:
        with open(args.save_vocab, "w", encoding="utf-8") as f:
            f.write("".join(t + "\n" for t in vocab))

    with open(args.output, "w", encoding="utf-8") as out:
        for label, toks in docs:
            bits = ["0"] * len(vocab)
            for t in toks:
                i = index.get(t)
                if i is not None:
                    bits[i] = "1"
            out.write(",".join(bits + [str(label)]) + "\n")
    print(f"{len(docs)} rows, {len(vocab)} features -> {args.output}")


if __name__ == "__main__":
    main()
