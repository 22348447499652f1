#!/usr/bin/env python3
"""Regenerate data/words_10k.tsv from the wordfreq English list.

Keeps the most frequent purely lowercase a-z words and makes sure every word
of the given phrase files is present. Counts are frequencies per billion.
"""
import argparse
import sys

from wordfreq import top_n_list, word_frequency


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--size", type=int, default=10000)
    ap.add_argument("--phrases", nargs="*", default=[])
    ap.add_argument("--out", default="-")
    args = ap.parse_args()

    required = []
    for path in args.phrases:
        with open(path, encoding="utf-8") as f:
            for line in f:
                for w in line.split():
                    if w not in required:
                        required.append(w)

    words = []
    for w in top_n_list("en", args.size * 4):
        if w.isascii() and w.isalpha() and w.islower() and len(w) <= 28:
            words.append(w)
    words = words[: args.size]
    missing = [w for w in required if w not in set(words)]
    if missing:
        keep = set(required)
        tail = [w for w in reversed(words) if w not in keep][: len(missing)]
        drop = set(tail)
        words = [w for w in words if w not in drop] + missing

    out = sys.stdout if args.out == "-" else open(args.out, "w", encoding="utf-8", newline="\n")
    for w in words:
        count = max(1, round(word_frequency(w, "en") * 1e9))
        out.write(f"{w}\t{count}\n")


if __name__ == "__main__":
    main()
