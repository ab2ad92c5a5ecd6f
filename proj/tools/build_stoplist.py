#!/usr/bin/env python3
"""Regenerate the n-gram stoplist from a plain-text corpus.

Counts word 1- to 4-grams over every input file (one document per line works
best) and writes the most frequent ones, one per line, lowercased and
single-spaced. Offline tool; the library only reads the resulting file.

    python tools/build_stoplist.py corpus/*.txt --size 500 -o data/stoplist.txt
"""

import argparse
import collections
import re
import sys

TOKEN = re.compile(r"[a-z0-9]+(?:'[a-z]+)?")


def ngrams(tokens, max_n):
    for n in range(1, max_n + 1):
        for i in range(len(tokens) - n + 1):
            yield " ".join(tokens[i:i + n])


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("corpus", nargs="+", help="text files")
    parser.add_argument("--size", type=int, default=500)
    parser.add_argument("--max-n", type=int, default=4)
    parser.add_argument("--min-count", type=int, default=2)
    parser.add_argument("-o", "--output", default="-")
    args = parser.parse_args(argv)

    counts = collections.Counter()
    for path in args.corpus:
        with open(path, encoding="utf-8", errors="replace") as f:
            for line in f:
                counts.update(ngrams(TOKEN.findall(line.lower()), args.max_n))

    top = [g for g, c in sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
           if c >= args.min_count][:args.size]
    out = sys.stdout if args.output == "-" else open(args.output, "w", encoding="utf-8")
    with out:
        for g in top:
            out.write(g + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
