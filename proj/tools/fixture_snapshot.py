#!/usr/bin/env python3
"""Build a snapshot file from readable YAML fixture descriptions.

Each input file may contain:

    sources: [openie, quasimodo]          # ids that get empty entries for unlisted pairs
    domains: [[sun, earth], [atom, electrons]]
    relations:
      - [earth, sun, openie, [orbit, revolve around]]
    harvest:
      - [earth, revolve around, head, quasimodo, [sun, moon]]

Inputs are merged. Every ordered pair inside any domain then gets an entry for
every source seen, empty when nothing is given, so offline replay never misses.

    python tools/fixture_snapshot.py fixtures/solar_atom.yaml -o fixtures/solar_atom.snapshot.jsonl
"""

import argparse
import json
import sys

import yaml

CREATED_AT = "2024-01-01T00:00:00Z"


def norm(text):
    return " ".join(str(text).lower().split())


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("inputs", nargs="+")
    parser.add_argument("-o", "--output", required=True)
    args = parser.parse_args(argv)

    relations = {}
    harvest = {}
    sources = set()
    domains = []
    for path in args.inputs:
        with open(path, encoding="utf-8") as f:
            doc = yaml.safe_load(f) or {}
        for head, tail, source, rels in doc.get("relations", []):
            key = (norm(source), norm(head), norm(tail))
            merged = relations.setdefault(key, [])
            for r in rels:
                if norm(r) not in merged:
                    merged.append(norm(r))
        for known, relation, direction, source, names in doc.get("harvest", []):
            if direction not in ("head", "tail"):
                sys.exit(f"{path}: harvest direction must be head or tail")
            key = (norm(source), norm(known), norm(relation), direction)
            harvest.setdefault(key, []).extend(norm(n) for n in names)
        sources.update(norm(s) for s in doc.get("sources", []))
        sources.update(key[0] for key in relations)
        domains.extend([norm(n) for n in d] for d in doc.get("domains", []))

    for names in domains:
        for source in sources:
            for h in names:
                for t in names:
                    if h != t:
                        relations.setdefault((source, h, t), [])

    lines = [json.dumps({"format": "relmap-snapshot", "version": 1, "created_at": CREATED_AT},
                        separators=(",", ":"))]
    for (source, head, tail), rels in sorted(relations.items()):
        lines.append(json.dumps({"source": source, "head": head, "tail": tail, "relations": rels},
                                separators=(",", ":"), ensure_ascii=False))
    for (source, known, relation, direction), names in sorted(harvest.items()):
        lines.append(json.dumps({"source": source, "known": known, "relation": relation,
                                 "direction": direction, "entities": names},
                                separators=(",", ":"), ensure_ascii=False))
    with open(args.output, "w", encoding="utf-8") as f:
        f.write("\n".join(lines) + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
