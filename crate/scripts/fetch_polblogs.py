#!/usr/bin/env python3
"""Download the political blogs network and write it as a weighted edge list.

Duplicate arcs are merged with their multiplicity as the weight. Self-loops
are dropped. Output goes to data/polblogs/ under the workspace root unless a
directory is given.
"""

import argparse
import collections
import io
import pathlib
import re
import urllib.request
import zipfile

URL = "http://www-personal.umich.edu/~mejn/netdata/polblogs.zip"
ROOT = pathlib.Path(__file__).resolve().parent.parent

NODE = re.compile(r"node\s*\[(.*?)\]", re.S)
EDGE = re.compile(r"edge\s*\[(.*?)\]", re.S)


def field(block, name):
    m = re.search(rf"\b{name}\s+(\"[^\"]*\"|\S+)", block)
    return m.group(1).strip('"') if m else None


def parse(gml):
    labels = {}
    for block in NODE.findall(gml):
        labels[int(field(block, "id"))] = int(field(block, "value"))
    weights = collections.Counter()
    for block in EDGE.findall(gml):
        s, t = int(field(block, "source")), int(field(block, "target"))
        if s != t:
            weights[(s, t)] += 1
    return labels, weights


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=pathlib.Path, default=ROOT / "data" / "polblogs")
    ap.add_argument("--gml", type=pathlib.Path, help="use a local polblogs.gml instead of downloading")
    args = ap.parse_args()

    if args.gml:
        gml = args.gml.read_text()
    else:
        with urllib.request.urlopen(URL) as r:
            archive = zipfile.ZipFile(io.BytesIO(r.read()))
        gml = archive.read("polblogs.gml").decode()

    labels, weights = parse(gml)
    args.out.mkdir(parents=True, exist_ok=True)
    with open(args.out / "polblogs.tsv", "w") as f:
        for (s, t), w in sorted(weights.items()):
            f.write(f"{s}\t{t}\t{w}\n")
    with open(args.out / "polblogs_labels.csv", "w") as f:
        f.write("node,cluster\n")
        for node in sorted(labels):
            f.write(f"{node},{labels[node]}\n")
    print(f"{len(labels)} blogs, {len(weights)} weighted arcs -> {args.out}")


if __name__ == "__main__":
    main()
