#!/usr/bin/env python3
"""Reference values for the synthetic evocation fixture.

Parses the native EAT/USF/SWOW fixture files and the ConceptNet-style dump
with its own readers, then computes:

  * relatedTo CAM between every dataset pair over the shared ordered pairs,
    with ranks taken from exact rational conditional ratios and the final
    square root in 50-digit decimal arithmetic;
  * ALAR per relation and dataset (math.fsum of float LARs).

The printed constants are frozen into the C++ acceptance and unit tests.
"""

import csv
import gzip
import io
import math
import os
import re
import sys
import xml.etree.ElementTree as ET
from decimal import Decimal, getcontext
from fractions import Fraction

getcontext().prec = 50
DATA = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "data", "synthetic")


def norm(w):
    return "_".join(w.strip().lower().split())


def read_eat():
    counts, totals = {}, {}
    root = ET.parse(os.path.join(DATA, "eat.xml")).getroot()
    for stim in root.iter("stimulus"):
        cue = norm(stim.get("word"))
        totals[cue] = int(stim.get("all"))
        for r in stim.iter("response"):
            counts.setdefault(cue, {})[norm(r.get("word"))] = int(r.get("n"))
    return counts, totals


def read_usf():
    counts, totals = {}, {}
    with open(os.path.join(DATA, "usf.csv"), newline="") as f:
        for row in csv.DictReader(f):
            cue, target = norm(row["CUE"]), norm(row["TARGET"])
            counts.setdefault(cue, {})[target] = counts.get(cue, {}).get(target, 0) + int(row["#P"])
            totals[cue] = max(totals.get(cue, 0), int(row["#G"]))
    return counts, totals


def read_swow():
    counts = {}
    with gzip.open(os.path.join(DATA, "swow.csv.gz"), "rt", newline="") as f:
        for row in csv.DictReader(f):
            cue = norm(row["cue"])
            for slot in ("R1", "R2", "R3"):
                v = row[slot].strip()
                if v in ("", "NA", "No more responses"):
                    continue
                r = norm(v)
                counts.setdefault(cue, {})[r] = counts.get(cue, {}).get(r, 0) + 1
    totals = {c: sum(rs.values()) for c, rs in counts.items()}
    return counts, totals


def read_edges():
    edges = set()
    with open(os.path.join(DATA, "conceptnet.csv")) as f:
        for line in f:
            parts = line.rstrip("\n").split("\t")
            if len(parts) < 4:
                continue
            rel, start, end = parts[1], parts[2], parts[3]
            m1 = re.match(r"^/c/en/([^/]+)", start)
            m2 = re.match(r"^/c/en/([^/]+)", end)
            if not (m1 and m2 and rel.startswith("/r/")):
                continue
            name = rel.split("/")[2]
            name = name[0].lower() + name[1:]
            edges.add((norm(m1.group(1).replace("_", " ")), name, norm(m2.group(1).replace("_", " "))))
    return edges


def pair_sets(counts, edges):
    clean = set()
    for a, rs in counts.items():
        for b in rs:
            if a != b and b in counts and a in counts[b]:
                clean.add(tuple(sorted((a, b))))
    by_pair = {}
    for h, r, t in edges:
        by_pair.setdefault(tuple(sorted((h, t))), []).append((h, r, t))
    sets = {}
    for p in clean:
        es = by_pair.get(p)
        if not es:
            sets.setdefault("relatedTo", set()).add(p)
        for h, r, t in es or []:
            sets.setdefault(r, set()).add((h, t))
    return sets


def ratio(counts, totals, x, y):
    """Exact P(y|x) / P(x|y)."""
    return Fraction(counts[x][y], totals[x]) / Fraction(counts[y][x], totals[y])


def float_lar(counts, totals, x, y):
    return math.log(counts[x][y] / totals[x]) - math.log(counts[y][x] / totals[y])


def avg_ranks(keys):
    return [Fraction(sum(1 for j in keys if j < k)) + Fraction(sum(1 for j in keys if j == k) + 1, 2)
            for k in keys]


def exact_spearman(kx, ky):
    rx, ry = avg_ranks(kx), avg_ranks(ky)
    n = len(rx)
    mx, my = sum(rx) / n, sum(ry) / n
    num = sum((a - mx) * (b - my) for a, b in zip(rx, ry))
    den = sum((a - mx) ** 2 for a in rx) * sum((b - my) ** 2 for b in ry)
    num_d = Decimal(num.numerator) / Decimal(num.denominator)
    den_d = Decimal(den.numerator) / Decimal(den.denominator)
    return num_d / den_d.sqrt()


def check_float_order(keys, floats):
    for i in range(len(keys)):
        for j in range(len(keys)):
            if (keys[i] < keys[j]) != (floats[i] < floats[j]):
                return False
    return True


def main():
    data = {"eat": read_eat(), "usf": read_usf(), "swow": read_swow()}
    edges = read_edges()
    sets = {d: pair_sets(c, edges) for d, (c, t) in data.items()}
    names = ["eat", "usf", "swow"]

    shared = set.intersection(*(sets[d]["relatedTo"] for d in names))
    shared = sorted(shared)
    print(f"# relatedTo shared ordered pairs: {len(shared)}")
    for d in names:
        print(f"# {d}: |S(relatedTo)| = {len(sets[d]['relatedTo'])}, clean relations = "
              + ", ".join(f"{r}:{len(s)}" for r, s in sorted(sets[d].items())))
    keys, floats = {}, {}
    for d in names:
        c, t = data[d]
        keys[d] = [ratio(c, t, x, y) for x, y in shared]
        floats[d] = [float_lar(c, t, x, y) for x, y in shared]
        if not check_float_order(keys[d], floats[d]):
            print(f"# WARNING: float LAR order differs from exact order in {d}", file=sys.stderr)
    for i in range(3):
        for j in range(i + 1, 3):
            rho = exact_spearman(keys[names[i]], keys[names[j]])
            print(f"cam {names[i]}~{names[j]} = {rho:.20f}")

    for d in names:
        c, t = data[d]
        for r in sorted(sets[d]):
            lars = [float_lar(c, t, x, y) for x, y in sorted(sets[d][r])]
            print(f"alar {d} {r} n={len(lars)} = {math.fsum(lars) / len(lars):.17g}")


if __name__ == "__main__":
    main()
