"""Bounds versus p for m = 3, written as CSV and summarised.

Writes ``scan_m3.csv`` in the working directory and prints where the
p-free bound starts to win.
"""

import csv
import sys

from bhlab.cli import run

path = "scan_m3.csv"
code = run(["scan", "--m", "3", "--p-min", "6", "--p-max", "200", "--step", "2", "--out", path])
if code:
    sys.exit(code)

with open(path, newline="") as fh:
    rows = list(csv.DictReader(fh))

first_free = next(r for r in rows if r["p_free"])
print(f"{len(rows)} rows written to {path}")
print(f"p-free column starts at p = {first_free['p']} (threshold 24)")
for r in rows[::12]:
    print(f"  p={float(r['p']):>6.1f}  best={float(r['best']):.6f}  lower={float(r['lower']):.6f}")
