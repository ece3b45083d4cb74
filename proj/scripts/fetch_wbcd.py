#!/usr/bin/env python3
"""Fetch the Wisconsin Breast Cancer Data (699 rows) into data/wbcd.csv.

Output schema: id,Y1,...,Y9,class where Y1..Y9 are the nine cytological
scores (1-10) in their usual order (Y6 = bare nuclei, Y9 = mitoses) and
class is "benign" or "malignant". Missing scores are left empty.

Sources, tried in order:
  1. the MASS `biopsy` table bundled in the `rdatasets` wheel (pip download)
  2. the UCI repository file breast-cancer-wisconsin.data

Usage: scripts/fetch_wbcd.py [--output data/wbcd.csv] [--source rdatasets|uci]
"""

import argparse
import bz2
import csv
import gzip
import io
import lzma
import pickle
import subprocess
import sys
import tempfile
import urllib.request
import zipfile
from pathlib import Path

UCI_URL = (
    "https://archive.ics.uci.edu/ml/machine-learning-databases/"
    "breast-cancer-wisconsin/breast-cancer-wisconsin.data"
)
COLUMNS = ["id"] + [f"Y{k}" for k in range(1, 10)] + ["class"]


def from_rdatasets():
    with tempfile.TemporaryDirectory() as tmp:
        subprocess.run(
            [sys.executable, "-m", "pip", "download", "--no-deps", "--quiet",
             "-d", tmp, "rdatasets"],
            check=True,
        )
        wheel = next(Path(tmp).glob("rdatasets-*.whl"))
        with zipfile.ZipFile(wheel) as z:
            blob = z.read("rdatasets/_data/MASS/biopsy.pkl.compress")
    frame = None
    for decompress in (gzip.decompress, bz2.decompress, lzma.decompress, lambda b: b):
        try:
            frame = pickle.loads(decompress(blob))
            break
        except Exception:
            continue
    if frame is None:
        raise RuntimeError("could not decode biopsy table from rdatasets")
    rows = []
    for rec in frame.to_dict("records"):
        scores = []
        for k in range(1, 10):
            v = rec[f"V{k}"]
            scores.append("" if v != v else str(int(v)))
        rows.append([str(rec["ID"])] + scores + [str(rec["class"])])
    return rows


def from_uci():
    with urllib.request.urlopen(UCI_URL, timeout=60) as resp:
        text = resp.read().decode("ascii")
    rows = []
    for line in text.splitlines():
        if not line.strip():
            continue
        fields = line.strip().split(",")
        scores = ["" if f == "?" else f for f in fields[1:10]]
        label = {"2": "benign", "4": "malignant"}[fields[10]]
        rows.append([fields[0]] + scores + [label])
    return rows


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    root = Path(__file__).resolve().parent.parent
    parser.add_argument("--output", default=str(root / "data" / "wbcd.csv"))
    parser.add_argument("--source", choices=["rdatasets", "uci"])
    args = parser.parse_args()

    sources = {"rdatasets": from_rdatasets, "uci": from_uci}
    order = [args.source] if args.source else ["rdatasets", "uci"]
    rows, errors = None, []
    for name in order:
        try:
            rows = sources[name]()
            break
        except Exception as exc:
            errors.append(f"{name}: {exc}")
    if rows is None:
        sys.exit("fetch failed:\n  " + "\n  ".join(errors))
    if len(rows) != 699:
        sys.exit(f"expected 699 rows, got {len(rows)}")

    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(COLUMNS)
    writer.writerows(rows)
    Path(args.output).parent.mkdir(parents=True, exist_ok=True)
    Path(args.output).write_text(out.getvalue())
    malignant = sum(r[-1] == "malignant" for r in rows)
    print(f"wrote {args.output}: {len(rows)} rows, {malignant} malignant")


if __name__ == "__main__":
    main()
