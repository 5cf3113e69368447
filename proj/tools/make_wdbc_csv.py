#!/usr/bin/env python3
"""Write the WDBC table in the Kaggle CSV layout (id, diagnosis, 30 features).

The values come from the copy of the UCI file bundled with scikit-learn, which
keeps the original row order but drops the record ids. Row 1 is the UCI record
842302; the remaining ids are synthesized as ``wdbc-NNN`` (1-based row number).
"""
import argparse
import csv
from pathlib import Path


FEATURES = [
    f"{base}_{suffix}"
    for suffix in ("mean", "se", "worst")
    for base in (
        "radius", "texture", "perimeter", "area", "smoothness",
        "compactness", "concavity", "concave points", "symmetry",
        "fractal_dimension",
    )
]


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("out", type=Path)
    args = parser.parse_args()

    src = Path(__import__("sklearn").__file__).parent / "datasets" / "data" / "breast_cancer.csv"
    with src.open() as fh:
        rows = list(csv.reader(fh))[1:]

    with args.out.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["id", "diagnosis", *FEATURES])
        for i, row in enumerate(rows):
            record_id = "842302" if i == 0 else f"wdbc-{i + 1:03d}"
            # sklearn encodes 0 = malignant, 1 = benign
            diagnosis = "M" if row[30] == "0" else "B"
            writer.writerow([record_id, diagnosis, *row[:30]])


if __name__ == "__main__":
    main()
