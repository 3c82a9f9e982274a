"""Regenerate src/sepkit/data/family_thresholds.json.

For each degree the table holds the smallest candidate M from which
verify_family passes for every larger candidate.  Run from the repo root:

    python scripts/gen_family_thresholds.py
"""

import json
from pathlib import Path

from sepkit.families import threshold_table

OUT = Path(__file__).resolve().parents[1] / "src" / "sepkit" / "data" / "family_thresholds.json"


def main():
    table = threshold_table()
    table["note"] = "empirical: smallest candidate M with verify_family passing at it and every larger candidate"
    OUT.write_text(json.dumps(table, indent=2, sort_keys=True) + "\n")
    print(json.dumps(table["thresholds"]))


if __name__ == "__main__":
    main()
