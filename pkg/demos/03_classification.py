"""Replay the rank-16 classification: counting formulas on one lattice,
then the abstract case analysis over the nine admissible root systems.

Run:  python3 demos/03_classification.py
"""

import json

from latshell import catalog
from latshell.classify import classification_report, replay_report


def main():
    lat = catalog.build("L1622")
    rep = classification_report(lat)
    print("L1622 classification report:")
    print(json.dumps(rep, indent=2, default=str))

    rep = replay_report()
    print("\ncase analysis over admissible rank-16 root systems:")
    for case in rep["cases"]:
        mark = "keep" if case["survives"] else "drop"
        print(f"  {case['root_system']:9} |s3| = {case['shell_size']:5} "
              f"n2 = {case['n2']:3}  {mark:4}  ({case['reason']})")
    print("survivors:", ", ".join(rep["survivors"]))


if __name__ == "__main__":
    main()
