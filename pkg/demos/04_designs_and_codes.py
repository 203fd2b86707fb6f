"""From shells to combinatorics: sign classes of the norm-3 shell give a
block design and a binary code; six-point Fano configurations in Z7.

Run:  python3 demos/04_designs_and_codes.py
"""

from latshell import catalog
from latshell.designs_codes import design_code_report, fano_report
from latshell.shells import theta_prefix


def main():
    for name in ("L1621", "L1622", "L1623"):
        rep = design_code_report(catalog.build(name))
        d = rep["design"]
        print(f"{name}: {rep['classes']} sign classes of size "
              f"{theta_prefix(catalog.build(name), 3)[3] // rep['classes']}, "
              f"design 2-({d['v']},{d['k']},{d['lambda']}), "
              f"code [{rep['code'][0]},{rep['code'][1]},{rep['code'][2]}]")

    rep = fano_report()
    print(f"\nFano configurations inside the norm-3 shell of Z7:")
    print(f"  {rep['count']} six-point subsets, "
          f"{rep['disjoint_pairs']} disjoint pairs, "
          f"largest pairwise-disjoint family = {rep['max_family']} "
          f"(witness pair {rep['witness']})")


if __name__ == "__main__":
    main()
