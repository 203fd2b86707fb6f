"""Configuration tables: for each small shell of a lattice, the row
(d, n, s, t) = (rank, shell size, distinct inner products, design strength).

Run:  python3 demos/02_design_strength.py
"""

from latshell import catalog
from latshell.design import configuration
from latshell.shells import enumerate_shell, shell_count

TARGETS = {"O7": range(3, 13), "O16": range(3, 7), "L1622": range(2, 8)}
SIZE_CUTOFF = 10**5  # keep the demo quick; the full tables live in the tests


def main():
    for name, norms in TARGETS.items():
        lat = catalog.build(name)
        print(f"\n{name} (dim {lat.dim}):")
        print("   m        n    s   t  exact")
        for m in norms:
            if shell_count(lat, m) == 0 or shell_count(lat, m) > SIZE_CUTOFF:
                continue
            cfg = configuration(enumerate_shell(lat, m))
            print(f"  {m:2} {cfg.n:8} {cfg.s:4} {cfg.t:3}  {cfg.exact}")


if __name__ == "__main__":
    main()
