"""Walk the lattice catalog: invariants, shell counts, theta identities.

Run:  python3 demos/01_catalog_and_theta.py
"""

from latshell import catalog
from latshell.shells import minimum, theta_prefix
from latshell.qseries import verify_theta_identity

HEADLINERS = ("O1", "Z7", "O7", "O16", "O22", "O23", "L1621", "L1622", "L1623")


def main():
    print("name      dim  det  min")
    for name in HEADLINERS:
        lat = catalog.build(name)
        print(f"{name:8} {lat.dim:4} {str(lat.determinant()):>4} "
              f"{str(minimum(lat)):>4}")

    print("\ntheta prefixes (coefficient of q^m, m = 0..8):")
    for name in ("Z7", "O16", "L1621", "L1622", "L1623"):
        lat = catalog.build(name)
        print(f"{name:8} {theta_prefix(lat, 8)}")

    print("\nclosed-form identities against enumerated counts:")
    for name, upto in (("Z7", 12), ("L1623", 8), ("O23", 5)):
        out = verify_theta_identity(name, upto)
        print(f"{name:8} up to q^{upto}: match = {out['match']}")


if __name__ == "__main__":
    main()
