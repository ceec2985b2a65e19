"""Walk through root systems, Weyl groups, and invariant families.

Builds a few classical and exceptional systems, enumerates their Weyl
groups by reflection closure, and checks the product-of-degrees identity
|W| = m_1 * ... * m_n before constructing an independent invariant family
for G2.
"""

from chevfiber import build_root_system, invariant_family, weyl_group, weyl_order
from chevfiber.rootsys import fundamental_degrees


def main():
    for label in (("A", 2), ("B", 3), ("G", 2), ("BC", 2), ("F", 4)):
        t, n = label
        rs = build_root_system(t, n)
        group = weyl_group(rs)
        degrees = fundamental_degrees(t, n)
        product = 1
        for m in degrees:
            product *= m
        print(
            "%s%-2d  roots %-3d  |W| %-5d  degrees %-12s  product %d"
            % (t, n, len(rs.roots), len(group), list(degrees), product)
        )
        assert len(group) == product == weyl_order(t, n)

    print()
    print("invariant family for G2:")
    fam = invariant_family(build_root_system("G", 2))
    for degree, poly in zip(fam.degrees, fam.polys):
        print(f"  U[{degree}] = {poly.to_text()}")
    point, value = fam.certificate
    print(f"  independence: det J = {value} at {tuple(str(c) for c in point)}")


if __name__ == "__main__":
    main()
