"""Restrict a B2 invariant family to a one-dimensional axis.

The axis pair keeps the second coordinate (an A1 inside B2).  Restricting
the quadratic invariant gives a surjective picture with module rank d = 1;
deliberately selecting the quartic instead produces the failing case whose
restricted algebra only reaches even degrees divisible by four, so the
surjectivity check reports degree 2 and the rank jumps to d = 2.
"""

from chevfiber import (
    build_root_system,
    invariant_family,
    load_pair_config,
    restrict_family,
    surjectivity_check,
)
from importlib import resources


def show(res):
    print(f"  selected (1-based): {[i + 1 for i in res.selected]}")
    print(f"  restricted degrees: {list(res.restricted.degrees)}")
    for poly in res.restricted.polys:
        print(f"  W = {poly.to_text()}")
    for poly in res.adapted:
        print(f"  adapted U = {poly.to_text()}")
    print(f"  module rank d = {res.d}")
    report = surjectivity_check(res.restricted, degree_bound=12)
    if report.ok:
        print(f"  surjective through degree {report.degree_bound}")
    else:
        print(f"  surjectivity fails at degree {report.failing_degree}")


def main():
    cfg = load_pair_config(
        str(resources.files("chevfiber.data").joinpath("toy_pair.cfg"))
    )
    family = invariant_family(build_root_system(cfg.ambient_type, cfg.ambient_rank))
    print(f"ambient family degrees: {list(family.degrees)}")

    print()
    print("first-by-degree selection:")
    show(restrict_family(family, cfg))

    print()
    print("quartic-only selection:")
    show(restrict_family(family, cfg, selection=(1,)))


if __name__ == "__main__":
    main()
