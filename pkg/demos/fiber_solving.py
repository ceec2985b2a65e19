"""Solve deformed fibers U(zeta; x) = a and count the solutions.

The fiber of the deformed system at a generic target has exactly
|W(a_q)| * d points.  The quartic selection on the B2 axis pair has
|W(A1)| = 2 and d = 2, so every generic fiber carries four points in two
little-group orbits.  The same solve with the same seed reproduces the
JSON output byte for byte.
"""

from importlib import resources

from chevfiber import (
    DeformedSystem,
    build_root_system,
    invariant_family,
    is_generic_fiber,
    load_pair_config,
    restrict_family,
    solve_fiber,
    solve_lambda_xi,
)


def main():
    cfg = load_pair_config(
        str(resources.files("chevfiber.data").joinpath("toy_pair.cfg"))
    )
    family = invariant_family(build_root_system(cfg.ambient_type, cfg.ambient_rank))
    res = restrict_family(family, cfg, selection=(1,))

    system = DeformedSystem.from_restriction(res, zeta=(1 + 0j,), target=(6 + 0j,))
    print(f"equation: {system.polys[0].to_text()} = 6 at t1 = 1")
    print(f"expected count |W| * d = {system.expected_count()}")

    result = solve_fiber(system, seed=0)
    for point, residual in zip(result.solutions, result.residuals):
        print(f"  x = {point[0]:+.12f}   residual {residual:.2e}")
    print(f"solutions: {result.count}, orbit classes: {list(result.orbit_classes)}")
    print(f"generic fiber: {is_generic_fiber(system, result)}")

    again = solve_fiber(system, seed=0)
    print(f"same seed reproduces JSON bytes: {result.to_json() == again.to_json()}")

    print()
    print("lambda attached to xi = 2:")
    undeformed = DeformedSystem.from_restriction(res, zeta=(1 + 0j,), target=(0j,))
    found = solve_lambda_xi(undeformed, (2 + 0j,), seed=0)
    for point, residual in zip(found.solutions, found.residuals):
        print(f"  lambda = {point[0]:+.12f}   residual {residual:.2e}")
    print(f"orbit classes: {list(found.orbit_classes)}")


if __name__ == "__main__":
    main()
