"""Browse the exceptional symmetric pair table.

Loads the packaged 35-row database, verifies every structural invariant,
and prints the corrected table split into the b-exceptional rows (where
restriction already fails from the Cartan subspace b) and the split rows
(where b equals a_q and restriction is trivially surjective).
"""

from chevfiber import (
    b_exceptional_list,
    corrected_prop31,
    dual_of,
    is_split,
    load_database,
    verify_database,
)
from chevfiber.pairdb import format_sigma


def main():
    db = load_database()
    problems = verify_database(db)
    print(f"records: {len(db)}, integrity problems: {len(problems)}")

    table = corrected_prop31(db)
    print(f"corrected table rows: {len(table)}")

    print()
    print("b-exceptional rows (restriction fails from b already):")
    for rec in b_exceptional_list(db):
        print(
            "  %-18s / %-20s  b=%-3s aq=%s"
            % (
                rec.name_g,
                rec.name_h,
                format_sigma(rec.sigma_b),
                format_sigma(rec.sigma_aq),
            )
        )

    splits = [r for r in db if r.sigma_b is not None and is_split(r)]
    print()
    print(f"split rows (b equals a_q): {len(splits)}")

    print()
    print("dual links (Riemannian dual pairs share their table row):")
    seen = set()
    for rec in db:
        if rec.dual_name and rec.label not in seen:
            mate = dual_of(rec, db)
            seen.add(mate.label)
            print(f"  {rec.label}  <->  {mate.label}")


if __name__ == "__main__":
    main()
