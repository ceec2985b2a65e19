from __future__ import annotations

import pytest

from chevfiber.pairdb import (
    IntegrityError,
    PairRecord,
    b_exceptional_list,
    corrected_prop31,
    dual_of,
    is_b_exceptional,
    is_exceptional,
    is_split,
    load_database,
    parse_record,
    parse_sigma,
    verify_database,
)


@pytest.fixture(scope="module")
def db():
    return load_database()


def test_parse_sigma():
    assert parse_sigma("BC2") == ("BC", 2)
    assert parse_sigma("E6") == ("E", 6)
    assert parse_sigma("F4") == ("F", 4)
    with pytest.raises(ValueError):
        parse_sigma("Z9")
    with pytest.raises(ValueError):
        parse_sigma("BC")


def test_database_loads_35(db):
    assert len(db) == 35
    assert len(corrected_prop31(db)) == 35


def test_every_record_is_exceptional(db):
    assert all(is_exceptional(r) for r in db)


def test_exceptional_criterion_is_signature_set():
    rec = PairRecord(
        "g", "h", ("E", 6), None, ("BC", 2), None, False, "unverified-by-erratum"
    )
    assert is_exceptional(rec)
    rec2 = PairRecord(
        "g", "h", ("E", 6), None, ("BC", 1), None, False, "unverified-by-erratum"
    )
    assert not is_exceptional(rec2)
    rec3 = PairRecord(
        "g", "h", ("F", 4), None, ("BC", 1), None, False, "unverified-by-erratum"
    )
    assert not is_exceptional(rec3)


def test_b_exceptional_list_matches_named_rows(db):
    rows = b_exceptional_list(db)
    assert len(rows) == 10
    names = {(r.name_g, r.name_h) for r in rows}
    assert ("e6(-14)", "sp(2,2)") in names
    assert ("e6(-26)", "sp(3,1)") in names
    assert ("e7(-25)", "su(6,2)") in names
    assert ("e7(-25)", "su*(8)") in names
    assert ("e8(-24)", "so(12,4)") in names
    assert ("e8(-24)", "so*(16)") in names
    group_rows = [r for r in rows if r.is_group_case]
    assert len(group_rows) == 4
    assert all(is_b_exceptional(r) for r in rows)
    assert all(is_exceptional(r) for r in rows)


def test_replacements_present_removals_absent(db):
    names = {(r.name_g, r.name_h) for r in db}
    assert ("e6(C)", "so(10,C)+C") in names
    assert ("e6(C)", "f4(C)") in names
    assert ("e7(C)", "e6(C)+C") in names
    assert ("e8(C)", "e7(C)+sl(2,C)") in names
    assert ("e6(C)", "e6(-14)") not in names
    assert ("e6(C)", "e6(-26)") not in names
    assert ("e7(C)", "e7(-25)") not in names
    assert ("e8(C)", "e8(-24)") not in names


def test_provenance_split(db):
    confirmed = [r for r in db if r.provenance == "erratum-confirmed"]
    unverified = [r for r in db if r.provenance == "unverified-by-erratum"]
    assert len(confirmed) == 4
    assert len(unverified) == 31
    assert all(r.name_g.endswith("(C)") for r in confirmed)


def test_split_records(db):
    splits = [r for r in db if r.sigma_b is not None and is_split(r)]
    assert len(splits) == 17
    for r in splits:
        assert not is_b_exceptional(r)


def test_is_split_examples(db):
    riemannian = next(r for r in db if (r.name_g, r.name_h) == ("e6(-26)", "f4"))
    assert is_split(riemannian)
    bexc = next(r for r in db if (r.name_g, r.name_h) == ("e6(-14)", "sp(2,2)"))
    assert not is_split(bexc)
    # a group case built from a split g has b equal to a_q
    split_group = PairRecord(
        "gxg", "d(g)", ("E", 8), ("E", 8), ("E", 8), None, True,
        "unverified-by-erratum",
    )
    assert is_split(split_group)
    assert not is_exceptional(split_group)


def test_sigma_b_missing_raises(db):
    rec = next(r for r in db if r.sigma_b is None)
    with pytest.raises(ValueError):
        is_b_exceptional(rec)
    with pytest.raises(ValueError):
        is_split(rec)


def test_dual_links(db):
    complex_row = next(r for r in db if (r.name_g, r.name_h) == ("e7(C)", "e6(C)+C"))
    dual = dual_of(complex_row, db)
    assert dual.is_group_case
    assert dual.name_g == "e7(-25)xe7(-25)"
    assert dual_of(dual, db) == complex_row
    riemannian = next(r for r in db if (r.name_g, r.name_h) == ("e6(-26)", "f4"))
    assert dual_of(riemannian, db) == riemannian
    unlinked = next(r for r in db if r.dual_name is None)
    with pytest.raises(ValueError):
        dual_of(unlinked, db)


def test_dual_preserves_signature_and_verdict(db):
    for r in db:
        if r.dual_name is None:
            continue
        dual = dual_of(r, db)
        assert (dual.sigma_c, dual.sigma_aq) == (r.sigma_c, r.sigma_aq)
        assert is_exceptional(dual) == is_exceptional(r)
        assert dual_of(dual, db) == r


def test_verify_database_clean(db):
    assert verify_database(db) == []


def test_verify_catches_count_mismatch(db):
    problems = verify_database(db[:-1])
    assert any("34" in p for p in problems)


def test_parse_record_validation():
    with pytest.raises(ValueError):
        parse_record("a | b | E6 | - | BC2 | -")
    with pytest.raises(ValueError):
        parse_record("a | b | E6 | - | BC2 | - | group")
    with pytest.raises(ValueError):
        parse_record("a | b | E6 | - | BC2 | - | made-up-token")
    rec = parse_record(
        "gxg | d(g) | E8 | E8 | F4 | - | group,unverified-by-erratum"
    )
    assert rec.is_group_case and rec.sigma_b == ("E", 8)


def test_rank_monotonicity_enforced():
    with pytest.raises(ValueError):
        PairRecord(
            "g", "h", ("E", 6), ("A", 1), ("BC", 2), None, False,
            "unverified-by-erratum",
        )


def test_group_cases_marked(db):
    group_rows = [r for r in db if r.is_group_case]
    assert len(group_rows) == 4
    assert all("x" in r.name_g and r.name_h.startswith("d(") for r in group_rows)
