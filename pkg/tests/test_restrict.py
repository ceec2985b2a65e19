from __future__ import annotations

from fractions import Fraction

import pytest

from chevfiber.polyring import Polynomial, parse_polynomial
from chevfiber.restrict import (
    PairConfig,
    RestrictionError,
    adapt_coordinates,
    parse_pair_config,
    rank_d,
    restrict_family,
    split_config,
    surjectivity_check,
)
from chevfiber.rootsys import InvariantFamily, build_root_system, invariant_family

TOY_TEXT = """
# ambient B2 invariants restricted to the axis spanned by e2
name: toy-axis
ambient_type: B
ambient_rank: 2
little_type: A
little_rank: 1
embedding: 0; 1
"""


def toy_config() -> PairConfig:
    return parse_pair_config(TOY_TEXT)


def test_parse_pair_config():
    cfg = toy_config()
    assert cfg.name == "toy-axis"
    assert cfg.ambient_type == "B" and cfg.ambient_rank == 2
    assert cfg.embedding == ((Fraction(0),), (Fraction(1),))


def test_parse_rejects_unknown_and_malformed():
    with pytest.raises(ValueError):
        parse_pair_config(TOY_TEXT + "\ncolor: blue")
    with pytest.raises(ValueError):
        parse_pair_config("ambient_type B")
    with pytest.raises(ValueError):
        parse_pair_config("ambient_type: A\nambient_rank: 2\nlittle_type: A")
    with pytest.raises(ValueError):
        parse_pair_config(TOY_TEXT + "\nambient_rank: 3")


def test_parse_identity_embedding_default():
    cfg = parse_pair_config(
        "ambient_type: A\nambient_rank: 2\nlittle_type: A\nlittle_rank: 2"
    )
    assert cfg.embedding == (
        (Fraction(1), Fraction(0)),
        (Fraction(0), Fraction(1)),
    )
    with pytest.raises(ValueError):
        parse_pair_config(
            "ambient_type: B\nambient_rank: 2\nlittle_type: A\nlittle_rank: 1"
        )


def test_config_validation():
    with pytest.raises(ValueError):
        PairConfig("B", 2, "A", 1, ((Fraction(0),), (Fraction(0),)))
    with pytest.raises(ValueError):
        PairConfig("B", 2, "A", 3, ((Fraction(1),), (Fraction(0),)))


def test_adapt_coordinates_toy():
    cfg = toy_config()
    rs = build_root_system("B", 2)
    t_vars, x_vars, change = adapt_coordinates(cfg, rs.form)
    assert t_vars == ("t1",) and x_vars == ("x1",)
    # complement of span(e2) under the identity form is span(e1)
    assert change == (
        (Fraction(1), Fraction(0)),
        (Fraction(0), Fraction(1)),
    )


def test_adapt_coordinates_skew_subspace():
    cfg = PairConfig("B", 2, "A", 1, ((Fraction(1),), (Fraction(1),)))
    _, _, change = adapt_coordinates(cfg, build_root_system("B", 2).form)
    t_col = (change[0][0], change[1][0])
    x_col = (change[0][1], change[1][1])
    assert x_col == (1, 1)
    # orthogonal complement, cleared to a primitive integer vector
    assert t_col in ((1, -1), (-1, 1))


def test_restrict_toy_oracle():
    fam = invariant_family(build_root_system("B", 2))
    res = restrict_family(fam, toy_config())
    assert res.selected == (0,)
    assert res.d == 1
    assert res.restricted.polys[0] == parse_polynomial("20*x1^2", ("x1",))
    assert res.adapted[0] == parse_polynomial("20*t1^2 + 20*x1^2", ("t1", "x1"))
    assert res.restricted.degrees == (2,)
    point, value = res.restricted.certificate
    assert value != 0


def test_restrict_explicit_selection_gives_degree_two_fiber():
    fam = invariant_family(build_root_system("B", 2))
    res = restrict_family(fam, toy_config(), selection=(1,))
    assert res.restricted.degrees == (4,)
    assert res.d == 2
    assert res.restricted.polys[0] == parse_polynomial("68*x1^4", ("x1",))
    assert res.adapted[0] == parse_polynomial(
        "68*t1^4 + 192*t1^2*x1^2 + 68*x1^4", ("t1", "x1")
    )


def test_restrict_split_is_identity():
    fam = invariant_family(build_root_system("A", 2))
    res = restrict_family(fam, split_config("A", 2))
    assert res.t_vars == ()
    assert res.selected == (0, 1)
    assert res.d == 1
    assert res.restricted.polys == fam.polys


def test_restrict_rejects_mismatched_family():
    fam = invariant_family(build_root_system("A", 2))
    with pytest.raises(RestrictionError):
        restrict_family(fam, toy_config())


def test_restrict_rejects_incompatible_embedding():
    # a basis change that does not rescale the invariant form breaks
    # little-group invariance of the restricted polynomials
    fam = invariant_family(build_root_system("A", 2))
    cfg = PairConfig(
        "A", 2, "A", 2,
        ((Fraction(1), Fraction(0)), (Fraction(1), Fraction(1))),
    )
    with pytest.raises(RestrictionError):
        restrict_family(fam, cfg)


def test_rank_d():
    assert rank_d((2, 4), (2, 4)) == 1
    assert rank_d((4,), (2,)) == 2
    assert rank_d((2, 6, 8, 12), (2, 4, 6, 8)) == 3
    with pytest.raises(RestrictionError):
        rank_d((3,), (2,))


def test_selection_validation():
    fam = invariant_family(build_root_system("B", 2))
    with pytest.raises(RestrictionError):
        restrict_family(fam, toy_config(), selection=(0, 1))
    with pytest.raises(RestrictionError):
        restrict_family(fam, toy_config(), selection=(5,))
    with pytest.raises(ValueError):
        restrict_family(fam, toy_config(), selection="last")


@pytest.mark.parametrize("key", [("A", 2), ("B", 2), ("BC", 2)])
def test_surjectivity_holds_for_splits(key):
    rs = build_root_system(*key)
    fam = invariant_family(rs)
    report = surjectivity_check(fam, degree_bound=8)
    assert report.ok and report.failing_degree is None


def test_surjectivity_fails_for_quartic_only():
    # x^4 alone cannot produce the degree-2 invariant of the sign group
    rs = build_root_system("A", 1)
    fam = InvariantFamily(
        polys=(parse_polynomial("x1^4", ("x1",)),), degrees=(4,), group=rs
    )
    report = surjectivity_check(fam, degree_bound=12)
    assert not report.ok
    assert report.failing_degree == 2


def test_surjectivity_fails_via_restriction():
    fam = invariant_family(build_root_system("B", 2))
    res = restrict_family(fam, toy_config(), selection=(1,))
    report = surjectivity_check(res.restricted, degree_bound=12)
    assert not report.ok and report.failing_degree == 2


def test_surjectivity_toy_selection_passes():
    fam = invariant_family(build_root_system("B", 2))
    res = restrict_family(fam, toy_config())
    report = surjectivity_check(res.restricted, degree_bound=12)
    assert report.ok
