from __future__ import annotations

from fractions import Fraction

import pytest

from chevfiber.polyring import (
    Polynomial,
    jacobian_det,
    jacobian_matrix,
    parse_polynomial,
    polynomial_det,
)


def P(text: str, variables=("x1", "x2")) -> Polynomial:
    return parse_polynomial(text, variables)


def test_parse_roundtrip_canonical_order():
    p = P("3*x2^2 - x1*x2 + 2*x1^2 + 1/2")
    assert p.to_text() == "2*x1^2 - 1*x1^1*x2^1 + 3*x2^2 + 1/2"
    assert parse_polynomial(p.to_text(), ("x1", "x2")) == p


def test_zero_and_constant():
    z = Polynomial.zero(("x1",))
    assert z.is_zero and z.to_text() == "0"
    assert z.degree() == -1
    c = Polynomial.constant(("x1",), Fraction(-7, 3))
    assert c.to_text() == "-7/3"
    assert c.homogeneous_degree() == 0


def test_arithmetic_is_exact():
    # (1/3 + 1/3 + 1/3) x = x with no float drift
    x = Polynomial.variable(("x",), "x")
    third = Fraction(1, 3) * x
    assert third + third + third == x
    assert (x - x).is_zero


def test_product_and_power():
    x1 = Polynomial.variable(("x1", "x2"), "x1")
    x2 = Polynomial.variable(("x1", "x2"), "x2")
    assert (x1 + x2) ** 2 == x1**2 + 2 * x1 * x2 + x2**2
    assert ((x1 - x2) * (x1 + x2)).to_text() == "1*x1^2 - 1*x2^2"


def test_eval_oracle():
    # x^4 + t^2 x^2 at (t, x) = (1, 2): 16 + 4 = 20
    p = parse_polynomial("x^4 + t^2*x^2", ("t", "x"))
    assert p.eval([1.0, 2.0]) == pytest.approx(20.0)
    assert p.eval_exact([1, 2]) == 20


def test_eval_complex():
    p = parse_polynomial("x^2 + 1", ("x",))
    assert abs(p.eval([1j])) < 1e-15


def test_eval_matches_exact_on_rationals():
    p = P("2*x1^3*x2 - 5/7*x1*x2^2 + 4")
    pt = (Fraction(3, 2), Fraction(-1, 3))
    exact = p.eval_exact(pt)
    approx = p.eval([float(pt[0]), float(pt[1])])
    assert abs(approx - float(exact)) < 1e-12 * max(1.0, abs(float(exact)))


def test_derivative_leibniz():
    f = P("x1^2*x2 + 3*x2^3")
    g = P("x1*x2 - 2")
    lhs = (f * g).derivative("x1")
    rhs = f.derivative("x1") * g + f * g.derivative("x1")
    assert lhs == rhs


def test_derivative_euler_identity():
    # homogeneous p of degree d satisfies sum x_i dp/dx_i = d p
    p = P("x1^4 + 2*x1^2*x2^2 + x2^4")
    assert p.homogeneous_degree() == 4
    x1 = Polynomial.variable(("x1", "x2"), "x1")
    x2 = Polynomial.variable(("x1", "x2"), "x2")
    assert x1 * p.derivative("x1") + x2 * p.derivative("x2") == 4 * p


def test_derivative_finite_difference():
    p = P("x1^3*x2^2 - 7*x1*x2")
    h = 1e-6
    at = [0.7, -1.3]
    fd = (p.eval([at[0] + h, at[1]]) - p.eval([at[0] - h, at[1]])) / (2 * h)
    assert fd == pytest.approx(p.derivative("x1").eval(at), rel=1e-6)


def test_homogeneous_degree():
    assert P("x1^2 + x2^2").homogeneous_degree() == 2
    assert P("x1^2 + x2").homogeneous_degree() is None
    with pytest.raises(ValueError):
        Polynomial.zero(("x1",)).homogeneous_degree()


def test_restrict_zero():
    p = parse_polynomial("x^4 + t^2*x^2 + 5*t", ("t", "x"))
    q = p.restrict_zero(["t"])
    assert q.variables == ("x",)
    assert q.to_text() == "1*x^4"
    with pytest.raises(ValueError):
        p.restrict_zero(["y"])


def test_substitute_linear_change():
    # u1 = t + x, u2 = -t + x turns u1^2 + u2^2 into 2t^2 + 2x^2
    p = P("x1^2 + x2^2")
    t = Polynomial.variable(("t", "x"), "t")
    x = Polynomial.variable(("t", "x"), "x")
    q = p.substitute({"x1": t + x, "x2": -t + x})
    assert q == parse_polynomial("2*t^2 + 2*x^2", ("t", "x"))


def test_substitute_requires_all_used_variables():
    p = P("x1 + x2")
    t = Polynomial.variable(("t",), "t")
    with pytest.raises(ValueError):
        p.substitute({"x1": t})


def test_variable_mismatch_rejected():
    a = Polynomial.variable(("x",), "x")
    b = Polynomial.variable(("y",), "y")
    with pytest.raises(ValueError):
        a + b


def test_jacobian_det_power_sums_a2_oracle():
    # p2 = x1^2 + x2^2 composed with the trace-zero slice, p3 likewise:
    # J = det [[2x1, 2x2], [3x1^2 - 3x2^2, -6x1x2]] = -6x1^2*x2 - 6x2^3 ... computed exactly
    p2 = P("2*x1^2 + 2*x1*x2 + 2*x2^2")
    p3 = P("-3*x1^2*x2 - 3*x1*x2^2")
    j = jacobian_det([p2, p3], ["x1", "x2"])
    # antisymmetric under swapping x1, x2 up to sign of the alternating factor
    sw = j.substitute(
        {
            "x1": Polynomial.variable(("x1", "x2"), "x2"),
            "x2": Polynomial.variable(("x1", "x2"), "x1"),
        }
    )
    assert sw == -1 * j
    assert j.homogeneous_degree() == 1 + 2  # sum of (deg - 1) over the family


def test_jacobian_det_diagonal_oracle():
    p = [parse_polynomial("x1^2", ("x1", "x2")), parse_polynomial("x2^3", ("x1", "x2"))]
    j = jacobian_det(p, ["x1", "x2"])
    assert j == parse_polynomial("6*x1*x2^2", ("x1", "x2"))


def test_jacobian_matrix_shape():
    p2 = P("x1^2 + x2^2")
    m = jacobian_matrix([p2], ["x1", "x2"])
    assert len(m) == 1 and len(m[0]) == 2
    assert m[0][0] == P("2*x1")


def test_polynomial_det_matches_cofactor_3x3():
    vs = ("x1", "x2")
    entries = [
        ["x1", "x2", "1"],
        ["2*x1", "x1*x2", "0"],
        ["x2", "3", "x1"],
    ]
    m = [[parse_polynomial(e, vs) for e in row] for row in entries]
    det = polynomial_det(m)
    # cofactor expansion along the first row, assembled exactly
    def minor(i, j):
        rows = [r for k, r in enumerate(m) if k != i]
        return [
            [e for l, e in enumerate(row) if l != j]
            for row in rows
        ]

    def det2(mm):
        return mm[0][0] * mm[1][1] - mm[0][1] * mm[1][0]

    exp = m[0][0] * det2(minor(0, 0)) - m[0][1] * det2(minor(0, 1)) + m[0][2] * det2(minor(0, 2))
    assert det == exp


def test_pow_zero_and_rejections():
    x = Polynomial.variable(("x",), "x")
    assert (x**0).to_text() == "1"
    with pytest.raises(ValueError):
        x ** (-1)
    with pytest.raises(ValueError):
        parse_polynomial("", ("x",))
