"""Exact multivariate polynomial arithmetic over the rationals.

A Polynomial carries an ordered tuple of variable names and a sparse mapping
from exponent vectors to Fraction coefficients.  Ring operations, formal
derivatives, restriction, and linear substitution are all exact.  Floating
point enters in exactly one place: `eval`, which converts each rational
coefficient to a float once, after all exact preprocessing, and accumulates
Horner-style variable by variable.

Canonical text form: terms in descending graded-lex order (total degree
first, then lexicographic comparison of exponent vectors), each term printed
as "coeff*x1^a1*x2^a2" with the coefficient a rational in lowest terms and
zero-exponent variables omitted.  A bare coefficient stands for the constant
term, and the zero polynomial prints as "0".
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

Exponent = tuple[int, ...]


def _coeff(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise TypeError(f"coefficient must be rational, got {type(value).__name__}")


class Polynomial:
    """Immutable sparse polynomial with Fraction coefficients."""

    __slots__ = ("variables", "terms")

    def __init__(self, variables: Sequence[str], terms: Mapping[Exponent, object] | None = None):
        object.__setattr__(self, "variables", tuple(variables))
        clean: dict[Exponent, Fraction] = {}
        for exp, c in (terms or {}).items():
            e = tuple(int(x) for x in exp)
            if len(e) != len(self.variables):
                raise ValueError("exponent length does not match variable count")
            if any(x < 0 for x in e):
                raise ValueError("negative exponent")
            c = _coeff(c)
            if c != 0:
                clean[e] = clean.get(e, Fraction(0)) + c
                if clean[e] == 0:
                    del clean[e]
        object.__setattr__(self, "terms", dict(clean))

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, variables: Sequence[str]) -> "Polynomial":
        return cls(variables, {})

    @classmethod
    def constant(cls, variables: Sequence[str], value) -> "Polynomial":
        return cls(variables, {tuple([0] * len(variables)): value})

    @classmethod
    def variable(cls, variables: Sequence[str], name: str) -> "Polynomial":
        variables = tuple(variables)
        idx = variables.index(name)
        exp = tuple(int(i == idx) for i in range(len(variables)))
        return cls(variables, {exp: 1})

    # -- basic queries -------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def homogeneous_degree(self) -> int | None:
        """Common total degree of all terms, or None if inhomogeneous."""
        if not self.terms:
            raise ValueError("the zero polynomial has no homogeneous degree")
        degrees = {sum(e) for e in self.terms}
        return degrees.pop() if len(degrees) == 1 else None

    def coefficient(self, exp: Exponent) -> Fraction:
        return self.terms.get(tuple(exp), Fraction(0))

    # -- ring operations -----------------------------------------------

    def _check_compatible(self, other: "Polynomial") -> None:
        if self.variables != other.variables:
            raise ValueError("polynomials live over different variable tuples")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(self.variables, other)
        self._check_compatible(other)
        acc = dict(self.terms)
        for e, c in other.terms.items():
            acc[e] = acc.get(e, Fraction(0)) + c
            if acc[e] == 0:
                del acc[e]
        return Polynomial(self.variables, acc)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other if isinstance(other, Polynomial) else -Fraction(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            f = _coeff(other)
            if f == 0:
                return Polynomial.zero(self.variables)
            return Polynomial(self.variables, {e: c * f for e, c in self.terms.items()})
        self._check_compatible(other)
        acc: dict[Exponent, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                acc[e] = acc.get(e, Fraction(0)) + c1 * c2
                if acc[e] == 0:
                    del acc[e]
        return Polynomial(self.variables, acc)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = Polynomial.constant(self.variables, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def __eq__(self, other):
        return (
            isinstance(other, Polynomial)
            and self.variables == other.variables
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.variables, frozenset(self.terms.items())))

    def __repr__(self):
        return f"Polynomial({self.to_text()!r})"

    # -- calculus ------------------------------------------------------

    def derivative(self, var: str) -> "Polynomial":
        """Exact formal partial derivative."""
        idx = self.variables.index(var)
        acc: dict[Exponent, Fraction] = {}
        for e, c in self.terms.items():
            if e[idx] == 0:
                continue
            new = list(e)
            new[idx] -= 1
            acc[tuple(new)] = c * e[idx]
        return Polynomial(self.variables, acc)

    # -- evaluation ----------------------------------------------------

    def eval(self, point: Sequence[complex]) -> complex:
        """Evaluate at a complex point by nested Horner accumulation."""
        if len(point) != len(self.variables):
            raise ValueError(
                f"point has {len(point)} coordinates, polynomial has {len(self.variables)} variables"
            )
        pt = [complex(z) for z in point]
        items = [(e, complex(c.numerator / c.denominator)) for e, c in self.terms.items()]
        return _horner(items, 0, pt)

    def eval_exact(self, point: Sequence) -> Fraction:
        """Evaluate at a rational point, exactly."""
        if len(point) != len(self.variables):
            raise ValueError("point dimension mismatch")
        pt = [Fraction(z) for z in point]
        items = list(self.terms.items())
        return _horner(items, 0, pt)

    # -- structural maps -------------------------------------------------

    def restrict_zero(self, dropped: Sequence[str]) -> "Polynomial":
        """Set the named variables to zero; the result lives over the rest."""
        dropped = tuple(dropped)
        for v in dropped:
            if v not in self.variables:
                raise ValueError(f"unknown variable {v!r}")
        keep = [i for i, v in enumerate(self.variables) if v not in dropped]
        acc: dict[Exponent, Fraction] = {}
        drop = [i for i in range(len(self.variables)) if i not in keep]
        for e, c in self.terms.items():
            if any(e[i] for i in drop):
                continue
            acc[tuple(e[i] for i in keep)] = c
        return Polynomial([self.variables[i] for i in keep], acc)

    def substitute(self, images: Mapping[str, "Polynomial"]) -> "Polynomial":
        """Replace every variable by its image polynomial (all over one tuple).

        Variables without an image are required to be absent from the terms.
        """
        targets = {p.variables for p in images.values()}
        if len(targets) != 1:
            raise ValueError("images must share one variable tuple")
        new_vars = targets.pop()
        missing = [v for v in self.variables if v not in images]
        power_cache: dict[tuple[str, int], Polynomial] = {}

        def power(var: str, n: int) -> Polynomial:
            key = (var, n)
            if key not in power_cache:
                power_cache[key] = images[var] ** n
            return power_cache[key]

        out = Polynomial.zero(new_vars)
        for e, c in self.terms.items():
            if any(e[self.variables.index(v)] for v in missing):
                raise ValueError("no image given for a variable in use")
            term = Polynomial.constant(new_vars, c)
            for i, v in enumerate(self.variables):
                if e[i] and v in images:
                    term = term * power(v, e[i])
            out = out + term
        return out

    # -- text form -------------------------------------------------------

    def sorted_terms(self) -> list[tuple[Exponent, Fraction]]:
        return sorted(self.terms.items(), key=lambda kv: (sum(kv[0]), kv[0]), reverse=True)

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        chunks = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                f"{v}^{k}" for v, k in zip(self.variables, e) if k
            )
            body = f"{abs(c)}" if not mono else f"{abs(c)}*{mono}"
            if not chunks:
                chunks.append(body if c > 0 else f"-{body}")
            else:
                chunks.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(chunks)


def _horner(items, i, point):
    """Evaluate grouped terms by Horner recursion on variable i."""
    if not items:
        return point[0] * 0 if point else 0
    if i == len(point):
        total = None
        for _, c in items:
            total = c if total is None else total + c
        return total
    groups: dict[int, list] = {}
    for e, c in items:
        groups.setdefault(e[i], []).append((e, c))
    z = point[i]
    acc = None
    for k in sorted(groups, reverse=True):
        sub = _horner(groups[k], i + 1, point)
        if acc is None:
            acc, prev = sub, k
        else:
            acc = acc * z ** (prev - k) + sub
            prev = k
    return acc * z ** prev


def parse_polynomial(text: str, variables: Sequence[str]) -> Polynomial:
    """Parse the canonical text form (signs, p/q coefficients, var^exp)."""
    variables = tuple(variables)
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty polynomial text")
    if s == "0":
        return Polynomial.zero(variables)
    # split into signed terms
    terms: dict[Exponent, Fraction] = {}
    i = 0
    sign = 1
    if s[0] in "+-":
        sign = -1 if s[0] == "-" else 1
        i = 1
    start = i
    pieces: list[tuple[int, str]] = []
    while i <= len(s):
        if i == len(s) or s[i] in "+-":
            pieces.append((sign, s[start:i]))
            if i < len(s):
                sign = -1 if s[i] == "-" else 1
                start = i + 1
        i += 1
    for sg, piece in pieces:
        if not piece:
            raise ValueError(f"malformed term in {text!r}")
        coeff = Fraction(sg)
        exp = [0] * len(variables)
        for factor in piece.split("*"):
            if not factor:
                raise ValueError(f"malformed term {piece!r}")
            name, _, power = factor.partition("^")
            if name in variables:
                exp[variables.index(name)] += int(power) if power else 1
            else:
                if power:
                    raise ValueError(f"unknown variable {name!r}")
                coeff *= Fraction(factor)
        e = tuple(exp)
        terms[e] = terms.get(e, Fraction(0)) + coeff
    return Polynomial(variables, terms)


def jacobian_matrix(polys: Sequence[Polynomial], xs: Sequence[str]) -> list[list[Polynomial]]:
    return [[p.derivative(x) for x in xs] for p in polys]


def polynomial_det(matrix: Sequence[Sequence[Polynomial]]) -> Polynomial:
    """Determinant of a polynomial matrix by subset expansion.

    Processes rows in order against column subsets, skipping zero entries
    early; suited to the small (r <= 6) matrices used here.
    """
    n = len(matrix)
    if n == 0:
        raise ValueError("empty matrix")
    variables = matrix[0][0].variables
    if any(len(row) != n for row in matrix):
        raise ValueError("matrix is not square")
    dp: dict[int, Polynomial] = {0: Polynomial.constant(variables, 1)}
    for r in range(n):
        ndp: dict[int, Polynomial] = {}
        for mask, det in dp.items():
            if det.is_zero:
                continue
            for j in range(n):
                if mask >> j & 1:
                    continue
                entry = matrix[r][j]
                if entry.is_zero:
                    continue
                piece = det * entry
                # assigning column j to row r inverts against every
                # previously chosen column with larger index
                if bin(mask >> (j + 1)).count("1") & 1:
                    piece = -piece
                key = mask | 1 << j
                ndp[key] = ndp[key] + piece if key in ndp else piece
        dp = ndp
        if not dp:
            return Polynomial.zero(variables)
    return dp.get((1 << n) - 1, Polynomial.zero(variables))


def jacobian_det(polys: Sequence[Polynomial], xs: Sequence[str]) -> Polynomial:
    """det [dp_i/dx_j], exact; polys and xs must have equal length."""
    if len(polys) != len(xs):
        raise ValueError("need as many polynomials as differentiation variables")
    if len(polys) > 6:
        raise ValueError("jacobian_det supports at most 6 polynomials")
    return polynomial_det(jacobian_matrix(polys, xs))
