"""Root systems, Weyl groups, and invariant polynomial families.

Each system is realized in exactly rank-many rational coordinates so that
invariant families are square and Jacobians are well defined:

* B, C, D, BC, F4 live in orthonormal coordinates with the identity form.
* A1 is the pair {+-e1} with the identity form.
* A_n (n >= 2), G2, and E6 use simple-root coordinates, where the invariant
  form is the Gram matrix of the simple roots.  An orthonormal realization
  in rank-many rational coordinates does not exist for these types, but
  every quantity here only ever consults the form.

BC_n is the non-reduced system {+-e_i, +-2e_i, +-e_i +- e_j}; its Weyl group
and fundamental degrees coincide with those of B_n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from ._linalg import (
    Matrix,
    Vector,
    det,
    inverse,
    matmul,
    matvec,
    rank as matrix_rank,
    transpose,
)
from .polyring import Polynomial, jacobian_det

WEYL_CAP = 100_000


class ConstructionError(RuntimeError):
    """Raised when a requested algebraic object cannot be built."""


@dataclass(frozen=True)
class RootSystem:
    type_name: str
    rank: int
    variables: tuple[str, ...]
    simple_roots: Matrix
    roots: tuple[Vector, ...]
    form: Matrix

    def bilinear(self, u: Sequence, v: Sequence) -> Fraction:
        return sum(
            Fraction(a) * b for a, b in zip(u, matvec(self.form, [Fraction(x) for x in v]))
        )

    def reflect(self, v: Sequence, alpha: Vector) -> Vector:
        v = tuple(Fraction(x) for x in v)
        scale = 2 * self.bilinear(v, alpha) / self.bilinear(alpha, alpha)
        return tuple(x - scale * a for x, a in zip(v, alpha))

    def is_regular(self, v: Sequence) -> bool:
        return all(self.bilinear(alpha, v) != 0 for alpha in self.roots)

    def positive_roots(self) -> tuple[Vector, ...]:
        """Roots whose expansion over the simple roots is nonnegative."""
        sinv = inverse(transpose(self.simple_roots))
        out = []
        for r in self.roots:
            coeffs = matvec(sinv, r)
            if all(c >= 0 for c in coeffs):
                out.append(r)
        return tuple(out)


def _validate(type_name: str, rank: int) -> None:
    limits = {"A": 1, "B": 2, "C": 2, "D": 3, "BC": 1}
    if type_name in limits:
        if rank < limits[type_name]:
            raise ValueError(f"type {type_name} requires rank >= {limits[type_name]}")
        return
    fixed = {"G": 2, "F": 4, "E": 6}
    if type_name in fixed:
        if rank != fixed[type_name]:
            raise ValueError(f"type {type_name} is only supported at rank {fixed[type_name]}")
        return
    raise ValueError(f"unknown type {type_name!r}")


def fundamental_degrees(type_name: str, rank: int) -> tuple[int, ...]:
    """Degrees of a generating set of invariants, ascending with multiplicity."""
    _validate(type_name, rank)
    if type_name == "A":
        return tuple(range(2, rank + 2))
    if type_name in ("B", "C", "BC"):
        return tuple(range(2, 2 * rank + 1, 2))
    if type_name == "D":
        return tuple(sorted(list(range(2, 2 * rank - 1, 2)) + [rank]))
    if type_name == "G":
        return (2, 6)
    if type_name == "F":
        return (2, 6, 8, 12)
    return (2, 5, 6, 8, 9, 12)


def weyl_order(type_name: str, rank: int) -> int:
    return math.prod(fundamental_degrees(type_name, rank))


def _unit(n: int, i: int) -> Vector:
    return tuple(Fraction(int(j == i)) for j in range(n))


def _identity_form(n: int) -> Matrix:
    return tuple(_unit(n, i) for i in range(n))


def _chain_gram(n: int, extra: dict[tuple[int, int], Fraction] | None = None) -> Matrix:
    rows = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        rows[i][i] = Fraction(2)
        if i + 1 < n:
            rows[i][i + 1] = rows[i + 1][i] = Fraction(-1)
    for (i, j), v in (extra or {}).items():
        rows[i][j] = rows[j][i] = v
    return tuple(tuple(r) for r in rows)


def _simple_roots_and_form(type_name: str, rank: int) -> tuple[Matrix, Matrix]:
    n = rank
    e = lambda i: _unit(n, i)
    if type_name == "A":
        if n == 1:
            return (e(0),), _identity_form(1)
        return tuple(e(i) for i in range(n)), _chain_gram(n)
    if type_name in ("B", "BC"):
        simples = [
            tuple(a - b for a, b in zip(e(i), e(i + 1))) for i in range(n - 1)
        ] + [e(n - 1)]
        return tuple(simples), _identity_form(n)
    if type_name == "C":
        simples = [
            tuple(a - b for a, b in zip(e(i), e(i + 1))) for i in range(n - 1)
        ] + [tuple(2 * x for x in e(n - 1))]
        return tuple(simples), _identity_form(n)
    if type_name == "D":
        simples = [
            tuple(a - b for a, b in zip(e(i), e(i + 1))) for i in range(n - 1)
        ] + [tuple(a + b for a, b in zip(e(n - 2), e(n - 1)))]
        return tuple(simples), _identity_form(n)
    if type_name == "G":
        form = ((Fraction(2), Fraction(-3)), (Fraction(-3), Fraction(6)))
        return (e(0), e(1)), form
    if type_name == "F":
        half = Fraction(1, 2)
        a4 = (half, -half, -half, -half)
        simples = (
            tuple(a - b for a, b in zip(e(1), e(2))),
            tuple(a - b for a, b in zip(e(2), e(3))),
            e(3),
            a4,
        )
        return simples, _identity_form(4)
    # E6: nodes 1..6, bonds 1-3, 3-4, 4-5, 5-6 plus the branch 2-4
    gram = [[Fraction(0)] * 6 for _ in range(6)]
    for i in range(6):
        gram[i][i] = Fraction(2)
    for i, j in ((0, 2), (2, 3), (3, 4), (4, 5), (1, 3)):
        gram[i][j] = gram[j][i] = Fraction(-1)
    return tuple(e(i) for i in range(6)), tuple(tuple(r) for r in gram)


def build_root_system(type_name: str, rank: int) -> RootSystem:
    """Construct the full root set by reflection closure of the simple roots."""
    _validate(type_name, rank)
    simples, form = _simple_roots_and_form(type_name, rank)
    rs = RootSystem(
        type_name=type_name,
        rank=rank,
        variables=tuple(f"x{i + 1}" for i in range(rank)),
        simple_roots=simples,
        roots=(),
        form=form,
    )
    seen: set[Vector] = set(simples)
    queue = list(simples)
    while queue:
        r = queue.pop()
        for alpha in simples:
            image = rs.reflect(r, alpha)
            if image not in seen:
                seen.add(image)
                queue.append(image)
    if type_name == "BC":
        for r in list(seen):
            if rs.bilinear(r, r) == 1:
                seen.add(tuple(2 * x for x in r))
    roots = tuple(sorted(seen))
    return RootSystem(
        type_name=type_name,
        rank=rank,
        variables=rs.variables,
        simple_roots=simples,
        roots=roots,
        form=form,
    )


def simple_reflections(rs: RootSystem) -> tuple[Matrix, ...]:
    """Matrices of the reflections in the simple roots, acting on coordinates."""
    n = rs.rank
    out = []
    for alpha in rs.simple_roots:
        cols = [rs.reflect(_unit(n, i), alpha) for i in range(n)]
        out.append(transpose(tuple(cols)))
    return tuple(out)


def weyl_group(rs: RootSystem, cap: int = WEYL_CAP) -> tuple[Matrix, ...]:
    """Enumerate the Weyl group as coordinate matrices.

    Elements are found by closing the simple reflections under composition,
    tracked as permutations of the root list.  The count is cross-checked
    against the product of the fundamental degrees.
    """
    index = {r: k for k, r in enumerate(rs.roots)}
    gens = []
    for alpha in rs.simple_roots:
        gens.append(tuple(index[rs.reflect(r, alpha)] for r in rs.roots))
    identity = tuple(range(len(rs.roots)))
    seen = {identity}
    frontier = [identity]
    elements = [identity]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = tuple(g[k] for k in p)
                if q not in seen:
                    seen.add(q)
                    nxt.append(q)
                    elements.append(q)
                    if len(elements) > cap:
                        raise ConstructionError(
                            f"Weyl group exceeds enumeration cap {cap}"
                        )
        frontier = nxt
    expected = weyl_order(rs.type_name, rs.rank)
    if len(elements) != expected:
        raise ConstructionError(
            f"enumerated {len(elements)} elements, degree product gives {expected}"
        )

    simple_idx = [index[a] for a in rs.simple_roots]
    in_root_coords = all(
        rs.simple_roots[i] == _unit(rs.rank, i) for i in range(rs.rank)
    )
    matrices = []
    if in_root_coords:
        # columns of the matrix are the images of the basis vectors,
        # which are the simple roots themselves
        for p in elements:
            cols = tuple(rs.roots[p[i]] for i in simple_idx)
            matrices.append(transpose(cols))
    else:
        s = transpose(rs.simple_roots)
        sinv = inverse(s)
        for p in elements:
            img = transpose(tuple(rs.roots[p[i]] for i in simple_idx))
            matrices.append(matmul(img, sinv))
    return tuple(matrices)


def orbit_vectors(rs: RootSystem, v: Sequence) -> tuple[Vector, ...]:
    v = tuple(Fraction(x) for x in v)
    seen = {v}
    queue = [v]
    while queue:
        u = queue.pop()
        for alpha in rs.simple_roots:
            w = rs.reflect(u, alpha)
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return tuple(sorted(seen))


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for tail in _compositions(total - head, parts - 1):
            yield (head,) + tail


def orbit_sum_invariant(rs: RootSystem, v: Sequence, k: int) -> Polynomial:
    """Sum of B(w v, x)^k over the whole Weyl group, expanded exactly.

    Computed from the orbit of v, weighted by the stabilizer order, so the
    group itself is never enumerated.
    """
    if k < 1:
        raise ValueError("power must be positive")
    orbit = orbit_vectors(rs, v)
    order = weyl_order(rs.type_name, rs.rank)
    mult, rem = divmod(order, len(orbit))
    if rem:
        raise ConstructionError("orbit size does not divide the group order")
    n = rs.rank
    acc: dict[tuple[int, ...], Fraction] = {}
    for u in orbit:
        c = matvec(rs.form, u)
        for comp in _compositions(k, n):
            coeff = Fraction(math.factorial(k))
            zero = False
            for kj, cj in zip(comp, c):
                if kj:
                    if cj == 0:
                        zero = True
                        break
                    coeff *= cj**kj
                coeff /= math.factorial(kj)
            if zero:
                continue
            acc[comp] = acc.get(comp, Fraction(0)) + coeff
    poly = Polynomial(rs.variables, acc)
    return poly * mult


@dataclass(frozen=True)
class InvariantFamily:
    """A square system of algebraically independent invariants.

    `certificate` records a rational point together with the exact nonzero
    Jacobian determinant value there, which proves independence.  `group`
    is the root system the polynomials are invariant under, or None for
    hand-built families.
    """

    polys: tuple[Polynomial, ...]
    degrees: tuple[int, ...]
    group: RootSystem | None
    certificate: tuple[Vector, Fraction] | None = None

    @property
    def variables(self) -> tuple[str, ...]:
        return self.polys[0].variables

    def jacobian(self) -> Polynomial:
        """Exact symbolic Jacobian determinant of the family."""
        return jacobian_det(self.polys, self.variables)

    def eval(self, point: Sequence[complex]) -> list[complex]:
        return [p.eval(point) for p in self.polys]


def _regular_vectors(rs: RootSystem) -> Iterator[Vector]:
    j = 1
    while True:
        v = tuple(Fraction(j**i) for i in range(rs.rank))
        if rs.is_regular(v):
            yield v
        j += 1


def _test_points(n: int) -> list[Vector]:
    return [tuple(Fraction(s**i) for i in range(n)) for s in (2, 3, 5, 7, 11)]


def _jacobian_rank_at(polys: Sequence[Polynomial], variables, point) -> int:
    rows = [
        [p.derivative(x).eval_exact(point) for x in variables] for p in polys
    ]
    return matrix_rank(rows)


def invariant_family(rs: RootSystem, max_candidates: int = 25) -> InvariantFamily:
    """Build one invariant per fundamental degree, proved independent.

    For each degree the candidates are Weyl-orbit power sums of a fixed
    sequence of regular rational vectors; a candidate is accepted once the
    Jacobian of the partial family reaches full rank at one of a fixed list
    of rational test points.  Orbit sums of the simple roots serve as a
    fallback before giving up.
    """
    degrees = fundamental_degrees(rs.type_name, rs.rank)
    points = _test_points(rs.rank)
    polys: list[Polynomial] = []
    for target_rank, k in enumerate(degrees, start=1):
        candidates: list[Sequence] = []
        gen = _regular_vectors(rs)
        for _ in range(max_candidates):
            candidates.append(next(gen))
        candidates.extend(rs.simple_roots)
        accepted = False
        for v in candidates:
            u = orbit_sum_invariant(rs, v, k)
            if u.is_zero:
                continue
            trial = polys + [u]
            if any(
                _jacobian_rank_at(trial, rs.variables, p) == target_rank for p in points
            ):
                polys.append(u)
                accepted = True
                break
        if not accepted:
            raise ConstructionError(
                f"no independent degree-{k} invariant found for "
                f"{rs.type_name}{rs.rank}"
            )
    certificate = None
    for p in points:
        rows = [
            [q.derivative(x).eval_exact(p) for x in rs.variables] for q in polys
        ]
        value = det(rows)
        if value != 0:
            certificate = (p, value)
            break
    if certificate is None:
        raise ConstructionError("family passed rank tests but has no determinant certificate")
    return InvariantFamily(
        polys=tuple(polys), degrees=degrees, group=rs, certificate=certificate
    )
