"""Restriction of invariant families to a subspace with its own small group.

A PairConfig names an ambient root system, a little root system acting on a
subspace, and an embedding matrix whose columns express the subspace basis
in ambient coordinates.  Restriction substitutes adapted coordinates
u = [T | X](t; x), where T is an exact form-orthogonal complement of the
embedding, keeps a square subfamily whose restriction to t = 0 stays
algebraically independent, and certifies that independence at a rational
point.

The fiber degree d is the quotient of the products of the selected ambient
degrees by the little fundamental degrees; it must come out an integer.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ._linalg import (
    Matrix,
    Vector,
    clear_denominators,
    det,
    matvec,
    rank as matrix_rank,
)
from .polyring import Polynomial
from .rootsys import (
    InvariantFamily,
    RootSystem,
    build_root_system,
    fundamental_degrees,
    simple_reflections,
    weyl_group,
)


class RestrictionError(RuntimeError):
    """Raised when a pair configuration does not yield a valid restriction."""


@dataclass(frozen=True)
class PairConfig:
    ambient_type: str
    ambient_rank: int
    little_type: str
    little_rank: int
    embedding: Matrix  # ambient_rank rows, little_rank columns
    name: str = ""

    def __post_init__(self):
        fundamental_degrees(self.ambient_type, self.ambient_rank)
        fundamental_degrees(self.little_type, self.little_rank)
        if self.little_rank > self.ambient_rank:
            raise ValueError("little rank exceeds ambient rank")
        emb = tuple(tuple(Fraction(x) for x in row) for row in self.embedding)
        if len(emb) != self.ambient_rank or any(
            len(row) != self.little_rank for row in emb
        ):
            raise ValueError(
                f"embedding must be {self.ambient_rank} rows of {self.little_rank} entries"
            )
        if matrix_rank(emb) != self.little_rank:
            raise ValueError("embedding columns are linearly dependent")
        object.__setattr__(self, "embedding", emb)


_PAIR_KEYS = {
    "name",
    "ambient_type",
    "ambient_rank",
    "little_type",
    "little_rank",
    "embedding",
}


def parse_pair_config(text: str) -> PairConfig:
    """Parse the key: value pair-config format.

    Lines are `key: value`; `#` starts a comment.  The embedding value lists
    rows separated by `;`, each row whitespace-separated rational entries.
    An omitted embedding means the identity (equal ranks only).
    """
    data: dict[str, str] = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition(":")
        key = key.strip()
        if not sep or not value.strip():
            raise ValueError(f"malformed config line {raw!r}")
        if key not in _PAIR_KEYS:
            raise ValueError(f"unknown config key {key!r}")
        if key in data:
            raise ValueError(f"duplicate config key {key!r}")
        data[key] = value.strip()
    for required in ("ambient_type", "ambient_rank", "little_type", "little_rank"):
        if required not in data:
            raise ValueError(f"missing config key {required!r}")
    ambient_rank = int(data["ambient_rank"])
    little_rank = int(data["little_rank"])
    if "embedding" in data:
        rows = [r for r in data["embedding"].split(";")]
        embedding = tuple(
            tuple(Fraction(entry) for entry in row.split()) for row in rows
        )
    else:
        if ambient_rank != little_rank:
            raise ValueError("embedding may be omitted only when ranks agree")
        embedding = tuple(
            tuple(Fraction(int(i == j)) for j in range(little_rank))
            for i in range(ambient_rank)
        )
    return PairConfig(
        ambient_type=data["ambient_type"],
        ambient_rank=ambient_rank,
        little_type=data["little_type"],
        little_rank=little_rank,
        embedding=embedding,
        name=data.get("name", ""),
    )


def load_pair_config(path) -> PairConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_pair_config(fh.read())


def adapt_coordinates(
    config: PairConfig, form: Matrix
) -> tuple[tuple[str, ...], tuple[str, ...], Matrix]:
    """Split ambient coordinates into (t; x) along the embedded subspace.

    Returns (t_vars, x_vars, change) where change has the complement columns
    first and the embedding columns last, so ambient u = change @ (t; x).
    The complement is built by Gram-Schmidt against the invariant form and
    scaled to primitive integer vectors.
    """
    n, r = config.ambient_rank, config.little_rank
    columns: list[Vector] = [
        tuple(config.embedding[i][j] for i in range(n)) for j in range(r)
    ]

    def pairing(u, v):
        return sum(a * b for a, b in zip(u, matvec(form, v)))

    complement: list[Vector] = []
    basis = list(columns)
    for i in range(n):
        if len(complement) == n - r:
            break
        v = [Fraction(int(k == i)) for k in range(n)]
        for b in basis:
            coeff = pairing(v, b) / pairing(b, b)
            v = [x - coeff * y for x, y in zip(v, b)]
        if any(x != 0 for x in v):
            w = clear_denominators(v)
            complement.append(w)
            basis.append(w)
    if len(complement) != n - r:
        raise RestrictionError("could not complete a complement basis")
    t_vars = tuple(f"t{i + 1}" for i in range(n - r))
    x_vars = tuple(f"x{i + 1}" for i in range(r))
    ordered = complement + columns
    change = tuple(tuple(ordered[j][i] for j in range(n)) for i in range(n))
    return t_vars, x_vars, change


def rank_d(selected_degrees: Sequence[int], little_degrees: Sequence[int]) -> int:
    """Generic fiber count d = prod(selected) / prod(little); must divide."""
    num = 1
    for m in selected_degrees:
        num *= m
    den = 1
    for e in little_degrees:
        den *= e
    d, rem = divmod(num, den)
    if rem:
        raise RestrictionError(
            f"degree products {num}/{den} do not divide; the pair is inconsistent"
        )
    return d


@dataclass(frozen=True)
class Restriction:
    config: PairConfig
    ambient: InvariantFamily
    little: RootSystem
    t_vars: tuple[str, ...]
    x_vars: tuple[str, ...]
    change: Matrix
    selected: tuple[int, ...]
    adapted: tuple[Polynomial, ...]
    restricted: InvariantFamily
    d: int


def _substitution_images(
    ambient_vars: Sequence[str], change: Matrix, new_vars: Sequence[str]
) -> dict[str, Polynomial]:
    images = {}
    for i, u in enumerate(ambient_vars):
        terms = {}
        for j in range(len(new_vars)):
            if change[i][j] != 0:
                exp = tuple(int(k == j) for k in range(len(new_vars)))
                terms[exp] = change[i][j]
        images[u] = Polynomial(new_vars, terms)
    return images


def _apply_matrix(p: Polynomial, m: Matrix) -> Polynomial:
    return p.substitute(_substitution_images(p.variables, m, p.variables))


def _test_points(r: int) -> list[tuple[Fraction, ...]]:
    return [tuple(Fraction(s**i) for i in range(r)) for s in (2, 3, 5, 7, 11)]


def restrict_family(
    family: InvariantFamily,
    config: PairConfig,
    selection: str | Sequence[int] = "first-by-degree",
) -> Restriction:
    """Restrict an ambient family along a pair configuration.

    `selection` picks which ambient invariants survive: the default keeps,
    in ascending degree, the first little-rank many whose restrictions stay
    independent; an explicit index sequence (0-based into the family) is
    honored as given and must certify independence as a whole.
    """
    if family.group is None:
        raise RestrictionError("restriction needs a family with a root system attached")
    if (family.group.type_name, family.group.rank) != (
        config.ambient_type,
        config.ambient_rank,
    ):
        raise RestrictionError("family group does not match the config ambient type")
    little = build_root_system(config.little_type, config.little_rank)
    t_vars, x_vars, change = adapt_coordinates(config, family.group.form)
    new_vars = t_vars + x_vars
    images = _substitution_images(family.variables, change, new_vars)
    adapted_all = [p.substitute(images) for p in family.polys]
    restricted_all = [p.restrict_zero(t_vars) for p in adapted_all]

    r = config.little_rank
    points = _test_points(r)

    def rank_at(polys, point):
        rows = [[q.derivative(x).eval_exact(point) for x in x_vars] for q in polys]
        return matrix_rank(rows)

    if isinstance(selection, str):
        if selection != "first-by-degree":
            raise ValueError(f"unknown selection rule {selection!r}")
        chosen: list[int] = []
        for idx in range(len(family.polys)):
            if len(chosen) == r:
                break
            w = restricted_all[idx]
            if w.is_zero:
                continue
            trial = [restricted_all[i] for i in chosen] + [w]
            if any(rank_at(trial, p) == len(trial) for p in points):
                chosen.append(idx)
        if len(chosen) < r:
            raise RestrictionError(
                "restricted invariants stay dependent; the Jacobian vanishes "
                "identically on the subspace"
            )
    else:
        chosen = [int(i) for i in selection]
        if len(chosen) != r:
            raise RestrictionError(
                f"selection must pick exactly {r} invariants, got {len(chosen)}"
            )
        if any(i < 0 or i >= len(family.polys) for i in chosen):
            raise RestrictionError("selection index out of range")
        trial = [restricted_all[i] for i in chosen]
        if any(w.is_zero for w in trial):
            raise RestrictionError("a selected invariant restricts to zero")
        if all(rank_at(trial, p) < r for p in points):
            raise RestrictionError(
                "selected restrictions are dependent; the Jacobian vanishes "
                "identically on the subspace"
            )

    selected = tuple(chosen)
    w_polys = tuple(restricted_all[i] for i in selected)
    degrees = tuple(family.degrees[i] for i in selected)

    certificate = None
    for p in points:
        rows = [[q.derivative(x).eval_exact(p) for x in x_vars] for q in w_polys]
        value = det(rows)
        if value != 0:
            certificate = (p, value)
            break
    if certificate is None:
        raise RestrictionError(
            "restricted family passed rank tests but no determinant certificate exists"
        )

    for w in w_polys:
        for s in simple_reflections(little):
            if _apply_matrix(w, s) != w:
                raise RestrictionError(
                    "restricted invariant is not little-group invariant; "
                    "the embedding does not respect the little root system"
                )

    d = rank_d(degrees, fundamental_degrees(config.little_type, config.little_rank))
    restricted = InvariantFamily(
        polys=w_polys, degrees=degrees, group=little, certificate=certificate
    )
    return Restriction(
        config=config,
        ambient=family,
        little=little,
        t_vars=t_vars,
        x_vars=x_vars,
        change=change,
        selected=selected,
        adapted=tuple(adapted_all[i] for i in selected),
        restricted=restricted,
        d=d,
    )


@dataclass(frozen=True)
class SurjectivityReport:
    ok: bool
    failing_degree: int | None
    degree_bound: int


def _monomials(total: int, nvars: int) -> list[tuple[int, ...]]:
    if nvars == 1:
        return [(total,)]
    out = []
    for head in range(total + 1):
        for tail in _monomials(total - head, nvars - 1):
            out.append((head,) + tail)
    return out


def _product_exponents(degrees: Sequence[int], k: int) -> list[tuple[int, ...]]:
    """Exponent tuples a with sum a_i * degrees_i == k."""
    out: list[tuple[int, ...]] = []

    def rec(i: int, remaining: int, acc: list[int]):
        if i == len(degrees):
            if remaining == 0:
                out.append(tuple(acc))
            return
        step = degrees[i]
        for a in range(remaining // step + 1):
            rec(i + 1, remaining - a * step, acc + [a])

    rec(0, k, [])
    return out


def surjectivity_check(
    family: InvariantFamily,
    little: RootSystem | None = None,
    degree_bound: int = 12,
) -> SurjectivityReport:
    """Decide whether the family generates all little-group invariants.

    For every degree up to the bound, the space of invariants (Reynolds
    averages of monomials over the little Weyl group, computed exactly) must
    lie in the span of the degree-matched products of family members.
    Returns the first failing degree if any.
    """
    little = little or family.group
    if little is None:
        raise ValueError("no little root system available")
    variables = family.variables
    if len(variables) != little.rank:
        raise ValueError("family variable count does not match the little rank")
    group = weyl_group(little)
    images_per_w = [
        _substitution_images(variables, w, variables) for w in group
    ]
    power_cache: dict[tuple[int, int], Polynomial] = {}

    def family_power(i: int, a: int) -> Polynomial:
        key = (i, a)
        if key not in power_cache:
            power_cache[key] = family.polys[i] ** a
        return power_cache[key]

    for k in range(1, degree_bound + 1):
        monos = _monomials(k, len(variables))
        index = {e: i for i, e in enumerate(monos)}

        def vec(p: Polynomial) -> list[Fraction]:
            row = [Fraction(0)] * len(monos)
            for e, c in p.terms.items():
                row[index[e]] = c
            return row

        inv_rows = []
        scale = Fraction(1, len(group))
        for e in monos:
            mono = Polynomial(variables, {e: 1})
            acc = Polynomial.zero(variables)
            for images in images_per_w:
                acc = acc + mono.substitute(images)
            avg = acc * scale
            if not avg.is_zero:
                inv_rows.append(vec(avg))
        if not inv_rows:
            continue
        product_rows = []
        for a in _product_exponents(family.degrees, k):
            if all(x == 0 for x in a):
                continue
            prod = Polynomial.constant(variables, 1)
            for i, ai in enumerate(a):
                if ai:
                    prod = prod * family_power(i, ai)
            if not prod.is_zero:
                product_rows.append(vec(prod))
        base_rank = matrix_rank(product_rows) if product_rows else 0
        joint_rank = matrix_rank(product_rows + inv_rows)
        if joint_rank != base_rank:
            return SurjectivityReport(ok=False, failing_degree=k, degree_bound=degree_bound)
    return SurjectivityReport(ok=True, failing_degree=None, degree_bound=degree_bound)


def split_config(type_name: str, rank: int, name: str = "") -> PairConfig:
    """The identity pair: little system equal to the ambient one."""
    eye = tuple(
        tuple(Fraction(int(i == j)) for j in range(rank)) for i in range(rank)
    )
    return PairConfig(
        ambient_type=type_name,
        ambient_rank=rank,
        little_type=type_name,
        little_rank=rank,
        embedding=eye,
        name=name or f"{type_name}{rank}-split",
    )
