"""Normal affine semigroup rings presented combinatorially.

A ring R = k[S] is specified by a full-rank lattice L inside Z^d together
with the facet functionals of a pointed full-dimensional rational cone C;
the semigroup is the set of lattice points of C.  Facets stand in for the
height-one primes, so membership tests and facet pairings are the only ring
theory ever needed.

Specs are immutable; the characteristic p is a computation parameter passed
to the Frobenius machinery, never part of the ring identity.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .geometry import affine_rank, dot, enumerate_vertices, matrix_rank, solve_square
from .linalg import IntMat, hermite_normal_form


class RingFormatError(ValueError):
    """Raised when a ring definition document cannot be parsed."""


@dataclass(frozen=True)
class Lattice:
    """Full-rank sublattice of Z^d, rows of ``basis`` are the generators."""

    basis: IntMat

    @property
    def dim(self) -> int:
        return self.basis.rows

    def covolume(self) -> int:
        return abs(self.basis.det())

    def coefficients_of(self, u):
        """Coordinates of u in the basis, or None when u is not in L."""
        if len(u) != self.dim:
            raise ValueError(f"expected a vector of length {self.dim}")
        sol = solve_square(self.basis.transpose().to_rows(), [Fraction(x) for x in u])
        if sol is None or any(c.denominator != 1 for c in sol):
            return None
        return tuple(int(c) for c in sol)

    def contains_point(self, u) -> bool:
        return self.coefficients_of(u) is not None

    def point_from_coefficients(self, c):
        return tuple(
            sum(ci * self.basis.at(i, j) for i, ci in enumerate(c))
            for j in range(self.dim)
        )


@dataclass(frozen=True)
class FacetFunctional:
    """Rational covector cutting out one facet of the cone; integer-valued
    and primitive on the lattice for valid specs."""

    covector: tuple[Fraction, ...]

    def pairing(self, u) -> Fraction:
        if len(u) != len(self.covector):
            raise ValueError("dimension mismatch in facet pairing")
        return dot(self.covector, u)


@dataclass(frozen=True)
class RingSpec:
    name: str
    lattice: Lattice
    facets: tuple[FacetFunctional, ...]
    family: str | None = field(default=None, compare=False)
    params: tuple[int, ...] = field(default=(), compare=False)

    @property
    def dim(self) -> int:
        return self.lattice.dim

    @property
    def num_facets(self) -> int:
        return len(self.facets)


def pairing_matrix(spec: RingSpec) -> IntMat:
    """Integer matrix G with G[i][j] = facet_i(basis row j).

    Columns are the principal divisors of the lattice basis, so the column
    span is the full group of principal divisors.
    """
    rows = []
    for f in spec.facets:
        row = []
        for j in range(spec.dim):
            v = f.pairing(spec.lattice.basis.row(j))
            if v.denominator != 1:
                raise ValueError("facet functional is not integer-valued on L")
            row.append(int(v))
        rows.append(row)
    if not rows:
        return IntMat.zeros(0, spec.dim)
    return IntMat.from_rows(rows)


def unit_region_halfspaces(spec: RingSpec):
    """H-form of {u : 0 <= facet_i(u) <= 1 for all i}; bounded exactly when
    the cone is pointed."""
    hs = []
    for f in spec.facets:
        hs.append((tuple(-c for c in f.covector), Fraction(0)))
        hs.append((f.covector, Fraction(1)))
    return hs


@lru_cache(maxsize=None)
def unit_region_vertices(spec: RingSpec):
    return tuple(enumerate_vertices(unit_region_halfspaces(spec), spec.dim))


def validate(spec: RingSpec) -> list[str]:
    """Check every well-formedness invariant; violations come back as data.

    An empty list means the ring description is a valid pointed
    full-dimensional cone over a full-rank lattice with primitive,
    irredundant, integer-valued facet functionals.
    """
    violations = []
    d = spec.dim
    if spec.lattice.basis.cols != d or spec.lattice.basis.det() == 0:
        return ["lattice basis not full rank"]
    for i, f in enumerate(spec.facets):
        if len(f.covector) != d:
            return [f"facet {i} has wrong dimension"]

    integral = []
    for i, f in enumerate(spec.facets):
        pairings = [f.pairing(spec.lattice.basis.row(j)) for j in range(d)]
        if any(v.denominator != 1 for v in pairings):
            violations.append(f"functional not integer-valued on L (facet {i})")
            integral.append(None)
            continue
        integral.append([int(v) for v in pairings])

    for i, pairings in enumerate(integral):
        if pairings is None:
            continue
        # content of the pairing vector via a Hermite reduction of its
        # transpose; contents > 1 mean the functional is a proper multiple
        # of another functional that is still integer-valued on L
        h, _ = hermite_normal_form(IntMat.from_rows([[v] for v in pairings]))
        content = h.at(0, 0) if d else 0
        if content != 1:
            violations.append(f"functional not primitive on L (facet {i})")

    for i in range(len(spec.facets)):
        for j in range(i + 1, len(spec.facets)):
            if spec.facets[i].covector == spec.facets[j].covector:
                violations.append(f"duplicate facet ({i}, {j})")

    if matrix_rank([f.covector for f in spec.facets]) < d:
        violations.append("cone not pointed")
        return violations

    vertices = unit_region_vertices(spec)
    if affine_rank(vertices) < d:
        violations.append("cone not full-dimensional")
        return violations
    for i, f in enumerate(spec.facets):
        on_facet = [v for v in vertices if f.pairing(v) == 0]
        if affine_rank(on_facet) != d - 1:
            violations.append(f"redundant facet (facet {i})")
    return violations


def contains(spec: RingSpec, u) -> bool:
    """Semigroup membership: u lies in L and pairs nonnegatively with every
    facet."""
    if len(u) != spec.dim:
        raise ValueError(f"expected a vector of length {spec.dim}")
    if not spec.lattice.contains_point(u):
        return False
    return all(f.pairing(u) >= 0 for f in spec.facets)


def _frac_row(entries):
    return tuple(Fraction(x) for x in entries)


def _coordinate_facets(d: int) -> tuple[FacetFunctional, ...]:
    return tuple(
        FacetFunctional(_frac_row(1 if i == j else 0 for i in range(d)))
        for j in range(d)
    )


def builtin_ring(family: str, *params: int) -> RingSpec:
    """Construct one of the built-in families.

    polynomial(d)        L = Z^d, coordinate facets.
    an_singularity(n)    k[x,y,z]/(xy - z^n) as the monomial ring
                         k[x^n, xy, y^n]; exponent lattice a = b mod n.
    veronese(n)          n-th Veronese of k[x,y]; exponent lattice
                         a + b = 0 mod n.
    quadric_cone         k[w,x,y,z]/(wx - yz), the Segre cone in Z^3.
    """
    if family == "polynomial":
        (d,) = params
        if d < 1:
            raise ValueError("polynomial ring needs dimension >= 1")
        spec = RingSpec(
            name=f"poly:{d}",
            lattice=Lattice(IntMat.identity(d)),
            facets=_coordinate_facets(d),
            family="polynomial",
            params=(d,),
        )
    elif family == "an_singularity":
        (n,) = params
        if n < 2:
            raise ValueError("an_singularity needs n >= 2")
        spec = RingSpec(
            name=f"an:{n}",
            lattice=Lattice(IntMat.from_rows([[1, 1], [0, n]])),
            facets=_coordinate_facets(2),
            family="an_singularity",
            params=(n,),
        )
    elif family == "veronese":
        (n,) = params
        if n < 2:
            raise ValueError("veronese needs n >= 2")
        spec = RingSpec(
            name=f"veronese:{n}",
            lattice=Lattice(IntMat.from_rows([[1, n - 1], [0, n]])),
            facets=_coordinate_facets(2),
            family="veronese",
            params=(n,),
        )
    elif family == "quadric_cone":
        if params:
            raise ValueError("quadric_cone takes no parameters")
        spec = RingSpec(
            name="quadric",
            lattice=Lattice(IntMat.identity(3)),
            facets=tuple(
                FacetFunctional(_frac_row(row))
                for row in ([1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, -1])
            ),
            family="quadric_cone",
            params=(),
        )
    else:
        raise ValueError(f"unknown ring family {family!r}")
    problems = validate(spec)
    if problems:
        raise AssertionError(f"builtin ring failed validation: {problems}")
    return spec


_FAMILY_ALIASES = {
    "poly": "polynomial",
    "polynomial": "polynomial",
    "an": "an_singularity",
    "an_singularity": "an_singularity",
    "veronese": "veronese",
    "ver": "veronese",
    "quadric": "quadric_cone",
    "quadric_cone": "quadric_cone",
}


def parse_builtin(token: str) -> RingSpec:
    """Resolve CLI-style addresses like an:4, veronese:3, poly:2, quadric."""
    name, _, arg = token.partition(":")
    family = _FAMILY_ALIASES.get(name.strip())
    if family is None:
        raise ValueError(f"unknown builtin ring {token!r}")
    if arg:
        try:
            params = tuple(int(x) for x in arg.split(","))
        except ValueError:
            raise ValueError(f"bad parameters in builtin ring {token!r}") from None
    else:
        params = ()
    if family == "quadric_cone":
        return builtin_ring(family)
    if len(params) != 1:
        raise ValueError(f"builtin ring {token!r} needs exactly one parameter")
    return builtin_ring(family, *params)


def ring_to_dict(spec: RingSpec) -> dict:
    """Plain-data form of a spec, the on-disk ring definition format."""
    return {
        "name": spec.name,
        "dim": spec.dim,
        "lattice_basis": spec.lattice.basis.to_rows(),
        "facets": [[str(c) for c in f.covector] for f in spec.facets],
    }


def ring_from_dict(data: dict) -> RingSpec:
    try:
        name = str(data["name"])
        d = int(data["dim"])
        basis_rows = data["lattice_basis"]
        facet_rows = data["facets"]
        if len(basis_rows) != d or any(len(r) != d for r in basis_rows):
            raise RingFormatError("lattice_basis must be a d-by-d integer matrix")
        basis = IntMat.from_rows([[int(x) for x in r] for r in basis_rows])
        facets = []
        for r in facet_rows:
            if len(r) != d:
                raise RingFormatError("facet covector has wrong length")
            facets.append(FacetFunctional(tuple(Fraction(str(x)) for x in r)))
    except RingFormatError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise RingFormatError(f"malformed ring definition: {exc}") from exc
    return RingSpec(name=name, lattice=Lattice(basis), facets=tuple(facets))


def load_ring_file(path: str) -> RingSpec:
    """Read a JSON ring definition; validity is the caller's concern."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise RingFormatError(f"cannot read ring file {path}: {exc}") from exc
    return ring_from_dict(data)


def dump_ring_file(spec: RingSpec, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(ring_to_dict(spec), fh, indent=2, sort_keys=True)
        fh.write("\n")


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True
