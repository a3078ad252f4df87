"""Weil divisors on the toric spectrum and the divisor class group.

Divisors are integer vectors indexed by the cone facets (the torus-invariant
height-one primes).  The class group is the cokernel of the principal-divisor
map, computed once per ring through a Smith normal form whose unimodular
certificate doubles as the projection onto normal-form coordinates.  Classes
are always kept in normal form so that equality of classes is equality of
tuples; the Frobenius machinery counts summands by exactly this comparison.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

from .linalg import IntMat, smith_normal_form
from .rings import RingSpec, pairing_matrix

ENUMERATION_CAP = 2**24


class CapExceededError(RuntimeError):
    """An enumeration would exceed the configured cap; raise it with the
    --cap flag or the TORICFSIG_CAP environment variable."""


@dataclass(frozen=True)
class WeilDivisor:
    coeffs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))

    def __len__(self):
        return len(self.coeffs)

    def __add__(self, other: "WeilDivisor") -> "WeilDivisor":
        if len(self) != len(other):
            raise ValueError("divisors live on different facet sets")
        return WeilDivisor(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "WeilDivisor") -> "WeilDivisor":
        return self + (-other)

    def __neg__(self) -> "WeilDivisor":
        return WeilDivisor(tuple(-a for a in self.coeffs))

    def __mul__(self, k: int) -> "WeilDivisor":
        return WeilDivisor(tuple(k * a for a in self.coeffs))

    __rmul__ = __mul__


@dataclass(frozen=True)
class ClassElement:
    """Class-group element in normal form: free coordinates over Z followed
    by torsion residues reduced into [0, d_i)."""

    free: tuple[int, ...]
    torsion: tuple[int, ...]

    @property
    def is_zero(self) -> bool:
        return not any(self.free) and not any(self.torsion)


@dataclass(frozen=True)
class ClassGroupData:
    """Cl(R) = Z^free_rank + sum of Z/d_i, with the projection matrix taking
    a divisor coefficient vector to its normal-form coordinates (free rows
    first, then one row per invariant factor)."""

    free_rank: int
    invariant_factors: tuple[int, ...]
    projection: IntMat

    @property
    def torsion_cardinality(self) -> int:
        return math.prod(self.invariant_factors)

    def zero(self) -> ClassElement:
        return ClassElement(
            (0,) * self.free_rank, (0,) * len(self.invariant_factors)
        )

    def reduce(self, free, torsion) -> ClassElement:
        return ClassElement(
            tuple(free),
            tuple(t % d for t, d in zip(torsion, self.invariant_factors)),
        )

    def add(self, a: ClassElement, b: ClassElement) -> ClassElement:
        return self.reduce(
            (x + y for x, y in zip(a.free, b.free)),
            (x + y for x, y in zip(a.torsion, b.torsion)),
        )

    def neg(self, a: ClassElement) -> ClassElement:
        return self.reduce((-x for x in a.free), (-x for x in a.torsion))

    def scale(self, k: int, a: ClassElement) -> ClassElement:
        return self.reduce((k * x for x in a.free), (k * x for x in a.torsion))


def principal_divisor(spec: RingSpec, u) -> WeilDivisor:
    """Divisor of the monomial with exponent u: the vector of facet pairings."""
    if spec.lattice.coefficients_of(u) is None:
        raise ValueError(f"{tuple(u)} is not a lattice point of {spec.name}")
    return WeilDivisor(tuple(int(f.pairing(u)) for f in spec.facets))


@lru_cache(maxsize=None)
def class_group(spec: RingSpec) -> ClassGroupData:
    """Divisor classes modulo principal divisors, via the Smith normal form
    of the pairing matrix.

    The certificate row operations sort the coefficient space into killed
    coordinates (unit factors), cyclic coordinates, and free coordinates;
    keeping the corresponding rows of the certificate gives a projection with
    projection(principal divisor) = 0 by construction.
    """
    g = pairing_matrix(spec)
    dec = smith_normal_form(g)
    diag = dec.diagonal()
    rank = sum(1 for d in diag if d)
    free_rows = list(range(rank, g.rows))
    torsion_rows = [i for i in range(rank) if diag[i] > 1]
    proj_rows = [dec.U.row(i) for i in free_rows + torsion_rows]
    projection = (
        IntMat.from_rows(proj_rows) if proj_rows else IntMat.zeros(0, g.rows)
    )
    return ClassGroupData(
        free_rank=len(free_rows),
        invariant_factors=tuple(diag[i] for i in torsion_rows),
        projection=projection,
    )


def class_of(cg: ClassGroupData, divisor: WeilDivisor) -> ClassElement:
    """Normal-form class of a divisor; a group homomorphism in the divisor."""
    coords = cg.projection.mul_vector(divisor.coeffs)
    return cg.reduce(coords[: cg.free_rank], coords[cg.free_rank :])


def order_of_class(cg: ClassGroupData, c: ClassElement):
    """Least k >= 1 with k*c = 0, or None for elements of infinite order."""
    if any(c.free):
        return None
    order = 1
    for t, d in zip(c.torsion, cg.invariant_factors):
        order = math.lcm(order, d // math.gcd(t, d))
    return order


def torsion_elements(cg: ClassGroupData, cap: int = ENUMERATION_CAP) -> list[ClassElement]:
    """All torsion classes, ordered lexicographically by residue tuple."""
    if cg.torsion_cardinality > cap:
        raise CapExceededError(
            f"torsion subgroup has {cg.torsion_cardinality} elements, "
            f"over the cap of {cap}"
        )
    zero_free = (0,) * cg.free_rank
    return [
        ClassElement(zero_free, residues)
        for residues in itertools.product(*(range(d) for d in cg.invariant_factors))
    ]


def divisorial_points(spec: RingSpec, divisor: WeilDivisor, box) -> list[tuple[int, ...]]:
    """Lattice points of the divisorial module R(D) inside a coordinate box.

    R(D) is spanned by the monomials u in L with facet_i(u) >= -a_i; the box
    is one half-open (lo, hi) pair per coordinate.
    """
    if len(divisor) != spec.num_facets:
        raise ValueError("divisor length does not match facet count")
    if len(box) != spec.dim:
        raise ValueError("box must give one (lo, hi) pair per coordinate")
    ranges = [range(int(lo), int(hi)) for lo, hi in box]
    out = []
    for u in itertools.product(*ranges):
        if spec.lattice.coefficients_of(u) is None:
            continue
        if all(
            f.pairing(u) >= -a for f, a in zip(spec.facets, divisor.coeffs)
        ):
            out.append(u)
    return out
