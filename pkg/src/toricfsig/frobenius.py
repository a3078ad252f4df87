"""Decomposition of F^e_* R(D) into divisorial summands.

For q = p^e the pushforward of a divisorial module along e Frobenius
iterations splits into one summand per coset of L in (1/q)L, and the summand
attached to a coset representative w is the divisorial module of the divisor
with coefficients floor(facet_i(w) + a_i/q).  Everything here reduces to
integer arithmetic: writing w in lattice coordinates c/q, the coefficient is
(c . g_i + a_i) // q with g_i the integer facet pairings of the basis.

The coset space has q^d elements and dominates the runtime of the whole
package, so counting runs through numpy int64 in fixed-size chunks whenever
the intermediate values provably fit; a pure-Python big-integer path handles
the rest and doubles as the reference for partition-independence tests.
Chunked merging is commutative, so the resulting multiset is identical under
any partition of the coset index space.
"""

from __future__ import annotations

import itertools
import math
import os
import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .geometry import solve_square
from .linalg import IntMat
from .divisors import (
    ENUMERATION_CAP,
    CapExceededError,
    ClassElement,
    ClassGroupData,
    WeilDivisor,
    class_group,
    class_of,
    torsion_elements,
)
from .rings import RingSpec, is_prime, pairing_matrix, unit_region_vertices

CAP_ENV_VAR = "TORICFSIG_CAP"
DEFAULT_CHUNK = 1 << 19
_INT64_SAFE = 1 << 62


def resolve_cap(cap: int | None) -> int:
    """Explicit cap, else the environment override, else the default."""
    if cap is not None:
        return cap
    env = os.environ.get(CAP_ENV_VAR)
    if env:
        return int(env)
    return ENUMERATION_CAP


@dataclass(frozen=True)
class FrobeniusContext:
    """Characteristic p, iteration count e, and q = p^e."""

    p: int
    e: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"p = {self.p} is not prime")
        if self.e < 1:
            raise ValueError("e must be at least 1")

    @property
    def q(self) -> int:
        return self.p**self.e


@dataclass(frozen=True)
class FrobeniusDecomposition:
    spec: RingSpec
    ctx: FrobeniusContext
    base_divisor: WeilDivisor
    summands: dict[ClassElement, int]
    detail: tuple | None = None

    @property
    def rank(self) -> int:
        return self.ctx.q ** self.spec.dim


def _check_cap(count: int, cap: int, what: str) -> None:
    if count > cap:
        raise CapExceededError(
            f"{what} needs {count} points, over the cap of {cap}; "
            f"raise it with --cap or {CAP_ENV_VAR}"
        )


def _projection_split(cg: ClassGroupData):
    f = cg.free_rank
    rows = cg.projection.to_rows()
    return rows[:f], rows[f:], list(cg.invariant_factors)


def decompose(
    spec: RingSpec,
    divisor: WeilDivisor,
    ctx: FrobeniusContext,
    *,
    detail: bool = False,
    cap: int | None = None,
    chunk_size: int = DEFAULT_CHUNK,
) -> FrobeniusDecomposition:
    """Summand classes of F^e_* R(D), counted with multiplicity.

    The result maps each normal-form class to the number of cosets whose
    summand divisor lands in that class; multiplicities always add up to
    q^d.  With ``detail`` the per-coset pairs (representative, summand
    divisor) are kept, representatives being the lattice basis combinations
    with coefficients in [0, q)^d over q, in lexicographic coefficient
    order.
    """
    if len(divisor) != spec.num_facets:
        raise ValueError("divisor length does not match facet count")
    q = ctx.q
    d = spec.dim
    total = q**d
    _check_cap(total, resolve_cap(cap), f"coset enumeration for q^d = {q}^{d}")
    cg = class_group(spec)
    g = pairing_matrix(spec)

    if detail:
        summands, pairs = _decompose_pure(spec, divisor, q, cg, g, want_detail=True)
        return FrobeniusDecomposition(spec, ctx, divisor, summands, tuple(pairs))

    if cg.projection.rows == 0:
        # trivial class group: every summand projects to the empty normal
        # form, so the multiset is forced without enumerating
        return FrobeniusDecomposition(spec, ctx, divisor, {cg.zero(): total})

    if _coset_values_fit_int64(spec, divisor, q, cg, g):
        summands = _decompose_numpy(divisor, q, d, cg, g, total, chunk_size)
    else:
        summands, _ = _decompose_pure(spec, divisor, q, cg, g, want_detail=False)
    return FrobeniusDecomposition(spec, ctx, divisor, summands)


def _coset_values_fit_int64(spec, divisor, q, cg, g) -> bool:
    pairing_bound = 0
    for i in range(g.rows):
        row_sum = sum(abs(x) for x in g.row(i)) * (q - 1) + abs(divisor.coeffs[i])
        pairing_bound = max(pairing_bound, row_sum)
    floor_bound = pairing_bound // q + 1
    proj_bound = max(
        (sum(abs(x) for x in cg.projection.row(i)) for i in range(cg.projection.rows)),
        default=0,
    )
    return q**spec.dim < _INT64_SAFE and pairing_bound < _INT64_SAFE and (
        floor_bound * max(proj_bound, 1) < _INT64_SAFE
    )


def _decompose_numpy(divisor, q, d, cg, g, total, chunk_size) -> dict:
    gt = np.array(g.to_rows(), dtype=np.int64).T
    a = np.array(divisor.coeffs, dtype=np.int64)
    free_rows, torsion_rows, mods = _projection_split(cg)
    proj = np.array(free_rows + torsion_rows, dtype=np.int64).T
    mods_arr = np.array(mods, dtype=np.int64)
    nfree = len(free_rows)
    powers = np.array([q ** (d - 1 - j) for j in range(d)], dtype=np.int64)

    counts: dict[tuple, int] = {}
    for start in range(0, total, chunk_size):
        stop = min(start + chunk_size, total)
        idx = np.arange(start, stop, dtype=np.int64)
        c = (idx[:, None] // powers[None, :]) % q
        floors = (c @ gt + a) // q
        coords = floors @ proj
        if len(mods):
            coords[:, nfree:] %= mods_arr
        _tally_rows(coords, counts)
    out = {}
    for key in sorted(counts):
        out[ClassElement(tuple(key[:nfree]), tuple(key[nfree:]))] = counts[key]
    return out


def _tally_rows(coords, counts: dict) -> None:
    """Accumulate row multiplicities of an integer array into ``counts``.

    Class coordinates occupy a tiny value range, so pack each row into one
    mixed-radix key and histogram with bincount; fall back to row-unique
    when the packed range would be sparse.
    """
    n, k = coords.shape
    if n == 0:
        return
    mins = coords.min(axis=0)
    spans = (coords.max(axis=0) - mins + 1).tolist()
    span_total = math.prod(spans)
    if span_total <= 4 * n + 1024:
        strides = np.array(
            [math.prod(spans[j + 1 :]) for j in range(k)], dtype=np.int64
        )
        keys = (coords - mins) @ strides
        hist = np.bincount(keys, minlength=span_total)
        base = mins.tolist()
        for packed in np.nonzero(hist)[0].tolist():
            digits = []
            rem = packed
            for j in range(k):
                digits.append(base[j] + rem // int(strides[j]))
                rem %= int(strides[j])
            key = tuple(digits)
            counts[key] = counts.get(key, 0) + int(hist[packed])
    else:
        uniq, cnt = np.unique(coords, axis=0, return_counts=True)
        for row, c in zip(uniq.tolist(), cnt.tolist()):
            key = tuple(row)
            counts[key] = counts.get(key, 0) + c


def _decompose_pure(spec, divisor, q, cg, g, want_detail):
    d = spec.dim
    basis = spec.lattice.basis
    grows = g.to_rows()
    counts: dict[ClassElement, int] = {}
    detail = []
    for c in itertools.product(range(q), repeat=d):
        floors = tuple(
            (sum(cj * gi[j] for j, cj in enumerate(c)) + ai) // q
            for gi, ai in zip(grows, divisor.coeffs)
        )
        summand = WeilDivisor(floors)
        cls = class_of(cg, summand)
        counts[cls] = counts.get(cls, 0) + 1
        if want_detail:
            w = tuple(
                Fraction(sum(cj * basis.at(j, k) for j, cj in enumerate(c)), q)
                for k in range(d)
            )
            detail.append((w, summand))
    ordered = {}
    for cls in sorted(counts, key=lambda e: (e.free, e.torsion)):
        ordered[cls] = counts[cls]
    return ordered, detail


def free_rank(dec: FrobeniusDecomposition) -> int:
    """Multiplicity of the trivial class; this is a_e(R) when the base
    divisor is principal, and only then."""
    cg = class_group(dec.spec)
    if not class_of(cg, dec.base_divisor).is_zero:
        warnings.warn(
            "base divisor class is nonzero; free rank is not a_e(R) here",
            stacklevel=2,
        )
    return dec.summands.get(cg.zero(), 0)


def multiplicity_of(dec: FrobeniusDecomposition, c: ClassElement) -> int:
    return dec.summands.get(c, 0)


def simultaneous_torsion_count(
    dec: FrobeniusDecomposition,
    cg: ClassGroupData | None = None,
    cap: int | None = None,
) -> int:
    """Total multiplicity over all torsion classes, at most q^d, with
    equality exactly when the class group is finite."""
    if cg is None:
        cg = class_group(dec.spec)
    return sum(
        multiplicity_of(dec, c) for c in torsion_elements(cg, resolve_cap(cap))
    )


def box_count_oracle(
    spec: RingSpec, ctx: FrobeniusContext, cap: int | None = None
) -> int:
    """Number of semigroup elements with every facet value below q.

    Counts lattice points directly, with no cosets, floors, or class
    projections anywhere: this is the monomial count of R modulo the q-th
    powers of the ambient variables when the ring is embedded facet-by-facet,
    and it independently reproduces the free rank of the coset decomposition.
    """
    q = ctx.q
    vertices = unit_region_vertices(spec)
    if not vertices:
        raise RuntimeError("facet region has no vertices; spec is invalid")
    bounds = []
    grid_total = 1
    for k in range(spec.dim):
        vals = [v[k] * q for v in vertices]
        lo = math.ceil(min(vals))
        hi = math.floor(max(vals))
        bounds.append((lo, hi))
        grid_total *= max(hi - lo + 1, 0)
    _check_cap(grid_total, resolve_cap(cap), "bounding-box enumeration")
    if grid_total == 0:
        return 0

    basis_t = spec.lattice.basis.transpose()
    det = basis_t.det()
    adj = _adjugate(basis_t)
    facet_nums = []
    facet_dens = []
    for f in spec.facets:
        den = 1
        for c in f.covector:
            den = math.lcm(den, c.denominator)
        facet_nums.append([int(c * den) for c in f.covector])
        facet_dens.append(den)

    coord_bound = max(max(abs(lo), abs(hi)) for lo, hi in bounds)
    num_bound = max(sum(abs(x) for x in row) for row in facet_nums) * coord_bound
    adj_bound = max(
        sum(abs(adj.at(i, j)) for j in range(adj.cols)) for i in range(adj.rows)
    ) * coord_bound
    if max(num_bound, adj_bound, q * max(facet_dens)) < _INT64_SAFE:
        return _box_count_numpy(bounds, adj, det, facet_nums, facet_dens, q)
    return _box_count_pure(bounds, adj, det, facet_nums, facet_dens, q)


def _adjugate(m: IntMat) -> IntMat:
    n = m.rows
    det = m.det()
    cols = []
    for j in range(n):
        rhs = [Fraction(det if i == j else 0) for i in range(n)]
        col = solve_square(m.to_rows(), rhs)
        cols.append([int(x) for x in col])
    return IntMat.from_rows([[cols[j][i] for j in range(n)] for i in range(n)])


def _box_count_numpy(bounds, adj, det, facet_nums, facet_dens, q):
    d = len(bounds)
    sizes = [hi - lo + 1 for lo, hi in bounds]
    total = 1
    for s in sizes:
        total *= s
    adj_t = np.array(adj.to_rows(), dtype=np.int64).T
    nums = np.array(facet_nums, dtype=np.int64).T
    dens = np.array(facet_dens, dtype=np.int64)
    lows = np.array([lo for lo, _ in bounds], dtype=np.int64)
    count = 0
    chunk = DEFAULT_CHUNK
    radix = np.array(
        [math.prod(sizes[j + 1 :]) for j in range(d)], dtype=np.int64
    )
    sizes_arr = np.array(sizes, dtype=np.int64)
    for start in range(0, total, chunk):
        stop = min(start + chunk, total)
        idx = np.arange(start, stop, dtype=np.int64)
        u = (idx[:, None] // radix[None, :]) % sizes_arr + lows
        in_lattice = ((u @ adj_t) % abs(det) == 0).all(axis=1)
        vals = u @ nums
        ok = in_lattice & (vals >= 0).all(axis=1) & (vals < q * dens).all(axis=1)
        count += int(ok.sum())
    return count


def _box_count_pure(bounds, adj, det, facet_nums, facet_dens, q):
    count = 0
    adet = abs(det)
    for u in itertools.product(*(range(lo, hi + 1) for lo, hi in bounds)):
        if any(
            sum(adj.at(j, i) * u[i] for i in range(adj.cols)) % adet
            for j in range(adj.rows)
        ):
            continue
        good = True
        for nums, den in zip(facet_nums, facet_dens):
            v = sum(n * x for n, x in zip(nums, u))
            if v < 0 or v >= q * den:
                good = False
                break
        if good:
            count += 1
    return count
