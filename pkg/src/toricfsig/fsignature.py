"""F-signature: finite-level terms, exact values, and convergence reports.

The e-th term is s_e = a_e / q^d with a_e the number of summands of
F^e_* R in a chosen divisor class (the trivial class by default, giving the
free rank).  The exact limit never comes from truncating that sequence: it
is either the normalized volume of the region where every facet value lies
in [0, 1), or Singh's determinantal closed form for the size-(r, s) generic
determinantal rings, both computed in exact rational arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .divisors import WeilDivisor, class_group, class_of
from .frobenius import FrobeniusContext, decompose, free_rank, multiplicity_of
from .geometry import matrix_rank, polytope_volume
from .rings import RingSpec, unit_region_halfspaces

VOLUME_DIM_LIMIT = 4


@dataclass(frozen=True)
class FSignatureEstimate:
    ctx: FrobeniusContext
    a_e: int
    s_e: Fraction


@dataclass(frozen=True)
class ExactFSignature:
    value: Fraction
    method: str  # "polytope_volume" or "singh_formula"


def signature_sequence(
    spec: RingSpec,
    p: int,
    e_max: int,
    divisor: WeilDivisor | None = None,
    cap: int | None = None,
) -> list[FSignatureEstimate]:
    """Terms s_e for e = 1..e_max.

    With a divisor D, a_e counts the summands of F^e_* R lying in the class
    of D; these terms converge to the same limit as the default free-rank
    sequence whenever D is torsion.
    """
    cg = class_group(spec)
    target = None if divisor is None else class_of(cg, divisor)
    out = []
    for e in range(1, e_max + 1):
        ctx = FrobeniusContext(p, e)
        dec = decompose(spec, WeilDivisor((0,) * spec.num_facets), ctx, cap=cap)
        a_e = free_rank(dec) if target is None else multiplicity_of(dec, target)
        out.append(FSignatureEstimate(ctx, a_e, Fraction(a_e, dec.rank)))
    return out


def exact_signature_volume(spec: RingSpec) -> ExactFSignature:
    """Exact F-signature of a valid spec as a normalized region volume.

    The region {u : 0 <= facet_i(u) < 1} holds one representative of every
    coset of L contributing a free summand; its volume over the covolume of
    L is the density of those cosets, hence the limit of s_e.
    """
    if spec.dim > VOLUME_DIM_LIMIT:
        raise ValueError(
            f"exact volume supports dimension <= {VOLUME_DIM_LIMIT}, got {spec.dim}"
        )
    if matrix_rank([f.covector for f in spec.facets]) < spec.dim:
        raise RuntimeError("facet region is unbounded; spec is not pointed")
    vol = polytope_volume(unit_region_halfspaces(spec), spec.dim)
    return ExactFSignature(
        value=vol / spec.lattice.covolume(), method="polytope_volume"
    )


def singh_determinantal_signature(s: int, d: int) -> ExactFSignature:
    """Singh's closed form for generic determinantal rings:
    (1/d!) * sum_{i=0}^{s} (-1)^i * C(d+1, i) * (s-i)^d."""
    if s < 1 or d < 1:
        raise ValueError("need s >= 1 and d >= 1")
    total = sum(
        (-1) ** i * math.comb(d + 1, i) * (s - i) ** d for i in range(s + 1)
    )
    return ExactFSignature(
        value=Fraction(total, math.factorial(d)), method="singh_formula"
    )


@dataclass(frozen=True)
class ConvergenceRow:
    e: int
    q: int
    s_e: Fraction
    deviation: Fraction | None
    envelope: Fraction | None
    within_envelope: bool | None


@dataclass(frozen=True)
class ConvergenceReport:
    rows: tuple[ConvergenceRow, ...]

    @property
    def max_deviation(self) -> Fraction | None:
        devs = [r.deviation for r in self.rows if r.deviation is not None]
        return max(devs) if devs else None

    @property
    def envelope_violations(self) -> tuple[ConvergenceRow, ...]:
        return tuple(r for r in self.rows if r.within_envelope is False)


def convergence_report(
    seq: list[FSignatureEstimate],
    exact: ExactFSignature | None = None,
    an_param: int | None = None,
) -> ConvergenceReport:
    """Per-term deviations from the exact value, plus the explicit
    counting envelope |s_e - 1/n| <= (2qn + n^2 + 2q) / q^2 available for
    the xy = z^n family (pass its n as ``an_param``)."""
    if not seq:
        raise ValueError("empty sequence")
    rows = []
    for est in seq:
        q = est.ctx.q
        deviation = None if exact is None else abs(est.s_e - exact.value)
        envelope = None
        within = None
        if an_param is not None:
            n = an_param
            envelope = Fraction(2 * q * n + n * n + 2 * q, q * q)
            within = abs(est.s_e - Fraction(1, n)) <= envelope
        rows.append(
            ConvergenceRow(est.ctx.e, q, est.s_e, deviation, envelope, within)
        )
    return ConvergenceReport(tuple(rows))
