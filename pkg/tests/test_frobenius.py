import random
from fractions import Fraction as F

import pytest

from toricfsig.divisors import (
    CapExceededError,
    WeilDivisor,
    class_group,
    class_of,
    torsion_elements,
)
from toricfsig.frobenius import (
    FrobeniusContext,
    box_count_oracle,
    decompose,
    free_rank,
    multiplicity_of,
    simultaneous_torsion_count,
)
from toricfsig.rings import parse_builtin

CORPUS = (
    ["poly:1", "poly:2", "poly:3", "quadric"]
    + [f"an:{n}" for n in range(2, 7)]
    + [f"veronese:{n}" for n in range(2, 7)]
)


def zero_divisor(spec):
    return WeilDivisor((0,) * spec.num_facets)


def test_context_validation():
    ctx = FrobeniusContext(3, 4)
    assert ctx.q == 81
    with pytest.raises(ValueError):
        FrobeniusContext(4, 1)
    with pytest.raises(ValueError):
        FrobeniusContext(2, 0)


def test_quadric_cone_coset_count_hand_enumeration():
    # the four cosets of 2Z^2... for the xy = z^2 ring at q = 2: reps
    # (0,0), (1/2,1/2), (0,1), (1/2,3/2); the first two give the trivial
    # summand, the last two the nontrivial class
    spec = parse_builtin("an:2")
    dec = decompose(spec, zero_divisor(spec), FrobeniusContext(2, 1), detail=True)
    reps = {w for w, _ in dec.detail}
    assert reps == {
        (F(0), F(0)),
        (F(1, 2), F(1, 2)),
        (F(0), F(1)),
        (F(1, 2), F(3, 2)),
    }
    summand_by_rep = {w: d.coeffs for w, d in dec.detail}
    assert summand_by_rep[(F(0), F(0))] == (0, 0)
    assert summand_by_rep[(F(1, 2), F(1, 2))] == (0, 0)
    assert summand_by_rep[(F(0), F(1))] == (0, 1)
    assert summand_by_rep[(F(1, 2), F(3, 2))] == (0, 1)
    counts = {c.torsion: n for c, n in dec.summands.items()}
    assert counts == {(0,): 2, (1,): 2}
    assert free_rank(dec) == 2


def test_an2_p3_free_rank():
    # pairs (a, b) with a, b < 3 and a = b mod 2:
    # (0,0), (0,2), (1,1), (2,0), (2,2)
    spec = parse_builtin("an:2")
    ctx = FrobeniusContext(3, 1)
    dec = decompose(spec, zero_divisor(spec), ctx)
    assert free_rank(dec) == 5
    assert box_count_oracle(spec, ctx) == 5


def test_polynomial_ring_decomposes_freely():
    for d in (1, 2, 3):
        spec = parse_builtin(f"poly:{d}")
        for p, e in [(2, 1), (2, 3), (3, 2), (5, 1)]:
            ctx = FrobeniusContext(p, e)
            dec = decompose(spec, zero_divisor(spec), ctx)
            cg = class_group(spec)
            assert dec.summands == {cg.zero(): ctx.q**d}
            assert free_rank(dec) == ctx.q**d
            assert box_count_oracle(spec, ctx) == ctx.q**d


def test_free_rank_exact_when_n_divides_q():
    for n, p, e in [(2, 2, 1), (2, 2, 3), (3, 3, 2), (5, 5, 1), (4, 2, 4)]:
        spec = parse_builtin(f"an:{n}")
        ctx = FrobeniusContext(p, e)
        assert ctx.q % n == 0
        dec = decompose(spec, zero_divisor(spec), ctx)
        assert free_rank(dec) == ctx.q**2 // n


def test_multiplicity_of_matches_free_rank_for_zero_class():
    spec = parse_builtin("an:2")
    ctx = FrobeniusContext(2, 1)
    dec = decompose(spec, zero_divisor(spec), ctx)
    cg = class_group(spec)
    assert multiplicity_of(dec, cg.zero()) == free_rank(dec)
    one = torsion_elements(cg)[1]
    assert multiplicity_of(dec, one) == 2
    # absent classes count zero
    other = class_of(class_group(parse_builtin("quadric")), WeilDivisor((5, 0, 0, 0)))
    assert multiplicity_of(dec, other) == 0


def test_rank_accounting():
    for token in CORPUS:
        spec = parse_builtin(token)
        for p, e in [(2, 1), (2, 2), (3, 1)]:
            ctx = FrobeniusContext(p, e)
            dec = decompose(spec, zero_divisor(spec), ctx)
            assert sum(dec.summands.values()) == ctx.q**spec.dim


def test_box_count_oracle_matches_free_rank():
    for token in CORPUS:
        spec = parse_builtin(token)
        for p in (2, 3):
            for e in (1, 2):
                ctx = FrobeniusContext(p, e)
                dec = decompose(spec, zero_divisor(spec), ctx)
                assert free_rank(dec) == box_count_oracle(spec, ctx), (token, p, e)


def test_simultaneous_torsion_count():
    # finite class group: every summand is torsion, so the count is q^d
    for token in ["an:2", "an:5", "veronese:3", "poly:2"]:
        spec = parse_builtin(token)
        ctx = FrobeniusContext(2, 2)
        dec = decompose(spec, zero_divisor(spec), ctx)
        assert simultaneous_torsion_count(dec) == ctx.q**spec.dim
    # free class group: only the zero class is torsion
    quadric = parse_builtin("quadric")
    ctx = FrobeniusContext(3, 1)
    dec = decompose(quadric, zero_divisor(quadric), ctx)
    assert simultaneous_torsion_count(dec) == free_rank(dec)
    assert simultaneous_torsion_count(dec) <= ctx.q**3


def test_twisted_decomposition_summand_identity():
    # twisting the base divisor by q*D shifts every per-coset summand by D
    rng = random.Random(123)
    for n in (2, 3, 4):
        spec = parse_builtin(f"an:{n}")
        for p in (2, 3):
            for _ in range(5):
                d1 = WeilDivisor((rng.randint(-5, 5), rng.randint(-5, 5)))
                d2 = WeilDivisor((rng.randint(-5, 5), rng.randint(-5, 5)))
                ctx = FrobeniusContext(p, 2)
                base = decompose(spec, d1, ctx, detail=True)
                twisted = decompose(spec, d1 + ctx.q * d2, ctx, detail=True)
                for (w1, s1), (w2, s2) in zip(base.detail, twisted.detail):
                    assert w1 == w2
                    assert s1 + d2 == s2


def test_partition_independence():
    spec = parse_builtin("an:3")
    d = WeilDivisor((2, -1))
    ctx = FrobeniusContext(3, 2)
    reference = decompose(spec, d, ctx, detail=True)
    for chunk in (1, 7, 64, 10**6):
        dec = decompose(spec, d, ctx, chunk_size=chunk)
        assert dec.summands == reference.summands
    assert list(dec.summands) == sorted(
        dec.summands, key=lambda c: (c.free, c.torsion)
    )


def test_detail_classes_match_summand_counts():
    for token in ["an:4", "veronese:3", "quadric"]:
        spec = parse_builtin(token)
        cg = class_group(spec)
        ctx = FrobeniusContext(2, 1)
        dec = decompose(spec, zero_divisor(spec), ctx, detail=True)
        recount = {}
        for _, summand in dec.detail:
            c = class_of(cg, summand)
            recount[c] = recount.get(c, 0) + 1
        assert recount == dec.summands


def test_nonzero_base_divisor_warns_on_free_rank():
    spec = parse_builtin("an:3")
    dec = decompose(spec, WeilDivisor((1, 0)), FrobeniusContext(2, 1))
    with pytest.warns(UserWarning):
        free_rank(dec)


def test_every_torsion_class_eventually_appears():
    # each torsion class must show up as a summand from some threshold on;
    # record the first appearance and require presence at every later e
    for token in ["an:4", "an:6", "veronese:5"]:
        spec = parse_builtin(token)
        cg = class_group(spec)
        table = {}
        for e in range(1, 6):
            dec = decompose(spec, zero_divisor(spec), FrobeniusContext(2, e))
            for c in torsion_elements(cg):
                table.setdefault(c, []).append(multiplicity_of(dec, c))
        for c, counts in table.items():
            assert any(counts), f"{token}: class {c} never appeared by e=5"
            e0 = next(i for i, n in enumerate(counts) if n)
            assert all(n >= 1 for n in counts[e0:]), (
                f"{token}: class {c} dropped out after e0={e0 + 1}"
            )


def _shifted_facet_box_count(spec, divisor, q):
    """Brute count of {u in L : q*a_i <= facet_i(u) < q*(1 + a_i)} over a
    generous ambient box; knows nothing about cosets or class projections."""
    import itertools

    lo = min(q * a for a in divisor.coeffs) - 3 * q
    hi = max(q * (1 + a) for a in divisor.coeffs) + 3 * q
    count = 0
    for u in itertools.product(range(lo, hi + 1), repeat=spec.dim):
        if spec.lattice.coefficients_of(u) is None:
            continue
        if all(
            q * a <= f.pairing(u) < q * (1 + a)
            for f, a in zip(spec.facets, divisor.coeffs)
        ):
            count += 1
    return count


def test_class_multiplicity_matches_shifted_box_count():
    # the number of summands in the class of D equals the number of lattice
    # points whose facet values land in the q-shifted window; this checks
    # every per-class count, not just the free rank
    rng = random.Random(6)
    cases = [("an:2", (2, 1)), ("an:3", (2, 2)), ("veronese:3", (3, 1))]
    for token, (p, e) in cases:
        spec = parse_builtin(token)
        cg = class_group(spec)
        ctx = FrobeniusContext(p, e)
        dec = decompose(spec, zero_divisor(spec), ctx)
        for _ in range(4):
            d = WeilDivisor(tuple(rng.randint(-2, 2) for _ in range(2)))
            assert multiplicity_of(dec, class_of(cg, d)) == _shifted_facet_box_count(
                spec, d, ctx.q
            ), (token, p, e, d)


def test_quadric_class_multiplicities_match_shifted_counts():
    spec = parse_builtin("quadric")
    cg = class_group(spec)
    ctx = FrobeniusContext(2, 1)
    dec = decompose(spec, zero_divisor(spec), ctx)
    for d in [
        WeilDivisor((0, 0, 0, 0)),
        WeilDivisor((0, 0, 0, -1)),
        WeilDivisor((0, 0, 0, 1)),
        WeilDivisor((1, 0, 0, 0)),
    ]:
        assert multiplicity_of(dec, class_of(cg, d)) == _shifted_facet_box_count(
            spec, d, ctx.q
        ), d


def test_cap_errors():
    spec = parse_builtin("quadric")
    with pytest.raises(CapExceededError):
        decompose(spec, zero_divisor(spec), FrobeniusContext(2, 4), cap=100)
    with pytest.raises(CapExceededError):
        box_count_oracle(spec, FrobeniusContext(2, 4), cap=100)


def test_decompose_argument_checks():
    spec = parse_builtin("an:2")
    with pytest.raises(ValueError):
        decompose(spec, WeilDivisor((1, 2, 3)), FrobeniusContext(2, 1))


def test_coset_representatives_are_canonical():
    # scaled by q, every representative is a lattice point whose coefficient
    # vector runs over [0, q)^d exactly once, in lexicographic order
    for token in ["an:3", "veronese:2", "quadric"]:
        spec = parse_builtin(token)
        ctx = FrobeniusContext(2, 1)
        dec = decompose(spec, zero_divisor(spec), ctx, detail=True)
        seen = []
        for w, _ in dec.detail:
            scaled = tuple(x * ctx.q for x in w)
            assert all(x.denominator == 1 for x in scaled)
            coeffs = spec.lattice.coefficients_of(tuple(int(x) for x in scaled))
            assert coeffs is not None
            assert all(0 <= c < ctx.q for c in coeffs)
            seen.append(coeffs)
        assert seen == sorted(seen)
        assert len(set(seen)) == ctx.q**spec.dim


def test_nonzero_divisor_numpy_matches_pure():
    rng = random.Random(8)
    for token in ["an:5", "veronese:4", "quadric"]:
        spec = parse_builtin(token)
        m = spec.num_facets
        for _ in range(4):
            d = WeilDivisor(tuple(rng.randint(-7, 7) for _ in range(m)))
            ctx = FrobeniusContext(2, 2)
            fast = decompose(spec, d, ctx)
            slow = decompose(spec, d, ctx, detail=True)
            assert fast.summands == slow.summands
