import random

import numpy as np
import pytest

from hypersum import (
    CapExceeded,
    FpPolynomial,
    FpSumProdParams,
    InvariantViolation,
    MultilinearRingPoly,
    amplifier_order,
    count_roots,
    count_system,
    eval_all_points,
    mod_amplifier,
    oracle_count_fp_system,
    oracle_sumprod,
    rand_fp_poly,
    suffix_count_poly,
    sumprod_fp,
)


def brute_values(p, n, monomials):
    """Independent dense evaluation: no shared code with the fast path."""
    masks = np.arange(1 << n, dtype=np.int64)
    vals = np.zeros(1 << n, dtype=np.int64)
    for mono, coeff in monomials.items():
        vals += coeff * ((masks & mono) == mono)
    return vals % p


# ---- amplifier ----

def test_amplifier_small_cases():
    assert mod_amplifier(1).coefficients == (0, 1)  # P_1(y) = y
    assert mod_amplifier(2).coefficients == (0, 0, 3, -2)
    assert mod_amplifier(2).evaluate(3) == -27


def test_amplifier_fixed_points_and_degree():
    for ell in range(1, 9):
        amp = mod_amplifier(ell)
        assert amp.evaluate(0) == 0
        assert amp.evaluate(1) == 1
        assert amp.degree == 2 * ell - 1
        assert amp.coefficients[-1] != 0


def test_amplifier_congruences():
    rng = random.Random(101)
    for m in (2, 3, 5):
        for ell in (1, 2, 4):
            amp = mod_amplifier(ell)
            for _ in range(30):
                y0 = m * rng.randint(-50, 50)
                assert amp.evaluate(y0) % m**ell == 0
                y1 = y0 + 1
                assert amp.evaluate(y1) % m**ell == 1


# ---- ring polynomials ----

def test_ring_poly_multilinear_product():
    # (x1 + x2)^2 = x1 + x2 + 2 x1 x2 under x_i^2 = x_i
    q = MultilinearRingPoly(7, 2, {1: 1, 2: 1})
    sq = q * q
    assert sq.coeffs == {1: 1, 2: 1, 3: 2}


def test_ring_poly_normalizes_mod():
    q = MultilinearRingPoly(5, 2, {1: 7, 2: 5})
    assert q.coeffs == {1: 2}


def test_ring_poly_ring_mismatch():
    a = MultilinearRingPoly(5, 2, {1: 1})
    b = MultilinearRingPoly(7, 2, {1: 1})
    with pytest.raises(ValueError):
        a + b


def test_eval_all_points_examples():
    assert eval_all_points(MultilinearRingPoly(8, 1, {0: 1, 1: 2})) == [1, 3]
    assert eval_all_points(MultilinearRingPoly(3, 2, {3: 1})) == [0, 0, 0, 1]


def test_eval_all_points_matches_direct_eval():
    rng = random.Random(7)
    for _ in range(20):
        n = rng.randint(1, 10)
        mod = rng.choice([2, 3, 9, 31])
        coeffs = {rng.randrange(1 << n): rng.randrange(1, mod)
                  for _ in range(rng.randint(1, 8))}
        table = eval_all_points(MultilinearRingPoly(mod, n, coeffs))
        direct = brute_values(mod, n, coeffs)
        assert table == list(direct)


def test_eval_all_points_python_path_for_big_modulus():
    mod = (1 << 40) + 1  # beyond the int64-safe numpy limit
    poly = MultilinearRingPoly(mod, 3, {1: 1 << 39, 7: 3})
    table = eval_all_points(poly)
    for mask in range(8):
        expect = ((1 << 39) * (mask & 1) + 3 * (mask == 7)) % mod
        assert table[mask] == expect


def test_eval_all_points_cap():
    with pytest.raises(CapExceeded):
        eval_all_points(MultilinearRingPoly(3, 30, {1: 1}), dense_cap=26)


# ---- suffix-count construction ----

def test_amplifier_order_gives_headroom_for_p2():
    assert amplifier_order(2, 1) == 2
    assert amplifier_order(2, 3) == 4
    assert amplifier_order(3, 2) == 2
    assert amplifier_order(5, 1) == 1


def test_suffix_counts_match_brute_force():
    rng = random.Random(55)
    for p, d, n in [(2, 1, 12), (2, 1, 15), (3, 1, 18)]:
        params = FpSumProdParams(p=p, d=d, k=1, n=n)
        m = params.m
        assert m == 1
        for _ in range(4):
            q = rand_fp_poly(rng, p, n, d)
            counter = suffix_count_poly(q, params)
            table = eval_all_points(counter)
            vals = brute_values(p, n, q.monomials)
            per_prefix = (vals.reshape(1 << m, 1 << (n - m)) == 0).sum(axis=0)
            assert table == list(per_prefix)


def test_suffix_counts_m2():
    # n = 24, p = 2, d = 1 gives a two-variable suffix; residues live mod 2^3
    rng = random.Random(56)
    params = FpSumProdParams(p=2, d=1, k=1, n=24)
    assert params.m == 2
    q = rand_fp_poly(rng, 2, 24, 1)
    counter = suffix_count_poly(q, params)
    table = np.array(eval_all_points(counter))
    vals = brute_values(2, 24, q.monomials)
    per_prefix = (vals.reshape(4, 1 << 22) == 0).sum(axis=0)
    assert (table == per_prefix).all()


def test_full_count_survives_p2_wraparound():
    # x1 * x24: prefixes with x1 = 0 have every suffix a root, count 2^m,
    # which a mod-2^m residue could not distinguish from zero
    q = FpPolynomial(2, 24, {(1 << 0) | (1 << 23): 1})
    assert count_roots(q) == 2**24 - 2**22


def test_suffix_poly_degree_stays_below_bound():
    rng = random.Random(57)
    for p, d, n in [(2, 1, 12), (2, 2, 24), (3, 1, 18)]:
        params = FpSumProdParams(p=p, d=d, k=1, n=n)
        q = rand_fp_poly(rng, p, n, d)
        counter = suffix_count_poly(q, params)
        assert counter.degree < 2 * d * p * params.m


def test_suffix_poly_rejects_m0():
    params = FpSumProdParams(p=5, d=3, k=1, n=10)
    assert params.m == 0
    q = rand_fp_poly(random.Random(1), 5, 10, 3)
    with pytest.raises(ValueError):
        suffix_count_poly(q, params)


# ---- root counting ----

def test_count_roots_constant_polys():
    assert count_roots(FpPolynomial(3, 4, {})) == 16
    assert count_roots(FpPolynomial(3, 4, {0: 1})) == 0
    assert count_roots(FpPolynomial(3, 4, {0: 3})) == 16


def test_count_roots_random_vs_oracle():
    rng = random.Random(77)
    for _ in range(40):
        p = rng.choice([2, 3, 5])
        n = rng.randint(2, 12)
        q = rand_fp_poly(rng, p, n, rng.randint(1, 3))
        assert count_roots(q) == oracle_count_fp_system([q], [0])


def test_count_roots_uses_suffix_path():
    # n = 14, p = 2, d = 1 forces m = 1; answer still matches brute force
    rng = random.Random(78)
    for _ in range(5):
        q = rand_fp_poly(rng, 2, 14, 1)
        assert count_roots(q) == oracle_count_fp_system([q], [0])


# ---- systems and sum-products ----

def test_count_system_matches_oracle():
    rng = random.Random(91)
    for _ in range(30):
        p = rng.choice([2, 3])
        n = rng.randint(2, 10)
        k = rng.randint(1, 3)
        polys = [rand_fp_poly(rng, p, n, rng.randint(1, 2)) for _ in range(k)]
        targets = [rng.randrange(p) for _ in range(k)]
        count, acc = count_system(polys, targets, with_accumulator=True)
        assert acc % p**k == 0
        assert count == oracle_count_fp_system(polys, targets)


def test_count_system_validates_shapes():
    q = FpPolynomial(3, 4, {1: 1})
    r = FpPolynomial(5, 4, {1: 1})
    with pytest.raises(ValueError):
        count_system([q, r], [0, 0])
    with pytest.raises(ValueError):
        count_system([q], [0, 0])
    with pytest.raises(ValueError):
        count_system([], [])


def test_sumprod_fp_lifts_factors_independently():
    q = FpPolynomial.from_terms(3, 2, [((1,), 1), ((2,), 1)])
    # values 0,1,1,2 lift to integers; product of two copies: 0+1+1+4
    assert sumprod_fp([q, q]) == 6


def test_sumprod_fp_empty_product():
    assert sumprod_fp([], 6) == 64
    with pytest.raises(ValueError):
        sumprod_fp([])


def test_sumprod_fp_n_mismatch():
    q = FpPolynomial(3, 4, {1: 1})
    with pytest.raises(ValueError):
        sumprod_fp([q], 5)


def test_sumprod_fp_random_vs_oracle():
    rng = random.Random(93)
    for _ in range(25):
        p = rng.choice([2, 3, 5])
        n = rng.randint(2, 10)
        k = rng.randint(1, 3)
        polys = [rand_fp_poly(rng, p, n, rng.randint(1, 3)) for _ in range(k)]
        assert sumprod_fp(polys, n) == oracle_sumprod(polys, n)


def test_invariant_violation_surfaces():
    # a poisoned count_roots breaks the p^k divisibility and must be caught;
    # shifting exactly one call by 1 leaves the accumulator off by 1
    import hypersum.fppoly as fp

    real = fp.count_roots
    q = FpPolynomial(3, 4, {1: 1})
    calls = [0]

    def poisoned(poly, *, dense_cap=fp.DEFAULT_DENSE_CAP):
        calls[0] += 1
        extra = 1 if calls[0] == 1 else 0
        return real(poly, dense_cap=dense_cap) + extra

    try:
        fp.count_roots = poisoned
        with pytest.raises(InvariantViolation):
            fp.count_system([q], [0])
    finally:
        fp.count_roots = real
