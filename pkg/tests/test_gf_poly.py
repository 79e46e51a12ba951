import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from medianqmc.gf_poly import (
    NEG_INF_DEGREE,
    GeneratorSet,
    GfPoly,
    GfScalar,
    enumerate_moduli,
    is_irreducible,
    laurent_digits,
    monic_polys,
    poly_mulmod,
    sample_modulus,
)

from oracles import necklace_count, sympy_irreducible


def P(*coeffs, b=2):
    return GfPoly(b, coeffs)


X2X1 = P(1, 1, 1)  # x^2 + x + 1


class TestScalarAndPoly:
    def test_scalar_range_checked(self):
        with pytest.raises(ValueError):
            GfScalar(2, 2)
        with pytest.raises(ValueError):
            GfScalar(1, 4)

    def test_scalar_arithmetic(self):
        a, c = GfScalar(2, 3), GfScalar(2, 3)
        assert (a + c).value == 1
        assert (a * c).value == 1
        assert (a * a.inverse()).value == 1

    def test_canonical_form(self):
        assert P(1, 0, 0).coeffs == (1,)
        assert P(2, 4, b=2).is_zero()
        assert P().degree == NEG_INF_DEGREE
        assert P(1, 1) == P(1, 1, 0)

    def test_int_roundtrip(self):
        for b in (2, 3, 5):
            for k in range(200):
                assert GfPoly.from_int(k, b).to_int() == k

    def test_non_prime_base_rejected(self):
        with pytest.raises(ValueError):
            GfPoly(4, (1,))

    def test_mixed_bases_rejected(self):
        with pytest.raises(ValueError):
            P(1, 1) + P(1, 1, b=3)

    def test_divmod_identity(self):
        rng = random.Random(0)
        for b in (2, 3, 5):
            for _ in range(100):
                a = GfPoly.from_int(rng.randrange(b**6), b)
                d = GfPoly.from_int(rng.randrange(1, b**3), b)
                q, r = divmod(a, d)
                assert q * d + r == a
                assert r.degree < d.degree


class TestMulmod:
    def test_example(self):
        assert poly_mulmod(P(1, 1), P(1, 1), X2X1) == P(0, 1)

    def test_zero_annihilates(self):
        assert poly_mulmod(P(1, 0, 1), P(), X2X1).is_zero()

    def test_identity(self):
        assert poly_mulmod(P(1), P(0, 1), X2X1) == P(0, 1)

    def test_errors(self):
        with pytest.raises(ZeroDivisionError):
            poly_mulmod(P(1), P(1), P())
        with pytest.raises(ValueError):
            poly_mulmod(P(1), P(1, b=3), X2X1)

    @pytest.mark.parametrize("b,m", [(2, 3), (2, 5), (3, 2), (3, 4), (5, 2)])
    def test_associative_and_commutative(self, b, m):
        rng = random.Random(b * 100 + m)
        p = enumerate_moduli(b, m).members[0]
        for _ in range(200):
            a, c, d = (GfPoly.from_int(rng.randrange(b**m), b) for _ in range(3))
            assert poly_mulmod(a, c, p) == poly_mulmod(c, a, p)
            assert poly_mulmod(poly_mulmod(a, c, p), d, p) == poly_mulmod(a, poly_mulmod(c, d, p), p)


class TestIrreducible:
    def test_examples(self):
        assert is_irreducible(X2X1)
        assert not is_irreducible(P(0, 0, 1))
        cubics = [q for q in monic_polys(2, 3) if is_irreducible(q)]
        assert cubics == [P(1, 1, 0, 1), P(1, 0, 1, 1)]

    def test_constant_rejected(self):
        with pytest.raises(ValueError):
            is_irreducible(P(1))
        with pytest.raises(ValueError):
            is_irreducible(P())

    @pytest.mark.parametrize("b,d", [(2, 6), (3, 4), (5, 3)])
    def test_agrees_with_sympy(self, b, d):
        for q in monic_polys(b, d):
            assert is_irreducible(q) == sympy_irreducible(q.coeffs, b)


class TestModuli:
    def test_examples(self):
        assert len(enumerate_moduli(2, 3)) == 2
        assert enumerate_moduli(2, 1).members == (P(0, 1), P(1, 1))
        assert len(enumerate_moduli(3, 2)) == 3

    @pytest.mark.parametrize("b", [2, 3, 5])
    def test_necklace_counts(self, b):
        for m in range(1, 7):
            assert len(enumerate_moduli(b, m)) == necklace_count(b, m)

    @pytest.mark.parametrize("b,m", [(2, 8), (3, 5), (5, 3)])
    def test_sieve_members_are_irreducible(self, b, m):
        ms = enumerate_moduli(b, m)
        assert all(q.is_monic() and q.degree == m and is_irreducible(q) for q in ms.members)
        assert len(ms) >= b**m / (2 * m)

    def test_sampling_uniform(self):
        rng = np.random.default_rng(7)
        draws = [sample_modulus(2, 3, rng) for _ in range(10_000)]
        n1 = sum(q == P(1, 1, 0, 1) for q in draws)
        sigma = (10_000 * 0.25) ** 0.5
        assert abs(n1 - 5000) < 5 * sigma

    def test_generator_set(self):
        G = GeneratorSet(3, 2)
        assert len(G) == 8
        members = list(G)
        assert len(set(members)) == 8 and all(not g.is_zero() and g.degree < 2 for g in members)


class TestLaurent:
    def test_examples(self):
        assert laurent_digits(P(1), X2X1, 6) == (0, 1, 1, 0, 1, 1)
        assert laurent_digits(P(), X2X1, 5) == (0,) * 5
        assert laurent_digits(P(1), P(0, 1), 4) == (1, 0, 0, 0)

    def test_errors(self):
        with pytest.raises(ValueError):
            laurent_digits(P(0, 0, 1), X2X1, 3)
        with pytest.raises(ValueError):
            laurent_digits(P(1), X2X1, 0)

    @pytest.mark.parametrize("b,m", [(2, 3), (2, 4), (3, 2), (3, 3), (5, 2)])
    def test_product_reproduces_numerator(self, b, m):
        # p(x) * sum u_i x^-i must equal g(x) up to the truncation order
        L = 3 * m + 4
        for p in enumerate_moduli(b, m).members[:3]:
            for g in itertools.islice(GeneratorSet(b, m), 10):
                u = laurent_digits(g, p, L)
                for e in range(m - 1, -(L - m), -1):
                    # coefficient of x^e in p * sum_i u_i x^{-i}
                    coef = sum(p[j] * u[j - e - 1] for j in range(m + 1) if 1 <= j - e <= L) % b
                    assert coef == (g[e] if e >= 0 else 0)

    @pytest.mark.parametrize("b,m", [(2, 3), (2, 4), (3, 2)])
    def test_period_divides_group_order(self, b, m):
        T = b**m - 1
        for p in enumerate_moduli(b, m).members:
            for g in GeneratorSet(b, m):
                u = laurent_digits(g, p, 2 * T + 5)
                assert u[T : 2 * T] == u[:T]


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**12), st.integers(0, 2**12), st.sampled_from([2, 3]))
def test_mulmod_distributes(a, c, b):
    p = enumerate_moduli(b, 4).members[-1]
    A, C = GfPoly.from_int(a, b), GfPoly.from_int(c, b)
    D = GfPoly.from_int(a ^ c, b)
    assert poly_mulmod(A + C, D, p) == (poly_mulmod(A, D, p) + poly_mulmod(C, D, p))
