import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from medianqmc.digital_net import GenMatrixSet, niederreiter_matrices, sobol_matrices, t_value_rank
from medianqmc.scramble import (
    LowerTriScramble,
    SeedSpec,
    apply_scramble,
    draw_scrambled_net,
    enumerate_scrambles,
    sample_scramble,
)

from oracles import gf_matmul


class TestSample:
    def test_binary_diagonal_forced(self):
        for i in range(20):
            L = sample_scramble(2, 52, 10, SeedSpec(i))
            assert np.all(np.diagonal(L.matrix) == 1)

    def test_structure(self):
        L = sample_scramble(5, 12, 6, SeedSpec(1, 2, 3)).matrix
        assert not np.triu(L, 1).any()
        assert np.all(np.diagonal(L) != 0)

    def test_deterministic(self):
        a = sample_scramble(3, 10, 5, SeedSpec(9, 1, 2)).matrix
        c = sample_scramble(3, 10, 5, SeedSpec(9, 1, 2)).matrix
        assert np.array_equal(a, c)

    def test_streams_differ(self):
        mats = {sample_scramble(2, 30, 10, SeedSpec(0, r, j)).matrix.tobytes() for r in range(4) for j in range(4)}
        assert len(mats) == 16

    def test_uniform_entries(self):
        # chi-square style: each sub-diagonal value within 5 sigma of uniform
        b, draws = 3, 10_000
        counts = np.zeros(b)
        diag = np.zeros(b)
        for i in range(draws):
            L = sample_scramble(b, 4, 3, SeedSpec(i)).matrix
            counts += np.bincount([L[1, 0]], minlength=b)
            diag += np.bincount([L[0, 0]], minlength=b)
        p = 1 / b
        sigma = (draws * p * (1 - p)) ** 0.5
        assert np.all(np.abs(counts - draws * p) < 5 * sigma)
        assert diag[0] == 0
        q = 1 / (b - 1)
        assert np.all(np.abs(diag[1:] - draws * q) < 5 * (draws * q * (1 - q)) ** 0.5)

    def test_shape_errors(self):
        with pytest.raises(ValueError):
            sample_scramble(2, 3, 4, 0)
        with pytest.raises(ValueError):
            LowerTriScramble(2, np.array([[1, 1], [0, 1]]))
        with pytest.raises(ValueError):
            LowerTriScramble(3, np.array([[0, 0], [1, 1]]))


class TestApply:
    def test_identity(self):
        C = np.array([[1, 0], [1, 1]])
        L = LowerTriScramble(2, np.vstack([np.eye(2, dtype=int), np.zeros((3, 2), dtype=int)]))
        out = apply_scramble(L, C)
        assert np.array_equal(out[:2], C) and not out[2:].any()

    def test_hand_product(self):
        L = LowerTriScramble(2, np.array([[1, 0], [1, 1]]))
        assert apply_scramble(L, np.eye(2, dtype=int)).tolist() == [[1, 0], [1, 1]]

    def test_shape_mismatch(self):
        L = sample_scramble(2, 5, 3, 0)
        with pytest.raises(ValueError):
            apply_scramble(L, np.eye(2, dtype=int))

    def test_associative(self):
        rng = np.random.default_rng(0)
        for b in (2, 3, 5):
            for i in range(20):
                L1 = sample_scramble(b, 6, 6, SeedSpec(i, 1)).matrix
                L2 = sample_scramble(b, 6, 4, SeedSpec(i, 2))
                C = rng.integers(0, b, size=(4, 3))
                left = gf_matmul(gf_matmul(L1, L2.matrix, b), C, b)
                right = apply_scramble(LowerTriScramble(b, L1), apply_scramble(L2, C))
                assert np.array_equal(left, right)


class TestDrawNet:
    @pytest.mark.parametrize("G", [sobol_matrices(3, 5), niederreiter_matrices(3, 4, 2), niederreiter_matrices(2, 3, 3)])
    def test_t_value_preserved(self, G):
        t = t_value_rank(G)
        for i in range(100):
            assert t_value_rank(draw_scrambled_net(G, SeedSpec(i))) == t

    def test_shape_and_determinism(self):
        G = sobol_matrices(4, 6)
        a = draw_scrambled_net(G, 5, replicate=2)
        assert (a.s, a.n, a.m) == (4, 52, 6)
        assert a == draw_scrambled_net(G, SeedSpec(5, 2))
        assert a != draw_scrambled_net(G, 5, replicate=3)

    def test_replicate_from_seedspec(self):
        G = sobol_matrices(3, 5)
        assert draw_scrambled_net(G, SeedSpec(4, 2)) == draw_scrambled_net(G, 4, replicate=2)
        assert draw_scrambled_net(G, SeedSpec(4, 1)) != draw_scrambled_net(G, SeedSpec(4, 2))
        with pytest.raises(ValueError):
            draw_scrambled_net(G, SeedSpec(4, 1), replicate=2)

    def test_requires_square(self):
        with pytest.raises(ValueError):
            draw_scrambled_net(sobol_matrices(2, 4).pad_rows(6), 0)

    def test_identity_scramble_is_base(self):
        G = sobol_matrices(2, 3)
        L = LowerTriScramble(2, np.eye(3, dtype=int))
        assert np.array_equal(apply_scramble(L, G[1]), G[1])


def test_enumerate_scrambles_count():
    for b, w, n in [(2, 3, 3), (3, 2, 2), (2, 3, 2)]:
        mats = list(enumerate_scrambles(b, w, n))
        free = sum(min(i, n) for i in range(w))
        assert len(mats) == (b - 1) ** n * b**free
        assert len({L.matrix.tobytes() for L in mats}) == len(mats)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**31), st.sampled_from([2, 3]))
def test_scrambling_preserves_t_property(seed, b):
    rng = np.random.default_rng(seed)
    m = int(rng.integers(1, 5))
    s = int(rng.integers(1, 4))
    G = GenMatrixSet(b, rng.integers(0, b, size=(s, m, m)))
    assert t_value_rank(draw_scrambled_net(G, seed % 1000, w=m + 4)) == t_value_rank(G)
