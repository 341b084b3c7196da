import numpy as np
import pytest

from irgalab.majorization import (
    NotDoublyStochasticError,
    birkhoff,
    majorizes,
    shannon_entropy,
    transfer_chain,
)


def random_doubly_stochastic(rng, n, mixtures=None):
    """Random convex combination of permutation matrices."""
    if mixtures is None:
        mixtures = int(rng.integers(2, (n - 1) ** 2 + 2))
    weights = rng.dirichlet(np.ones(mixtures))
    s = np.zeros((n, n))
    for w in weights:
        perm = rng.permutation(n)
        s[np.arange(n), perm] += w
    return s


class TestMajorizes:
    def test_extreme_majorizes_uniform(self):
        assert majorizes([1.0, 0.0], [0.5, 0.5]).holds

    def test_three_two_one_majorizes_uniform(self):
        verdict = majorizes([3.0, 2.0, 1.0], [2.0, 2.0, 2.0])
        assert verdict.holds
        assert verdict.prefix_deficits == (1.0, 1.0, 0.0)

    def test_unequal_sums(self):
        verdict = majorizes([1.0, 0.0], [0.6, 0.6])
        assert not verdict.holds
        assert verdict.sum_gap == pytest.approx(0.2)

    def test_order_invariance(self):
        assert majorizes([1.0, 3.0, 2.0], [2.0, 2.0, 2.0]).holds

    def test_length_mismatch(self):
        from irgalab.linalg import DimensionMismatchError

        with pytest.raises(DimensionMismatchError):
            majorizes([1.0, 2.0], [1.0, 1.0, 1.0])


class TestTransferChain:
    def test_single_averaging_step(self):
        chain = transfer_chain([1.0, 0.0], [0.5, 0.5])
        assert len(chain) == 1
        (t,) = chain.transforms
        assert t.lam == pytest.approx(0.5) and (t.j, t.k) == (0, 1)

    def test_equal_vectors_give_empty_chain(self):
        assert len(transfer_chain([2.0, 1.0], [2.0, 1.0])) == 0

    def test_three_to_uniform_takes_two(self):
        y, x = [3.0, 2.0, 1.0], [2.0, 2.0, 2.0]
        chain = transfer_chain(y, x)
        assert len(chain) == 2
        assert np.abs(chain.apply(y) - x).max() < 1e-10

    def test_requires_majorization(self):
        with pytest.raises(ValueError):
            transfer_chain([1.0, 1.0], [2.0, 0.0])

    def test_sorted_inputs_use_at_most_n_minus_one(self):
        rng = np.random.default_rng(0)
        for _ in range(200):
            n = int(rng.integers(2, 9))
            y = np.sort(rng.uniform(0, 5, n))[::-1]
            s = random_doubly_stochastic(rng, n)
            x = np.sort(s @ y)[::-1]
            chain = transfer_chain(y, x)
            assert len(chain) <= n - 1
            assert np.abs(chain.apply(y) - x).max() < 1e-10

    def test_witness_equivalence_and_matrix(self):
        # majorizes holds <=> the chain exists; its composed matrix is
        # doubly stochastic and maps y to x.
        rng = np.random.default_rng(1)
        for _ in range(120):
            n = int(rng.integers(2, 8))
            y = rng.uniform(-2, 4, n)
            s = random_doubly_stochastic(rng, n)
            x = s @ y
            assert majorizes(y, x).holds
            chain = transfer_chain(y, x)
            m = chain.matrix(n)
            assert np.abs(m @ y - x).max() < 1e-9
            assert m.min() >= -1e-12
            assert np.abs(m.sum(axis=0) - 1).max() < 1e-9
            assert np.abs(m.sum(axis=1) - 1).max() < 1e-9

    def test_lambda_in_unit_interval(self):
        rng = np.random.default_rng(2)
        for _ in range(100):
            n = int(rng.integers(2, 7))
            y = rng.uniform(0, 3, n)
            x = random_doubly_stochastic(rng, n) @ y
            for t in transfer_chain(y, x):
                assert 0.0 <= t.lam <= 1.0


class TestBirkhoff:
    def test_two_by_two_unique_decomposition(self):
        s = np.array([[2 / 3, 1 / 3], [1 / 3, 2 / 3]])
        decomposition = birkhoff(s)
        got = sorted(zip(decomposition.weights, decomposition.permutations))
        assert got[0][0] == pytest.approx(1 / 3) and got[0][1] == (1, 0)
        assert got[1][0] == pytest.approx(2 / 3) and got[1][1] == (0, 1)

    def test_identity(self):
        decomposition = birkhoff(np.eye(4))
        assert len(decomposition) == 1
        assert decomposition.weights[0] == pytest.approx(1.0)
        assert decomposition.permutations[0] == (0, 1, 2, 3)

    def test_rejects_bad_column_sums(self):
        with pytest.raises(NotDoublyStochasticError):
            birkhoff(np.array([[0.9, 0.2], [0.1, 0.8]]))

    def test_rejects_negative_entries(self):
        with pytest.raises(NotDoublyStochasticError):
            birkhoff(np.array([[1.1, -0.1], [-0.1, 1.1]]))

    def test_random_reconstruction_and_budget(self):
        rng = np.random.default_rng(3)
        for _ in range(200):
            n = int(rng.integers(2, 9))
            s = random_doubly_stochastic(rng, n)
            decomposition = birkhoff(s)
            assert len(decomposition) <= (n - 1) ** 2 + 1
            assert np.abs(decomposition.reconstruct() - s).max() <= 1e-9
            assert abs(sum(decomposition.weights) - 1.0) <= 1e-10


class TestEntropy:
    def test_uniform(self):
        for n in (2, 5, 9):
            assert shannon_entropy(np.ones(n)) == pytest.approx(np.log(n))

    def test_point_mass(self):
        assert shannon_entropy([1.0, 0.0]) == 0.0

    def test_half_quarter_quarter(self):
        assert shannon_entropy([0.5, 0.25, 0.25]) == pytest.approx(1.5 * np.log(2))

    def test_normalization(self):
        assert shannon_entropy([2.0, 2.0]) == pytest.approx(np.log(2))

    def test_negative_entry_rejected(self):
        with pytest.raises(ValueError):
            shannon_entropy([0.5, -0.5])

    def test_entropy_implication(self):
        # x = S y with S doubly stochastic implies x <- y and H(x) >= H(y).
        rng = np.random.default_rng(4)
        for _ in range(200):
            n = int(rng.integers(2, 9))
            y = rng.uniform(0, 3, n)
            if y.sum() == 0:
                continue
            x = random_doubly_stochastic(rng, n) @ y
            assert majorizes(y, x).holds
            assert shannon_entropy(x) >= shannon_entropy(y) - 1e-9
