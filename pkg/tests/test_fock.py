import math

import numpy as np
import pytest

from herglotzlab.fock import (
    FockBasis,
    SizeCapError,
    creation_operators,
    cuntz_state_herglotz,
    cuntz_state_herglotz_bruteforce,
    cuntz_state_word,
    davidson_pitts,
    davidson_pitts_sweep,
    dshift_operators,
    fock_count,
    fock_words,
    operator_norm,
)
from herglotzlab.series import index_map


class TestWordBasis:
    def test_count_formula(self):
        for d in (2, 3):
            for L in (1, 3, 5):
                assert len(fock_words(d, L)) == (d ** (L + 1) - 1) // (d - 1)

    def test_empty_word_first(self):
        assert fock_words(2, 3)[0] == ()

    def test_graded_lex(self):
        words = fock_words(2, 2)
        assert words == ((), (1,), (2,), (1, 1), (1, 2), (2, 1), (2, 2))

    def test_size_cap(self):
        with pytest.raises(SizeCapError):
            FockBasis.create(2, 21)


class TestCreationOperators:
    def test_prepend_on_vacuum(self):
        L1, L2 = creation_operators(2, 3)
        v = np.zeros(15)
        v[0] = 1.0
        assert np.allclose(L1 @ v, np.eye(15)[1])
        assert np.allclose(L2 @ v, np.eye(15)[2])

    def test_one_nonzero_per_column_below_top(self):
        L1, _ = creation_operators(2, 4)
        cols = np.asarray((L1 != 0).sum(axis=0)).ravel()
        n_prev = fock_count(2, 3)
        assert np.all(cols[:n_prev] == 1)
        assert np.all(cols[n_prev:] == 0)

    def test_isometry_relations_below_top(self):
        ops = creation_operators(2, 4)
        n_prev = fock_count(2, 3)
        P = np.zeros((fock_count(2, 4),) * 2)
        P[np.arange(n_prev), np.arange(n_prev)] = 1.0
        for i, Li in enumerate(ops):
            for j, Lj in enumerate(ops):
                prod = (Li.conj().T @ Lj).toarray()
                assert np.allclose(prod, P if i == j else 0.0)

    def test_range_projections_sum(self):
        ops = creation_operators(2, 4)
        S = sum((L @ L.conj().T).toarray() for L in ops)
        expect = np.eye(fock_count(2, 4))
        expect[0, 0] = 0.0
        assert np.allclose(S, expect)

    def test_matvec_matches_sparse(self):
        basis = FockBasis.create(2, 5)
        ops = creation_operators(2, 5)
        rng = np.random.default_rng(0)
        v = rng.standard_normal(basis.size) + 1j * rng.standard_normal(basis.size)
        for j in range(2):
            assert np.allclose(basis.apply_creation(j, v), ops[j] @ v)
            assert np.allclose(basis.apply_creation_adjoint(j, v),
                               ops[j].conj().T @ v)


class TestDshift:
    def test_univariate_unilateral_shift(self):
        S = dshift_operators(1, 5)[0]
        vals = S[np.nonzero(S)]
        assert np.allclose(vals, 1.0)

    def test_monomial_norm_ratio(self):
        S = dshift_operators(2, 4)
        idx = index_map(2, 4)
        assert abs(S[0][idx[(1, 1)], idx[(0, 1)]] - 2 ** -0.5) < 1e-15

    def test_contractive(self):
        for Sj in dshift_operators(2, 6):
            assert np.linalg.norm(Sj, 2) <= 1.0 + 1e-12

    def test_commute(self):
        S = dshift_operators(3, 5)
        for i in range(3):
            for j in range(i + 1, 3):
                assert np.allclose(S[i] @ S[j], S[j] @ S[i], atol=1e-15)


class TestOperatorNorm:
    def test_identity(self):
        assert abs(operator_norm(np.eye(7)).value - 1.0) < 1e-13

    def test_rank_one(self):
        rng = np.random.default_rng(1)
        u = rng.standard_normal(9) + 1j * rng.standard_normal(9)
        v = rng.standard_normal(5) + 1j * rng.standard_normal(5)
        A = np.outer(u, np.conj(v))
        assert abs(operator_norm(A).value
                   - np.linalg.norm(u) * np.linalg.norm(v)) < 1e-10

    def test_power_iteration_matches_dense(self):
        rng = np.random.default_rng(2)
        A = rng.standard_normal((50, 50)) + 1j * rng.standard_normal((50, 50))
        dense = operator_norm(A, method="dense-svd")
        power = operator_norm(A, method="power-iteration", tol=1e-14)
        assert abs(dense.value - power.value) < 1e-8
        assert power.converged

    def test_sparse_input(self):
        L1, _ = creation_operators(2, 6)
        res = operator_norm(L1, method="power-iteration")
        assert abs(res.value - 1.0) < 1e-8


class TestSeparationExperiment:
    def test_shift_norm_below_sqrt2(self):
        out = davidson_pitts(L_full=6, N_sym=12)
        assert out["norm_sym_shift"] < math.sqrt(2.0)

    def test_word_norm_matches_path_oracle(self):
        # restriction convention: the squared norm is exactly
        # 3/2 + cos(pi/(L+2)) (top chain of the word graph is a path)
        for L in (4, 8, 12):
            out = davidson_pitts(L_full=L, N_sym=4)
            oracle = math.sqrt(1.5 + math.cos(math.pi / (L + 2)))
            assert abs(out["norm_sym_calculus"] - oracle) < 1e-7

    def test_sweep_nondecreasing(self):
        table = davidson_pitts_sweep(range(4, 11), N_sym=8)
        norms = [row["norm_sym_calculus"] for row in table["rows"]]
        assert all(b >= a - 1e-10 for a, b in zip(norms, norms[1:]))

    def test_gap_at_moderate_size(self):
        out = davidson_pitts(L_full=8, N_sym=8)
        assert out["norm_sym_calculus"] - out["norm_sym_shift"] > 0.1
        assert out["norm_sym_calculus"] > math.sqrt(2.0) > out["norm_sym_shift"]


class TestBoundaryState:
    def setup_method(self):
        zeta = np.array([0.6, 0.8j])
        self.zeta = zeta / np.linalg.norm(zeta)

    def test_single_letter(self):
        assert abs(cuntz_state_word(self.zeta, (1,), ()) - self.zeta[0]) < 1e-15

    def test_empty_words(self):
        assert cuntz_state_word(self.zeta, (), ()) == 1.0

    def test_mixed_word(self):
        expect = self.zeta[0] * np.conj(self.zeta[1])
        assert abs(cuntz_state_word(self.zeta, (1,), (2,)) - expect) < 1e-15

    def test_long_word(self):
        expect = (self.zeta[0] ** 2 * self.zeta[1]
                  * np.conj(self.zeta[0]) * np.conj(self.zeta[1]) ** 2)
        assert abs(cuntz_state_word(self.zeta, (1, 1, 2), (1, 2, 2)) - expect) < 1e-15

    def test_rejects_interior_point(self):
        with pytest.raises(ValueError):
            cuntz_state_word([0.5, 0.0], (1,), ())

    def test_transform_at_origin(self):
        assert cuntz_state_herglotz(self.zeta, [0.0, 0.0], 5) == 1.0

    def test_real_slice_partial_sums(self):
        e1 = np.array([1.0, 0.0])
        for r in (0.2, 0.5, 0.8):
            val = cuntz_state_herglotz(e1, [r, 0.0], 400)
            assert abs(val - (1 + r) / (1 - r)) < 1e-10

    def test_geometric_tail_bound(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            d = int(rng.integers(2, 4))
            zeta = rng.standard_normal(d) + 1j * rng.standard_normal(d)
            zeta /= np.linalg.norm(zeta)
            z = rng.standard_normal(d) + 1j * rng.standard_normal(d)
            z = z / np.linalg.norm(z) * rng.uniform(0.0, 0.9)
            w = complex(np.sum(z * np.conj(zeta)))
            exact = (1 + w) / (1 - w)
            for K in (3, 8, 20, 60):
                err = abs(cuntz_state_herglotz(zeta, z, K) - exact)
                bound = 2 * abs(w) ** (K + 1) / (1 - abs(w))
                assert err <= bound + 1e-12

    def test_brute_force_word_sum_agrees(self):
        rng = np.random.default_rng(4)
        z = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        z = z / np.linalg.norm(z) * 0.5
        for K in (0, 1, 3, 6):
            assert abs(cuntz_state_herglotz(self.zeta, z, K)
                       - cuntz_state_herglotz_bruteforce(self.zeta, z, K)) < 1e-12

    def test_divergence_guard(self):
        with pytest.raises(ValueError):
            cuntz_state_herglotz([1.0, 0.0], [1.0, 0.0], 5)
