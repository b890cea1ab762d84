import mpmath as mp
import numpy as np
import pytest

from conftest import TABLE_P
from entquasi.errors import UndefinedErrorMetric
from entquasi.quasiprob import (
    GramSystem,
    analyze,
    build_gram,
    ppt_check,
    reconstruct_state,
    reconstruction_error,
    solve_quasiprob,
)
from entquasi.solver import enumerate_solutions
from entquasi.state import CoefficientMatrix, build_tmsv, dephased_tmsv, diagonal_part


def partial_transpose_loops(state):
    """Brute force: <m,n|X^T_B|p,q> = <m,q|X|p,n>."""
    d = state.dim
    X = state.embed()
    out = np.zeros_like(X)
    for m in range(d):
        for n in range(d):
            for p in range(d):
                for q in range(d):
                    out[m * d + n, p * d + q] = X[m * d + q, p * d + n]
    return out


@pytest.fixture
def table_solutions(table_state):
    return enumerate_solutions(table_state)


class TestGram:
    def test_unit_diagonal_and_symmetry(self, table_solutions):
        G = build_gram(table_solutions).G
        np.testing.assert_array_equal(np.diag(G), 1.0)
        np.testing.assert_array_equal(G, G.T)
        assert G.min() >= 0 and G.max() <= 1

    def test_orthogonal_singletons(self, table_solutions):
        assert build_gram(table_solutions).G[0, 1] == 0

    def test_sign_partners(self, table_solutions):
        G = build_gram(table_solutions).G
        # |<a_3|a_4>|^4 with the exact N=2 amplitudes, 40 digit arithmetic
        mp.mp.dps = 40
        z = mp.mpf("0.62")
        r00, r11, r01 = 1 - z * z, (1 - z * z) * z**2, (1 - z * z) * z * mp.e**-2
        x, y = r11 - r01, r00 - r01
        ref = float(((x - y) / (x + y)) ** 4)
        assert ref == pytest.approx(0.0656, abs=1e-4)
        assert G[2, 3] == pytest.approx(ref, abs=1e-14)

    def test_mixed_dimensions(self):
        a = enumerate_solutions(build_tmsv(0.5, 2))
        b = enumerate_solutions(build_tmsv(0.5, 3))
        with pytest.raises(ValueError):
            build_gram(a + b)
        with pytest.raises(ValueError):
            build_gram([])


class TestSolve:
    def test_table_weights(self, table_solutions):
        qp = solve_quasiprob(build_gram(table_solutions))
        np.testing.assert_allclose(qp.weights, TABLE_P, atol=1e-5)
        assert qp.exact and qp.residual <= 1e-12
        assert qp.negative_indices == [4, 5]
        assert qp.entangled

    def test_one_by_one(self):
        s = build_tmsv(0.3, 1)
        qp = solve_quasiprob(build_gram(enumerate_solutions(s)))
        assert qp.weights[0] == pytest.approx(s.entries[0, 0], rel=1e-15)
        assert not qp.entangled

    def test_strong_dephasing_qubit(self):
        qp = solve_quasiprob(build_gram(enumerate_solutions(dephased_tmsv(0.62, 5.0, 2))))
        assert qp.min_weight == pytest.approx(-1.773e-6, rel=1e-3)

    def test_rank_deficient_min_norm(self):
        sols = enumerate_solutions(dephased_tmsv(0.62, 5.0, 3))
        gram = build_gram(sols)
        qp = solve_quasiprob(gram, selection="min_norm")
        assert qp.rank_used == 27 and qp.exact
        # min norm: no component along the null space of G
        _, sv, vt = np.linalg.svd(gram.G)
        null = vt[sv < 1e-10 * sv[0]]
        assert np.max(np.abs(null @ qp.weights)) < 1e-12

    def test_least_negative_rank_deficient(self):
        gram = build_gram(enumerate_solutions(dephased_tmsv(0.62, 5.0, 3)))
        mn = solve_quasiprob(gram, selection="min_norm")
        ln = solve_quasiprob(gram)
        assert ln.selection == "least_negative" and ln.exact and ln.residual <= 1e-12
        assert ln.negativity < 1e-3 * mn.negativity
        assert ln.sum_weights == pytest.approx(mn.sum_weights, abs=1e-12)
        perm = np.random.default_rng(3).permutation(gram.K)
        permuted = GramSystem(gram.G[np.ix_(perm, perm)], gram.g_vec[perm])
        np.testing.assert_allclose(solve_quasiprob(permuted).weights, ln.weights[perm], atol=1e-8)

    def test_full_rank_selection_agrees(self, table_solutions):
        gram = build_gram(table_solutions)
        np.testing.assert_array_equal(solve_quasiprob(gram).weights,
                                      solve_quasiprob(gram, selection="min_norm").weights)

    def test_unknown_selection(self, table_solutions):
        with pytest.raises(ValueError):
            solve_quasiprob(build_gram(table_solutions), selection="lasso")

    def test_inexact_flag(self):
        G = np.array([[1.0, 1.0], [1.0, 1.0]])
        qp = solve_quasiprob(GramSystem(G, np.array([1.0, 0.0])))
        assert not qp.exact and qp.residual == pytest.approx(0.5)

    def test_empty(self):
        with pytest.raises(ValueError):
            solve_quasiprob(GramSystem(np.zeros((0, 0)), np.zeros(0)))

    def test_equivariance(self, table_solutions):
        perm = [3, 0, 5, 1, 4, 2]
        p = solve_quasiprob(build_gram(table_solutions)).weights
        q = solve_quasiprob(build_gram([table_solutions[i] for i in perm])).weights
        np.testing.assert_allclose(q, p[perm], atol=1e-13)


class TestReconstruction:
    def test_table_exact(self, table_state, table_solutions):
        qp = solve_quasiprob(build_gram(table_solutions))
        rec = reconstruct_state(table_solutions, qp.weights)
        assert rec.dtype == float
        rep = reconstruction_error(table_state, rec)
        assert rep.epsilon <= 1e-12
        assert rep.off_support_max <= 1e-12
        assert rep.trace_reconstructed == pytest.approx(table_state.trace, abs=1e-12)

    def test_single_projector(self):
        sols = enumerate_solutions(dephased_tmsv(0.5, 1.0, 2))
        rec = reconstruct_state(sols[:1], [1.0])
        expected = np.zeros((4, 4))
        expected[0, 0] = 1.0
        np.testing.assert_array_equal(rec, expected)
        assert np.linalg.matrix_rank(rec) == 1

    def test_zero_weights(self, table_solutions):
        np.testing.assert_array_equal(reconstruct_state(table_solutions, np.zeros(6)), np.zeros((4, 4)))

    def test_length_mismatch(self, table_solutions):
        with pytest.raises(ValueError):
            reconstruct_state(table_solutions, np.ones(5))

    def test_error_zero_operator(self, table_state):
        assert reconstruction_error(table_state, np.zeros((4, 4))).epsilon == pytest.approx(1.0, rel=1e-15)

    def test_error_scaled(self, table_state):
        rep = reconstruction_error(table_state, 1.01 * table_state.embed())
        assert rep.epsilon == pytest.approx(0.01, rel=1e-12)

    def test_error_undefined(self):
        zero = CoefficientMatrix(np.zeros((2, 2)))
        with pytest.raises(UndefinedErrorMetric):
            reconstruction_error(zero, np.zeros((4, 4)))

    def test_error_shape(self, table_state):
        with pytest.raises(ValueError):
            reconstruction_error(table_state, np.zeros((3, 3)))


class TestPPT:
    def test_table_state_entangled(self, table_state):
        res = ppt_check(table_state)
        assert res["entangled"]
        lam = np.linalg.eigvalsh(partial_transpose_loops(table_state))[0]
        assert res["min_eigenvalue"] == pytest.approx(lam, abs=1e-15)

    def test_diagonal_state(self):
        res = ppt_check(diagonal_part(build_tmsv(0.62, 3)))
        assert res["min_eigenvalue"] >= 0 and not res["entangled"]

    def test_pure_tmsv(self):
        s = build_tmsv(0.62, 2)
        res = ppt_check(s)
        brute = np.linalg.eigvalsh(partial_transpose_loops(s))[0]
        assert res["min_eigenvalue"] == pytest.approx(brute, abs=1e-15)
        # the PT couples |0,1> and |1,0> with off-diagonal rho_01 and zero diagonal
        assert res["min_eigenvalue"] == pytest.approx(-(1 - 0.62**2) * 0.62, abs=1e-15)

    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_against_loops(self, d):
        s = dephased_tmsv(0.45, 0.7, d)
        lam = np.linalg.eigvalsh(partial_transpose_loops(s))[0]
        assert ppt_check(s)["min_eigenvalue"] == pytest.approx(lam, abs=1e-14)


class TestAnalyze:
    def test_table_end_to_end(self, table_state):
        r = analyze(table_state)
        np.testing.assert_allclose(r.weights, TABLE_P, atol=1e-5)
        assert r.reconstruction.epsilon <= 1e-12
        assert not r.inexact and r.ppt["entangled"]
        assert r.max_se_value == pytest.approx(0.6156, abs=1e-12)
        assert r.duplicates == [] and r.diagnostics == []

    def test_qutrit_strong_dephasing(self):
        r = analyze(dephased_tmsv(0.62, 5.0, 3))
        assert len(r.solutions) == 31
        assert r.quasiprob.entangled
        assert r.reconstruction.epsilon <= 1e-10 and r.quasiprob.residual <= 1e-10
        # the qubit-subspace negativity survives; nothing larger is forced
        assert r.quasiprob.min_weight == pytest.approx(-1.7729168729e-6, rel=1e-6)
        mn = analyze(dephased_tmsv(0.62, 5.0, 3), selection="min_norm")
        assert mn.quasiprob.min_weight == pytest.approx(-7.466214495567e-3, rel=1e-8)

    @pytest.mark.parametrize("zeta", [0.3, 0.62, 0.9])
    @pytest.mark.parametrize("sigma", [2.0, 5.0])
    @pytest.mark.parametrize("d", [2, 3])
    def test_exact_and_sum_rule(self, zeta, sigma, d):
        s = dephased_tmsv(zeta, sigma, d)
        r = analyze(s)
        assert r.quasiprob.residual <= 1e-10 and r.reconstruction.epsilon <= 1e-10
        assert r.reconstruction.off_support_max <= 1e-10
        assert r.quasiprob.sum_weights == pytest.approx(s.trace, abs=1e-9)

    @pytest.mark.parametrize("zeta", [0.3, 0.62, 0.9])
    @pytest.mark.parametrize("d", [2, 3])
    def test_separable_limit(self, zeta, d):
        s = diagonal_part(build_tmsv(zeta, d))
        r = analyze(s)
        assert r.weights.min() >= -1e-12 and not r.quasiprob.entangled
        for sol, p in zip(r.solutions, r.weights):
            if len(sol.support) == 1:
                k = sol.support[0]
                assert p == pytest.approx(s.entries[k, k], abs=1e-12)

    def test_monotone_with_dephasing(self):
        mins = [analyze(dephased_tmsv(0.62, s, 2)).quasiprob.min_weight for s in (0.5, 2.0, 5.0)]
        assert mins[0] < mins[1] < mins[2] < 0

    @pytest.mark.xfail(strict=True, reason="no principal solution beyond singletons at sigma=0; weights stay positive")
    def test_monotone_from_pure_state(self):
        mins = [analyze(dephased_tmsv(0.62, s, 2)).quasiprob.min_weight for s in (0.0, 0.5)]
        assert mins[0] < mins[1]

    def test_pure_state_flagged_inexact(self):
        r = analyze(build_tmsv(0.62, 2))
        assert r.inexact
        assert [d.reason for d in r.diagnostics] == ["degenerate-support", "degenerate-support"]

    def test_weak_dephasing_flagged_inexact(self):
        r = analyze(dephased_tmsv(0.62, 0.5, 2))
        assert r.inexact and r.reconstruction.epsilon > 0.1
        assert {d.reason for d in r.diagnostics} == {"sign-mismatch"}
