import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qmsla import linalg as la
from qmsla.errors import DimensionError, InputOutputError, RootFindingError, SchemaError

from conftest import random_complex


def kron_loops(A, B):
    m, n = A.shape
    p, q = B.shape
    out = np.zeros((m * p, n * q), dtype=complex)
    for i in range(m):
        for j in range(n):
            for k in range(p):
                for l in range(q):
                    out[i * p + k, j * q + l] = A[i, j] * B[k, l]
    return out


class TestVec:
    def test_examples(self):
        A = np.array([[1, 2], [3, 4]])
        assert np.array_equal(la.vec(A), [1, 3, 2, 4])
        assert la.rvec(A).shape == (1, 4)
        assert np.array_equal(la.vec(np.eye(2)), [1, 0, 0, 1])

    def test_index_convention(self, rng):
        A = random_complex(rng, 4, 2)
        v = la.vec(A)
        for i in range(4):
            for j in range(2):
                assert v[4 * j + i] == A[i, j]

    def test_unvec_round_trip(self, rng):
        A = random_complex(rng, 2, 8)
        assert np.array_equal(la.unvec(la.vec(A), 2, 8), A)

    def test_vec_of_product(self, rng):
        A, B, C = random_complex(rng, 2, 4), random_complex(rng, 4, 2), random_complex(rng, 2, 4)
        lhs = la.vec(A @ B @ C)
        rhs = la.kron(C.T, A) @ la.vec(B)
        assert np.allclose(lhs, rhs, atol=1e-12)

    def test_rejects_bad_shapes(self):
        with pytest.raises(DimensionError):
            la.as_matrix(np.zeros((2, 2, 2)))
        with pytest.raises(DimensionError):
            la.as_matrix([[np.nan]])


class TestKron:
    def test_against_loops(self, rng):
        for shape_a, shape_b in [((2, 2), (2, 2)), ((2, 4), (4, 1)), ((1, 2), (4, 2))]:
            A, B = random_complex(rng, *shape_a), random_complex(rng, *shape_b)
            assert np.allclose(la.kron(A, B), kron_loops(A, B))

    def test_mixed_product(self, rng):
        A, B, C, D = (random_complex(rng, 2, 2) for _ in range(4))
        assert np.allclose(la.kron(A, B) @ la.kron(C, D), la.kron(A @ C, B @ D), atol=1e-12)

    def test_kron_all(self, rng):
        mats = [random_complex(rng, 2, 2) for _ in range(3)]
        assert np.allclose(la.kron_all(mats), kron_loops(kron_loops(mats[0], mats[1]), mats[2]))


class TestNormsAndTrace:
    def test_frobenius(self):
        assert la.frobenius(np.eye(4)) == pytest.approx(2.0)
        assert la.frobenius([[3, 4j]]) == pytest.approx(5.0)

    def test_trace_errors(self):
        with pytest.raises(DimensionError):
            la.trace(np.ones((2, 4)))
        with pytest.raises(DimensionError):
            la.matmul(np.ones((2, 4)), np.ones((2, 4)))

    def test_adjoint(self, rng):
        A = random_complex(rng, 2, 4)
        assert np.array_equal(la.adjoint(A), la.transpose(la.conjugate(A)))

    def test_oracle_examples(self):
        assert la.multivariate_trace_oracle([np.eye(2)] * 4) == 2
        X = np.array([[0, 1], [1, 0]])
        assert la.multivariate_trace_oracle([X, X]) == 2

    def test_oracle_rectangular_chain(self, rng):
        A, B, C = random_complex(rng, 2, 4), random_complex(rng, 4, 8), random_complex(rng, 8, 2)
        assert la.multivariate_trace_oracle([A, B, C]) == pytest.approx(np.trace(A @ B @ C))

    def test_chain_checks(self):
        with pytest.raises(DimensionError):
            la.check_chain([np.ones((2, 4)), np.ones((2, 2))])
        with pytest.raises(DimensionError):
            la.check_chain([np.ones((2, 4))])
        assert la.check_chain([np.ones((2, 4))], closed=False) == [(2, 4)]
        with pytest.raises(DimensionError):
            la.check_chain([])

    @pytest.mark.parametrize("seed", range(10))
    def test_cyclic_invariance(self, seed):
        rng = np.random.default_rng(seed)
        mats = [random_complex(rng, 4, 4) for _ in range(5)]
        t = la.multivariate_trace_oracle(mats)
        for s in range(1, 5):
            assert la.multivariate_trace_oracle(mats[s:] + mats[:s]) == pytest.approx(t, rel=1e-12)

    @pytest.mark.parametrize("seed", range(10))
    def test_trace_of_four_identity(self, seed):
        rng = np.random.default_rng(seed)
        A1, A2, A3, A4 = (random_complex(rng, 2, 2) for _ in range(4))
        expected = la.multivariate_trace_oracle([A1, A2, A3, A4])
        formula = (la.rvec(A1) @ la.kron(A2, A4.T) @ la.vec(A3.T))[0]
        assert abs(formula - expected) <= 1e-12 * max(1, abs(expected))


class TestHutchinson:
    def test_identity_is_exact(self):
        assert la.hutchinson_estimate([np.eye(8)], 5, seed=3) == 8

    def test_deterministic(self, rng):
        A = random_complex(rng, 4, 4)
        a = la.hutchinson_samples([A], 50, seed=11)
        b = la.hutchinson_samples([A], 50, seed=11)
        assert np.array_equal(a, b)
        assert not np.array_equal(a, la.hutchinson_samples([A], 50, seed=12))

    def test_probe_independent_of_count(self, rng):
        A = random_complex(rng, 4, 4)
        assert np.array_equal(la.hutchinson_samples([A], 3, 5), la.hutchinson_samples([A], 10, 5)[:3])

    def test_probes_are_signs(self):
        z = la.rademacher(1, 2, 1000)
        assert set(np.unique(z)) == {-1.0, 1.0}

    def test_product_chain(self, rng):
        A, B = random_complex(rng, 4, 4), random_complex(rng, 4, 4)
        s = la.hutchinson_samples([A, B], 20, 0)
        z = la.rademacher(0, 7, 4)
        assert s[7] == pytest.approx(z @ A @ B @ z)

    def test_spd_within_three_sigma(self, rng):
        M = rng.normal(size=(4, 4))
        A = M @ M.T + np.eye(4)
        s = la.hutchinson_samples([A], 4000, seed=2)
        sigma = np.std(s.real, ddof=1) / np.sqrt(s.size)
        assert abs(np.mean(s.real) - np.trace(A)) <= 3 * sigma

    def test_sample_count_checked(self):
        with pytest.raises(ValueError):
            la.hutchinson_samples([np.eye(2)], 0, 0)


class TestPolynomials:
    def test_polyval_ascending(self):
        assert la.polyval([1, 2, 3], 2.0) == 17

    def test_matrix_polynomial(self, rng):
        A = random_complex(rng, 4, 4)
        c = [0.5, -1, 2j, 0.25]
        ref = c[0] * np.eye(4) + c[1] * A + c[2] * A @ A + c[3] * A @ A @ A
        assert np.allclose(la.matrix_polynomial(c, A), ref)

    @pytest.mark.parametrize(
        "coeffs, roots",
        [([-1, 0, 1], [-1, 1]), ([2, -3, 1], [1, 2]), ([1, 0, 1], [-1j, 1j])],
    )
    def test_roots_examples(self, coeffs, roots):
        z = np.sort_complex(la.polynomial_roots(coeffs))
        assert np.allclose(z, np.sort_complex(np.array(roots, dtype=complex)), atol=1e-10)

    def test_planted_roots(self, rng):
        planted = rng.normal(size=5) + 1j * rng.normal(size=5)
        coeffs = np.polynomial.polynomial.polyfromroots(planted)
        z = la.polynomial_roots(coeffs)
        for r in planted:
            assert np.min(np.abs(z - r)) < 1e-8

    def test_roots_rebuild_polynomial(self, rng):
        coeffs = rng.normal(size=5) + 1j * rng.normal(size=5)
        z = la.polynomial_roots(coeffs)
        x = 0.3 - 0.2j
        assert coeffs[-1] * np.prod(x - z) == pytest.approx(la.polyval(coeffs, x), rel=1e-9)

    def test_root_errors(self):
        with pytest.raises(RootFindingError):
            la.polynomial_roots([1])
        with pytest.raises(RootFindingError):
            la.polynomial_roots([1, 2, 0])

    @settings(max_examples=40, deadline=None)
    @given(st.lists(st.floats(-3, 3), min_size=1, max_size=4))
    def test_roots_property(self, planted):
        coeffs = np.polynomial.polynomial.polyfromroots(planted)
        z = la.polynomial_roots(coeffs)
        assert np.max(np.abs(la.polyval(coeffs, z))) <= 1e-8 * np.max(np.abs(coeffs))


class TestMatrixJson:
    def test_round_trip(self, rng, tmp_path):
        A = random_complex(rng, 2, 4)
        p = tmp_path / "a.json"
        la.write_matrix_json(A, p)
        assert np.array_equal(la.read_matrix_json(p), A)

    def test_row_major_data(self):
        a = la.matrix_from_dict({"rows": 2, "cols": 2, "data": [[1, 0], [2, 0], [3, 0], [4, 0]]})
        assert np.array_equal(a, [[1, 2], [3, 4]])

    @pytest.mark.parametrize(
        "data",
        [
            {"rows": 2, "cols": 2, "data": [[1, 0]] * 3},
            {"rows": 2, "cols": 2, "data": [[1, 0, 0]] * 4},
            {"rows": 0, "cols": 2, "data": []},
            {"rows": 1, "cols": 1, "data": [["a", 0]]},
            {"cols": 1, "data": [[1, 0]]},
            [1, 2],
        ],
    )
    def test_rejects_bad_schema(self, data):
        with pytest.raises(SchemaError):
            la.matrix_from_dict(data)

    def test_io_errors(self, tmp_path):
        with pytest.raises(InputOutputError):
            la.read_matrix_json(tmp_path / "missing.json")
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        with pytest.raises(SchemaError):
            la.read_matrix_json(bad)
        bad.write_text(json.dumps({"rows": 1, "cols": 1, "data": [[float("nan"), 0]]}))
        with pytest.raises(SchemaError):
            la.read_matrix_json(bad)
