import json
import math

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given
from hypothesis import strategies as st

from chernofflab.linalg import (
    ComputationError,
    InputError,
    SingularityError,
    dumps_mat,
    expm,
    fingerprint,
    herm_eig_extremes,
    load_mat,
    mat_from_json,
    opnorm,
    powm,
    resolvent,
)

from conftest import JORDAN, random_complex, random_contraction


class TestOpnorm:
    def test_identity(self):
        assert opnorm(np.eye(3)) == 1.0

    def test_diagonal(self):
        assert opnorm(np.diag([0.5, -0.25])) == 0.5

    def test_jordan_block(self):
        oracle = np.linalg.svd(JORDAN)[1].max()
        assert oracle == pytest.approx(1.0, abs=1e-15)
        assert opnorm(JORDAN) == pytest.approx(oracle, rel=1e-12)

    def test_rejects_nan(self):
        with pytest.raises(InputError):
            opnorm(np.array([[np.nan]]))

    def test_rejects_non_square(self):
        with pytest.raises(InputError):
            opnorm(np.ones((2, 3)))

    def test_large_matches_lapack(self, rng):
        M = random_complex(rng, 200)
        assert opnorm(M) == pytest.approx(scipy.linalg.norm(M, 2), rel=1e-12)

    def test_submultiplicative(self, rng):
        for _ in range(50):
            d = int(rng.integers(1, 9))
            A, B = random_complex(rng, d), random_complex(rng, d)
            assert opnorm(A @ B) <= opnorm(A) * opnorm(B) + 1e-10


class TestExpm:
    def test_zero(self):
        assert np.array_equal(expm(np.zeros((2, 2))), np.eye(2))

    def test_diagonal(self):
        a = np.array([0.3, -2.0, 1.5 + 0.7j])
        np.testing.assert_allclose(expm(np.diag(a)), np.diag(np.exp(a)), rtol=1e-13, atol=1e-13)

    def test_nilpotent_terminates(self):
        # series oracle: exp(J) = I + J exactly since J^2 = 0
        np.testing.assert_allclose(expm(JORDAN), np.eye(2) + JORDAN, atol=1e-15)

    @pytest.mark.parametrize("norm", [0.1, 1.0, 5.0, 20.0])
    def test_inverse_pair_skew_hermitian(self, rng, norm):
        G = random_complex(rng, 6)
        M = G - G.conj().T
        M *= norm / opnorm(M)
        assert opnorm(expm(M) @ expm(-M) - np.eye(6)) <= 1e-10

    @pytest.mark.parametrize("norm", [0.1, 1.0, 5.0])
    def test_inverse_pair_general(self, rng, norm):
        # rounding in the product grows like eps * exp(2 ||M||)
        M = random_complex(rng, 6)
        M *= norm / opnorm(M)
        assert opnorm(expm(M) @ expm(-M) - np.eye(6)) <= 1e-10

    def test_normal_matches_eigendecomposition(self, rng):
        from chernofflab.families import haar_unitary

        for _ in range(10):
            U = haar_unitary(rng, 5)
            lam = rng.uniform(-3, 3, 5) + 1j * rng.uniform(-3, 3, 5)
            M = (U * lam) @ U.conj().T
            ref = (U * np.exp(lam)) @ U.conj().T
            assert opnorm(expm(M) - ref) <= 1e-11 * max(1.0, opnorm(ref))

    def test_against_scipy(self, rng):
        M = random_complex(rng, 8, 2.0)
        ref = scipy.linalg.expm(M)
        assert opnorm(expm(M) - ref) <= 1e-12 * opnorm(ref)

    def test_overflow(self):
        with pytest.raises(ComputationError):
            expm(np.array([[1e6]]))


class TestPowm:
    def test_zero_power(self, rng):
        np.testing.assert_array_equal(powm(random_complex(rng, 3), 0), np.eye(3))

    def test_diagonal(self):
        np.testing.assert_allclose(powm(np.diag([0.5]), 3), [[0.125]])

    def test_nilpotent(self):
        np.testing.assert_array_equal(powm(JORDAN, 2), np.zeros((2, 2)))

    def test_negative_rejected(self):
        with pytest.raises(InputError):
            powm(np.eye(2), -1)

    @given(st.integers(0, 40), st.integers(0, 40), st.integers(0, 2**32 - 1))
    def test_power_law(self, a, b, seed):
        rng = np.random.Generator(np.random.PCG64(seed))
        C = random_contraction(rng, 4)
        assert opnorm(powm(C, a + b) - powm(C, a) @ powm(C, b)) <= 1e-10

    def test_matches_repeated_product(self, rng):
        M = random_contraction(rng, 5)
        P = np.eye(5)
        for _ in range(13):
            P = P @ M
        assert opnorm(powm(M, 13) - P) <= 1e-13


class TestResolvent:
    def test_zero_operator(self):
        np.testing.assert_allclose(resolvent(np.zeros((2, 2)), 2.0), 0.5 * np.eye(2))

    def test_diagonal(self):
        np.testing.assert_allclose(resolvent(np.diag([1.0, 3.0]), 1.0), np.diag([0.5, 0.25]))

    def test_exact_pole(self):
        with pytest.raises(SingularityError) as err:
            resolvent(np.array([[1.0]]), -1.0)
        assert err.value.cond == math.inf

    def test_ill_conditioned_carries_condition(self):
        with pytest.raises(SingularityError) as err:
            resolvent(np.diag([1.0, 1e-13]), 0.0)
        assert err.value.cond > 1e12

    def test_residual(self, rng):
        A = random_complex(rng, 7)
        z = 0.3 + 2j
        R = resolvent(A, z)
        assert opnorm((z * np.eye(7) + A) @ R - np.eye(7)) <= 1e-10


class TestHermEig:
    def test_diag(self):
        assert herm_eig_extremes(np.diag([0.0, 1.0])) == (0.0, 1.0)

    def test_swap(self):
        lo, hi = herm_eig_extremes(np.array([[0.0, 1.0], [1.0, 0.0]]))
        assert lo == pytest.approx(-1.0, abs=1e-12)
        assert hi == pytest.approx(1.0, abs=1e-12)

    def test_identity(self):
        assert herm_eig_extremes(np.eye(4)) == pytest.approx((1.0, 1.0), abs=1e-14)

    def test_rejects_non_hermitian(self):
        with pytest.raises(InputError):
            herm_eig_extremes(JORDAN)


class TestMatrixFiles:
    def test_roundtrip(self, rng, tmp_path):
        M = random_complex(rng, 3)
        p = tmp_path / "m.json"
        p.write_text(dumps_mat(M))
        np.testing.assert_array_equal(load_mat(p), M)

    def test_ragged_rejected(self):
        with pytest.raises(InputError):
            mat_from_json({"dim": 2, "re": [[1, 0], [0]], "im": [[0, 0], [0, 0]]})

    def test_dim_mismatch_rejected(self):
        with pytest.raises(InputError):
            mat_from_json({"dim": 3, "re": [[1, 0], [0, 1]]})

    def test_unknown_key_rejected(self):
        with pytest.raises(InputError):
            mat_from_json({"dim": 1, "re": [[1]], "extra": 1})

    def test_real_only(self):
        np.testing.assert_array_equal(mat_from_json({"dim": 1, "re": [[2.5]]}), [[2.5]])

    def test_deterministic_dump(self, rng):
        M = random_complex(rng, 4)
        assert dumps_mat(M) == dumps_mat(M.copy())
        assert json.loads(dumps_mat(M))["dim"] == 4


def test_fingerprint_ignores_sub_1e12_noise(rng):
    M = random_complex(rng, 3)
    assert fingerprint(M) == fingerprint(M + 1e-15)
    assert fingerprint(M) != fingerprint(M + 1e-6)
    assert fingerprint(M).startswith("d3-")
