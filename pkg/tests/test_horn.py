import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from oracles import angle_search, majorizes_exact, matmul_py, rotation_diag
from spectra_diag.errors import DimensionMismatch, IntervalViolation, MajorizationViolated
from spectra_diag.horn import (
    OrthogonalMatrix,
    hermitian_of,
    horn_construct,
    kernel2,
    orthostochastic_of,
    select_pivot,
)
from spectra_diag.seqkit import check_majorization

SQRT_HALF = math.sqrt(0.5)


@st.composite
def dyadic_pairs(draw, max_n=40):
    """Integer spectrum and d = mean of 4 random permutations of it (exactly representable)."""
    n = draw(st.integers(1, max_n))
    lam = draw(st.lists(st.integers(-1000, 1000), min_size=n, max_size=n))
    rnd = draw(st.randoms(use_true_random=False))
    perms = [rnd.sample(range(n), n) for _ in range(4)]
    d = [sum(lam[p[i]] for p in perms) / 4 for i in range(n)]
    return [float(x) for x in lam], d


class TestKernel2:
    def test_symmetric_split(self):
        k = kernel2(3, 1, 2)
        assert k.u == pytest.approx(SQRT_HALF, abs=1e-16)
        assert k.v == pytest.approx(SQRT_HALF, abs=1e-16)
        g = k.matrix()
        a = g @ np.diag([3.0, 1.0]) @ g.T
        assert np.diag(a) == pytest.approx([2.0, 2.0], abs=1e-15)
        # brute-force angle oracle agrees on the mixing weight
        theta, err = angle_search(3.0, 1.0, 2.0)
        assert err < 1e-10
        assert math.cos(theta) ** 2 == pytest.approx(k.u ** 2, abs=1e-9)

    def test_equal_eigenvalues_give_identity(self):
        k = kernel2(5, 5, 5)
        assert (k.u, k.v) == (1.0, 0.0)

    def test_upper_boundary_gives_identity(self):
        k = kernel2(1, 0, 1)
        assert (k.u, k.v) == (1.0, 0.0)
        g = k.matrix()
        assert np.diag(g @ np.diag([1.0, 0.0]) @ g.T).tolist() == [1.0, 0.0]

    def test_lower_boundary_is_a_swap(self):
        k = kernel2(1, 0, 0)
        assert (k.u, k.v) == (0.0, 1.0)

    def test_interval_violation(self):
        with pytest.raises(IntervalViolation, match="interval violation"):
            kernel2(3, 1, 3.5)
        with pytest.raises(IntervalViolation):
            kernel2(3, 1, 0.5)
        with pytest.raises(IntervalViolation):
            kernel2(1, 3, 2)

    def test_clamps_radicand_within_slack(self):
        k = kernel2(1.0, 0.0, 1.0 + 1e-14, tol=1e-12)
        assert (k.u, k.v) == (1.0, 0.0)
        k = kernel2(1.0, 0.0, 1.0 - 1e-15)
        assert not math.isnan(k.u) and not math.isnan(k.v)

    @given(st.floats(-100, 100), st.floats(0, 100), st.floats(0, 1))
    def test_unit_norm_and_diagonal(self, l2, gap, t):
        l1 = l2 + gap
        d1 = l2 + t * gap
        k = kernel2(l1, l2, d1)
        assert k.u >= 0 and k.v >= 0
        assert abs(k.u ** 2 + k.v ** 2 - 1) <= 4 * np.finfo(float).eps
        got = k.u ** 2 * l1 + k.v ** 2 * l2
        # gaps under the default slack collapse to the identity kernel
        scale = max(1, abs(l1) + abs(l2))
        assert got == pytest.approx(d1, abs=1e-12 * scale + 1e-13 * scale)


class TestSelectPivot:
    @staticmethod
    def scan_oracle(lam, d):
        """Every 1-based K where the interlacing chain holds."""
        return [k for k in range(1, len(lam))
                if lam[k - 1] >= d[k - 1] >= d[k] >= lam[k]]

    @pytest.mark.parametrize(
        "lam, d, expected",
        [([3, 2, 1], [2, 2, 2], 1), ([1, 1], [1, 1], 1), ([4, 0, 0], [2, 1, 1], 1)],
    )
    def test_examples(self, lam, d, expected):
        k = select_pivot(lam, d)
        assert k == expected
        assert k in self.scan_oracle(lam, d)

    def test_later_pivot(self):
        lam, d = [10, 6, 0, 0], [7, 5, 2, 2]
        k = select_pivot(lam, d)
        assert k == 2
        assert k == min(self.scan_oracle(lam, d))

    def test_no_pivot_means_not_majorized(self):
        with pytest.raises(MajorizationViolated):
            select_pivot([2, 2], [1, 1])

    @given(dyadic_pairs(max_n=12))
    def test_pivot_satisfies_chain(self, pair):
        lam, d = (sorted(x, reverse=True) for x in pair)
        if len(lam) < 2:
            return
        k = select_pivot(lam, d)
        assert k in self.scan_oracle(lam, d)


class TestHornConstruct:
    def test_two_by_two(self):
        cert = horn_construct([3, 1], [2, 2])
        q = cert.q.entries
        assert np.abs(q) == pytest.approx(np.full((2, 2), SQRT_HALF), abs=1e-16)
        assert q.tolist() == [[SQRT_HALF, -SQRT_HALF], [SQRT_HALF, SQRT_HALF]]
        a = hermitian_of(cert.q, [3, 1])
        assert np.diag(a) == pytest.approx([2, 2], abs=1e-15)
        theta, err = angle_search(3.0, 1.0, 2.0)
        assert rotation_diag(theta, 3.0, 1.0) == pytest.approx((2.0, 2.0), abs=1e-9)

    @pytest.mark.parametrize("lam", [[7.0], [3.0, -1.0, 2.5, 2.5], list(range(20, 0, -1)), [0.1, -4, 9, 0.3]])
    def test_identical_sequences_give_identity(self, lam):
        cert = horn_construct(lam, list(lam))
        assert np.array_equal(cert.q.entries, np.eye(len(lam)))
        assert cert.diag_residual == 0.0

    def test_three_by_three_steps(self):
        cert = horn_construct([3, 2, 1], [2, 2, 2])
        assert [(s.k, s.lambda_k1_new) for s in cert.steps] == [(1, 3.0), (1, 2.0)]
        second = cert.steps[1]
        assert (second.lambda_k, second.lambda_k1, second.d_k) == (3.0, 1.0, 2.0)
        q = cert.q.entries.tolist()
        qt = [list(r) for r in zip(*q)]
        a = matmul_py(matmul_py(q, [[3, 0, 0], [0, 2, 0], [0, 0, 1]]), qt)
        assert [a[i][i] for i in range(3)] == pytest.approx([2, 2, 2], abs=1e-14)
        qtq = matmul_py(qt, q)
        assert qtq == [pytest.approx(r, abs=1e-15) for r in np.eye(3).tolist()]

    def test_unsorted_user_order(self):
        lam = [1.0, 5.0, -2.0, 3.0]
        d = [2.0, 0.5, 3.5, 1.0]
        cert = horn_construct(lam, d)
        a = hermitian_of(cert.q, lam)
        assert np.diag(a) == pytest.approx(d, abs=1e-13)
        assert np.sort(np.linalg.eigvalsh(a)) == pytest.approx(sorted(lam), abs=1e-12)

    def test_errors(self):
        with pytest.raises(MajorizationViolated, match="majorization violated"):
            horn_construct([2, 2], [3, 1])
        with pytest.raises(DimensionMismatch):
            horn_construct([1, 2], [1.5])

    def test_all_equal(self):
        cert = horn_construct([4.0] * 6, [4.0] * 6)
        assert np.array_equal(cert.q.entries, np.eye(6))
        with pytest.raises(MajorizationViolated):
            horn_construct([4.0] * 3, [4.5, 4.0, 3.5])

    def test_near_boundary_no_nan(self):
        cert = horn_construct([1.0, 0.0], [1.0 - 1e-15, 1e-15])
        assert np.all(np.isfinite(cert.q.entries))
        assert cert.diag_residual < 1e-14

    @settings(max_examples=60, deadline=None)
    @given(dyadic_pairs())
    def test_properties_on_exact_pairs(self, pair):
        lam, d = pair
        assert majorizes_exact(lam, d)
        n = len(lam)
        cert = horn_construct(lam, d, debug=True)
        q = cert.q.entries
        scale = max(1.0, max(abs(x) for x in lam))
        assert len(cert.steps) == max(n - 1, 0)
        assert np.max(np.abs(q.T @ q - np.eye(n))) <= 1e-12 * n
        a = hermitian_of(cert.q, lam)
        assert np.max(np.abs(np.diag(a) - d)) <= 1e-10 * n * scale
        s = orthostochastic_of(cert.q)
        assert np.max(np.abs(s.entries @ np.array(lam) - d)) <= 1e-10 * n * scale
        ev = np.sort(np.linalg.eigvalsh(a))
        assert np.max(np.abs(ev - np.sort(lam))) <= 1e-8 * scale

    @settings(max_examples=40, deadline=None)
    @given(dyadic_pairs(max_n=20))
    def test_intermediate_spectra_majorize_target(self, pair):
        lam, d = pair
        cert = horn_construct(lam, d)
        finished, active = [], sorted(lam, reverse=True)
        for step in cert.steps:
            k = step.k - 1
            assert active[k] == step.lambda_k and active[k + 1] == step.lambda_k1
            active[k + 1] = step.lambda_k1_new
            finished.append(step.d_k)
            del active[k]
            assert check_majorization(finished + active, d, 1e-12).holds

    @settings(max_examples=30, deadline=None)
    @given(dyadic_pairs(max_n=15), st.randoms(use_true_random=False))
    def test_permuting_d_permutes_rows(self, pair, rnd):
        lam, d = pair
        assume(len(set(d)) == len(d))
        n = len(d)
        perm = rnd.sample(range(n), n)
        d_perm = [d[perm[i]] for i in range(n)]
        q0 = horn_construct(lam, d).q.entries
        q1 = horn_construct(lam, d_perm).q.entries
        assert np.array_equal(q1, q0[perm])


class TestOrthostochastic:
    def test_identity(self):
        s = orthostochastic_of(np.eye(3))
        assert np.array_equal(s.entries, np.eye(3))
        assert s.row_residual == s.col_residual == 0.0

    def test_two_by_two(self):
        q = np.array([[SQRT_HALF, -SQRT_HALF], [SQRT_HALF, SQRT_HALF]])
        s = orthostochastic_of(OrthogonalMatrix(q))
        assert s.entries == pytest.approx(np.full((2, 2), 0.5), abs=1e-15)

    @settings(max_examples=50, deadline=None)
    @given(dyadic_pairs(max_n=4).filter(lambda p: len(p[0]) == 4))
    def test_size_four_residuals(self, pair):
        s = orthostochastic_of(horn_construct(*pair).q)
        assert s.row_residual <= 1e-14 and s.col_residual <= 1e-14
        assert np.all(s.entries >= 0)


class TestHermitianOf:
    def test_identity(self):
        assert hermitian_of(np.eye(2), [7, -2]).tolist() == [[7, 0], [0, -2]]

    def test_two_by_two(self):
        cert = horn_construct([3, 1], [2, 2])
        assert hermitian_of(cert.q, [3, 1]) == pytest.approx(np.array([[2, 1], [1, 2]]), abs=1e-15)

    @given(dyadic_pairs(max_n=10))
    def test_exactly_symmetric(self, pair):
        a = hermitian_of(horn_construct(*pair).q, pair[0])
        assert np.array_equal(a, a.T)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            hermitian_of(np.eye(2), [1, 2, 3])


def test_orthogonal_matrix_certification():
    with pytest.raises(ValueError, match="not orthogonal"):
        OrthogonalMatrix(np.array([[1.0, 1e-3], [0.0, 1.0]]))
    m = OrthogonalMatrix(np.array([[1.0, 1e-3], [0.0, 1.0]]), certify=False)
    assert m.residual == pytest.approx(1e-3)
    with pytest.raises(ValueError):
        m.entries[0, 0] = 2.0
