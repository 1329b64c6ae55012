import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from qspectral.qspace import (
    HilbertBasis,
    QVector,
    RankDeficiencyError,
    fourier_expand,
    gram_schmidt,
    inner,
    inner_via_polarization,
    left_multiply,
)
from qspectral.quaternion import ONE, Quaternion
from qspectral.sampling import random_qvector, random_quaternion
from conftest import I, J, K, qclose

elems = st.floats(min_value=-10, max_value=10, allow_nan=False)


def vec_pairs(max_n=6):
    return st.integers(1, max_n).flatmap(
        lambda n: st.tuples(arrays(np.float64, (n, 4), elements=elems), arrays(np.float64, (n, 4), elements=elems))
    )


def _inner_oracle(u, v):
    # sum of conj(u_k) v_k, one entry at a time
    total = Quaternion(0, 0, 0, 0)
    for a, b in zip(u.entries(), v.entries()):
        total = total + a.conj() * b
    return total


class TestInner:
    def test_example(self):
        u = QVector.unit(0, 1, J)
        v = QVector.unit(0, 1)
        assert inner(u, v) == -J

    @settings(max_examples=100, deadline=None)
    @given(vec_pairs())
    def test_matches_entrywise_sum(self, pair):
        u, v = QVector(pair[0]), QVector(pair[1])
        assert abs(inner(u, v) - _inner_oracle(u, v)) <= 1e-12 * (1 + u.norm() * v.norm())

    def test_axioms(self, rng):
        for _ in range(50):
            n = int(rng.integers(1, 8))
            u, v = random_qvector(n, rng), random_qvector(n, rng)
            q = random_quaternion(rng)
            assert qclose(inner(u, v * q), inner(u, v) * q, 1e-12 * (1 + abs(q)) * (1 + u.norm() * v.norm()))
            assert qclose(inner(u, v), inner(v, u).conj(), 1e-12 * (1 + u.norm() * v.norm()))
            nrm = inner(u, u)
            assert nrm.imag_norm <= 1e-12 * nrm.real and nrm.real > 0

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            inner(QVector.zeros(2), QVector.zeros(3))
        with pytest.raises(ValueError):
            inner_via_polarization(QVector.zeros(2), QVector.zeros(3))


class TestPolarization:
    def test_examples(self):
        e1 = QVector.unit(0, 1)
        assert qclose(inner_via_polarization(e1, e1), ONE, 1e-15)
        assert qclose(inner_via_polarization(e1, e1 * I), I, 1e-15)

    @settings(max_examples=200, deadline=None)
    @given(vec_pairs(8))
    def test_matches_inner(self, pair):
        u, v = QVector(pair[0]), QVector(pair[1])
        assert abs(inner_via_polarization(u, v) - inner(u, v)) <= 1e-11 * (1 + u.norm() * v.norm())


class TestGramSchmidt:
    def test_canonical_unchanged(self):
        basis = gram_schmidt(HilbertBasis.canonical(3).vectors)
        assert np.allclose(basis.columns, HilbertBasis.canonical(3).columns)

    def test_projection_removes_quaternionic_multiple(self):
        e1, e2 = QVector.unit(0, 2), QVector.unit(1, 2)
        basis = gram_schmidt([e1, e1 * I + e2])
        assert np.allclose(basis[1].data, e2.data, atol=1e-15)

    def test_random_family_orthonormal(self, rng):
        for n in (1, 3, 8, 16):
            basis = gram_schmidt([random_qvector(n, rng) for _ in range(n)])
            assert basis.orthonormality_defect() <= 1e-10

    def test_rank_deficiency_names_index(self, rng):
        u, v = random_qvector(3, rng), random_qvector(3, rng)
        w = u * random_quaternion(rng) + v * random_quaternion(rng)
        with pytest.raises(RankDeficiencyError) as exc:
            gram_schmidt([u, v, w])
        assert exc.value.index == 2


class TestFourier:
    def test_canonical_coefficients(self):
        x = QVector.unit(0, 3, K)
        coeffs = fourier_expand(x, HilbertBasis.canonical(3))
        assert coeffs[0] == K and abs(coeffs[1]) == 0 and abs(coeffs[2]) == 0

    def test_basis_conditions(self, rng):
        for _ in range(30):
            n = int(rng.integers(1, 10))
            basis = gram_schmidt([random_qvector(n, rng) for _ in range(n)])
            x, y = random_qvector(n, rng), random_qvector(n, rng)
            assert basis.parseval_defect(x) <= 1e-11 * x.norm() ** 2
            assert basis.expansion_defect(x, y) <= 1e-11 * x.norm() * y.norm()
            assert basis.complement_residual(x) <= 1e-11 * x.norm()
            # x = sum z <z|x>
            coeffs = fourier_expand(x, basis)
            back = QVector.zeros(n)
            for z, c in zip(basis.vectors, coeffs):
                back = back + z * c
            assert (back - x).norm() <= 1e-12 * x.norm()


class TestLeftMultiply:
    def test_canonical_is_entrywise(self, rng):
        x = random_qvector(4, rng)
        q = random_quaternion(rng)
        got = left_multiply(q, x, HilbertBasis.canonical(4))
        for a, b in zip(got.entries(), x.entries()):
            assert qclose(a, q * b, 1e-14)

    def test_identity_and_homomorphism(self, rng):
        for _ in range(30):
            n = int(rng.integers(1, 7))
            basis = gram_schmidt([random_qvector(n, rng) for _ in range(n)])
            x = random_qvector(n, rng)
            p, q = random_quaternion(rng), random_quaternion(rng)
            assert (left_multiply(ONE, x, basis) - x).norm() <= 1e-12 * x.norm()
            lhs = left_multiply(p, left_multiply(q, x, basis), basis)
            rhs = left_multiply(p * q, x, basis)
            assert (lhs - rhs).norm() <= 1e-12 * (1 + abs(p) * abs(q)) * x.norm()

    def test_right_linear(self, rng):
        basis = gram_schmidt([random_qvector(3, rng) for _ in range(3)])
        x, q, r = random_qvector(3, rng), random_quaternion(rng), random_quaternion(rng)
        lhs = left_multiply(q, x * r, basis)
        rhs = left_multiply(q, x, basis) * r
        assert (lhs - rhs).norm() <= 1e-12 * (1 + abs(q) * abs(r)) * x.norm()

    def test_depends_on_basis(self, rng):
        x = random_qvector(2, rng)
        other = gram_schmidt([random_qvector(2, rng) for _ in range(2)])
        a = left_multiply(I, x, HilbertBasis.canonical(2))
        b = left_multiply(I, x, other)
        assert (a - b).norm() > 1e-6


def test_vectors_are_immutable(rng):
    x = random_qvector(2, rng)
    with pytest.raises(ValueError):
        x.data[0, 0] = 1.0
