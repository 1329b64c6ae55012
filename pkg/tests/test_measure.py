import numpy as np
import pytest
import scipy.linalg

from qspectral import measure as ms
from qspectral.errors import CommutationError, NotNormalError
from qspectral.measure import Empty, Full, Points, Rectangle
from qspectral.qoperator import QMatrix, classify, complex_embed, operator_norm
from qspectral.qspace import QVector, inner
from qspectral.quaternion import ONE, Quaternion, SliceComplex, UnitImaginary
from qspectral.sampling import (
    random_frame,
    random_normal,
    random_polynomial,
    random_qmatrix,
    random_qvector,
    random_slice_complex,
    random_structured_normal,
)
from qspectral.slice_spectral import split
from conftest import I, J, K, qclose

DIAG_IJ = QMatrix.diag([I, J])
KINDS = ("generic", "repeated", "real", "anti", "mixed")


def _measure(rng, n=5, kind="generic", frame=None):
    T, _ = random_structured_normal(n, rng, kind)
    return T, ms.build_measure(T, frame or random_frame(rng))


class TestRegions:
    def test_set_algebra(self):
        R = Rectangle(0, 1, 0, 1)
        assert 0.5 + 0.5j in R and 2 + 0j not in R
        assert 2 + 0j in ~R
        assert 0.5 + 0.5j not in R - Points([0.5 + 0.5j])
        assert 3 + 0j in R | Points([3])
        assert 0.5j not in R & Rectangle(0.6, 2, 0, 2)
        assert 0j in Full() and 0j not in Empty()
        assert SliceComplex(0.5, 0.5, UnitImaginary(I)) in R

    def test_rejects_lower_half_plane(self):
        with pytest.raises(ValueError):
            Rectangle(0, 1, -1, 1)


class TestBuildMeasure:
    def test_single_class(self):
        F = ms.build_measure(DIAG_IJ)
        assert len(F.values) == 1
        assert (F.values[0].alpha, F.values[0].beta) == pytest.approx((0, 1))
        assert np.allclose(F.projections[0].data, QMatrix.identity(2).data, atol=1e-14)

    def test_real_distinct(self):
        F = ms.build_measure(QMatrix.diag([ONE, Quaternion.real_scalar(2)]))
        assert [(v.alpha, v.beta) for v in F.values] == [(1.0, 0.0), (2.0, 0.0)]
        assert np.allclose(F.projections[0].data, QMatrix.diag([ONE, Quaternion(0, 0, 0, 0)]).data)
        assert np.allclose(F.projections[1].data, QMatrix.diag([Quaternion(0, 0, 0, 0), ONE]).data)

    def test_planted_clusters(self, rng):
        lam = [Quaternion(0, 1, 0, 0), Quaternion(0, 0, 1, 0), Quaternion(2, 0, 0, 1),
               Quaternion(2, 0, -1, 0), Quaternion(2, 1, 0, 0), Quaternion.real_scalar(-1)]
        T, _ = random_normal(6, rng, lam)
        F = ms.build_measure(T, random_frame(rng))
        assert sorted(F.ranks()) == [1, 2, 3]
        for P, r in zip(F.projections, F.ranks()):
            # trace of P equals its rank
            assert np.trace(P.data[..., 0]) == pytest.approx(r, abs=1e-12)

    def test_rejects_non_normal(self, rng):
        with pytest.raises(NotNormalError):
            ms.build_measure(random_qmatrix(3, rng))


class TestAxioms:
    def test_empty_and_full(self, rng):
        T, F = _measure(rng)
        assert ms.evaluate(F, Empty()).frobenius() == 0
        assert (ms.evaluate(F, Full()) - QMatrix.identity(T.n)).frobenius() <= 1e-12

    @pytest.mark.parametrize("kind", KINDS)
    def test_all_axioms(self, rng, kind):
        for _ in range(3):
            _, F = _measure(rng, int(rng.integers(1, 9)), kind)
            res = ms.axiom_residuals(F, rng)
            assert set(res) == {"projection", "normalization", "multiplicativity", "scalar_measure", "J_commutation"}
            assert max(res.values()) <= 1e-10, res

    def test_multiplicativity_by_direct_sum(self, rng):
        _, F = _measure(rng, 6, "mixed")
        for _ in range(20):
            A, B = ms.random_rectangle(F, rng), ms.random_rectangle(F, rng)
            # oracle: sum the projections whose point lies in both regions
            direct = QMatrix.zeros(F.n)
            for v, P in F.points:
                if v in A and v in B:
                    direct = direct + P
            assert (ms.evaluate(F, A) @ ms.evaluate(F, B) - direct).frobenius() <= 1e-11


class TestScalarMeasure:
    def test_full_gives_norm(self, rng):
        _, F = _measure(rng)
        x = random_qvector(F.n, rng)
        val = ms.scalar_measure(F, x, x, Full())
        assert qclose(val, Quaternion.real_scalar(x.norm() ** 2), 1e-12 * x.norm() ** 2)

    def test_orthogonal_to_range(self, rng):
        _, F = _measure(rng, 5, "repeated")
        P0 = F.projections[0]
        x = random_qvector(F.n, rng)
        x = x - P0 @ x
        y = random_qvector(F.n, rng)
        assert abs(ms.scalar_measure(F, x, y, Points([F.values[0]]))) <= 1e-12 * y.norm() * (1 + x.norm())

    @pytest.mark.parametrize("kind", KINDS)
    def test_two_routes_agree(self, rng, kind):
        for _ in range(4):
            _, F = _measure(rng, int(rng.integers(1, 10)), kind)
            for _ in range(10):
                x, y = random_qvector(F.n, rng), random_qvector(F.n, rng)
                R = ms.random_rectangle(F, rng)
                a = ms.scalar_measure(F, x, y, R)
                b = ms.scalar_measure_expansion(F, x, y, R)
                assert abs(a - b) <= 1e-11 * x.norm() * y.norm()

    def test_two_routes_agree_in_rotated_basis(self, rng):
        _, F = _measure(rng, 5)
        W = np.linalg.qr(random_slice_complex(5, rng))[0]
        basis = F.basis.rotated(W)
        x, y = random_qvector(5, rng), random_qvector(5, rng)
        for v in F.values:
            R = Points([v])
            assert abs(ms.scalar_measure(F, x, y, R) - ms.scalar_measure_expansion(F, x, y, R, basis)) <= 1e-11 * x.norm() * y.norm()


class TestIntegral:
    def test_examples(self):
        F = ms.build_measure(QMatrix.diag([Quaternion.real_scalar(2)]))
        e = QVector.unit(0, 1)
        assert qclose(ms.integrate_representation(F, e, e), Quaternion.real_scalar(2), 1e-15)
        F = ms.build_measure(DIAG_IJ)
        e1 = QVector.unit(0, 2)
        assert qclose(ms.integrate_representation(F, e1, e1), I, 1e-14)

    @pytest.mark.parametrize("kind", KINDS)
    def test_matches_inner_product(self, rng, kind):
        T, F = _measure(rng, 7, kind)
        scale = max(1.0, operator_norm(T))
        for _ in range(100):
            x, y = random_qvector(7, rng), random_qvector(7, rng)
            gap = abs(ms.integrate_representation(F, x, y) - inner(x, T @ y))
            assert gap <= 1e-10 * scale * x.norm() * y.norm()

    def test_plain_left_product_holds_on_positive_slice(self, rng):
        T, F = _measure(rng, 5)
        for _ in range(20):
            x, _ = split(random_qvector(5, rng), F.J.J, F.frame.m)
            y = random_qvector(5, rng)
            gap = abs(ms.integrate_scalar_left(F, x, y) - inner(x, T @ y))
            assert gap <= 1e-10 * max(1.0, operator_norm(T)) * (1 + x.norm() * y.norm())

    def test_plain_left_product_fails_off_slice(self):
        # T = [[i]], x = j: <x|Ty> = k but i * F_{x,y} = -k
        F = ms.build_measure(QMatrix.diag([I]))
        x, y = QVector.unit(0, 1, J), QVector.unit(0, 1)
        assert qclose(inner(x, F.T @ y), K, 1e-15)
        assert qclose(ms.integrate_scalar_left(F, x, y), -K, 1e-15)
        assert qclose(ms.integrate_representation(F, x, y), K, 1e-15)

    def test_right_product_disagrees(self):
        F = ms.build_measure(QMatrix.diag([I]))
        x, y = QVector.unit(0, 1), QVector.unit(0, 1, J)
        assert abs(ms.integrate_scalar_right(F, x, y) - inner(x, F.T @ y)) > 1


class TestReconstruction:
    def test_single_point_gives_J(self):
        F = ms.build_measure(DIAG_IJ)
        assert (ms.reconstruct_operator(F) - F.J.J).frobenius() <= 1e-14

    def test_real_spectrum_self_adjoint(self, rng):
        T, F = _measure(rng, 6, "real")
        R = ms.reconstruct_operator(F)
        assert "self_adjoint" in classify(R, 1e-10)

    @pytest.mark.parametrize("kind", KINDS)
    def test_roundtrip(self, rng, kind):
        for _ in range(5):
            T, F = _measure(rng, int(rng.integers(1, 13)), kind)
            assert (ms.reconstruct_operator(F) - T).frobenius() <= 1e-9 * T.frobenius()


class TestFunctionalCalculus:
    def test_constant_one(self, rng):
        T, F = _measure(rng)
        assert (ms.functional_calculus(F, lambda z: 1.0) - QMatrix.identity(T.n)).frobenius() <= 1e-12

    def test_square(self, rng):
        T, F = _measure(rng, 6, "mixed")
        assert (ms.functional_calculus(F, lambda z: z * z) - T @ T).frobenius() <= 1e-9 * T.frobenius() ** 2

    def test_exponential_of_anti_self_adjoint(self, rng):
        T, F = _measure(rng, 6, "anti")
        assert "anti_self_adjoint" in classify(T, 1e-9)
        for t in (0.1, 1.0, 10.0):
            Ut = ms.functional_calculus(F, lambda z: np.exp(t * z))
            assert (Ut.adjoint() @ Ut - QMatrix.identity(6)).frobenius() <= 1e-9
            oracle = scipy.linalg.expm(t * complex_embed(T, F.frame))
            assert np.linalg.norm(complex_embed(Ut, F.frame) - oracle) <= 1e-9 * np.linalg.norm(oracle)

    def test_undefined_at_spectral_point(self):
        F = ms.build_measure(QMatrix.diag([Quaternion(0, 0, 0, 0), ONE]))
        with pytest.raises(ValueError):
            ms.functional_calculus(F, lambda z: 1 / z)
        with pytest.raises(ValueError):
            ms.functional_calculus(F, lambda z: np.inf)


class TestCommutant:
    def test_polynomials(self, rng):
        T, F = _measure(rng, 6, "repeated")
        for _ in range(5):
            S = random_polynomial(T, rng, F.J.J)
            report = ms.commutant_check(F, S, rng=rng)
            assert report.passed

    def test_identity(self, rng):
        T, F = _measure(rng, 4)
        assert ms.commutant_check(F, QMatrix.identity(4), rng=rng).max_residual == 0

    def test_rejects_non_commuting(self, rng):
        T, F = _measure(rng, 4)
        with pytest.raises(CommutationError) as exc:
            ms.commutant_check(F, random_qmatrix(4, rng), rng=rng)
        assert max(exc.value.residuals.values()) > 1e-3


def test_unique_across_solver_paths(rng):
    for kind in KINDS:
        T, _ = random_structured_normal(6, rng, kind)
        frame = random_frame(rng)
        F0 = ms.build_measure(T, frame)
        for seed in (1, 2, 3):
            F1 = ms.build_measure(T, frame, seed=seed)
            for region in [Points([v]) for v in F0.values] + [ms.random_rectangle(F0, rng) for _ in range(10)]:
                assert (ms.evaluate(F0, region) - ms.evaluate(F1, region)).frobenius() <= 1e-9


def test_report_shape(rng):
    _, F = _measure(rng, 4)
    rep = F.to_report()
    assert set(rep) == {"frame", "points"}
    assert sum(p["rank"] for p in rep["points"]) == 4
