import math

import numpy as np
import pytest

from qspectral.measure import Points, build_measure, scalar_measure
from qspectral.qoperator import QMatrix, classify
from qspectral.qspace import QVector
from qspectral.quaternion import Quaternion, SliceFrame, class_representative
from qspectral.sampling import random_frame
from qspectral.unbounded import (
    DiagonalSymbol,
    build_tower,
    measure_consistency,
    projection_nesting,
    unboundedness_signature,
)
from conftest import I, J, K, qclose


class TestSymbols:
    def test_k_times_m(self):
        tower = build_tower(DiagonalSymbol.k_times_m(I), (2, 4))
        assert np.array_equal(tower.matrices[0].data, QMatrix.diag([I, I * 2.0]).data)
        assert np.array_equal(tower.matrices[1].data, QMatrix.diag([I * float(k) for k in range(1, 5)]).data)

    def test_real_symbol_self_adjoint(self):
        sym = DiagonalSymbol.custom([Quaternion.real_scalar(1)], growth="linear")
        assert [q.w for q in sym.values(4)] == [1.0, 2.0, 3.0, 4.0]
        for _, T in build_tower(sym, (2, 5)):
            assert "self_adjoint" in classify(T)

    def test_custom_prefix_normal_everywhere(self):
        sym = DiagonalSymbol.custom([I, J * 2.0, K * 3.0])
        assert qclose(sym(6), K * 6.0, 1e-15)
        for _, T in build_tower(sym, (2, 3, 8)):
            cls = classify(T)
            assert "normal" in cls and cls.residuals["normal"] <= 1e-12

    def test_constant_growth(self):
        sym = DiagonalSymbol.custom([I, J], growth="constant")
        assert sym(10) == J

    @pytest.mark.parametrize("sizes", [(4, 4), (8, 4), (), (0, 2)])
    def test_rejects_bad_sizes(self, sizes):
        with pytest.raises(ValueError):
            build_tower(DiagonalSymbol.k_times_m(), sizes)

    def test_rejects_bad_family(self):
        with pytest.raises(ValueError):
            DiagonalSymbol("nope", DiagonalSymbol.k_times_m().m)
        with pytest.raises(ValueError):
            DiagonalSymbol.custom([])


class TestSignature:
    def test_k_times_m(self):
        sizes = (4, 8, 16, 32, 64)
        sig = unboundedness_signature(build_tower(DiagonalSymbol.k_times_m(J), sizes))
        for n, nrm, z in zip(sizes, sig["norms"], sig["z_norms"]):
            assert nrm == pytest.approx(n, rel=1e-12)
            assert abs(z - n / math.sqrt(1 + n * n)) <= 1e-10
        assert sig["unbounded"] and not sig["bounded"]
        assert sig["z_contractive"] and sig["z_monotone"]
        assert max(sig["J_commutation"]) <= 1e-12 and sig["nesting_residual"] == 0

    def test_bounded_symbol(self):
        sym = DiagonalSymbol.custom([Quaternion.real_scalar(1)], growth="constant")
        sig = unboundedness_signature(build_tower(sym, (2, 4, 8)))
        assert sig["bounded"] and not sig["unbounded"]
        assert sig["z_norms"] == pytest.approx([1 / math.sqrt(2)] * 3, abs=1e-14)

    def test_mixed_symbol_monotone(self):
        sym = DiagonalSymbol.custom([Quaternion(3, 0, 0, 0), I, Quaternion(0.5, 0, 2, 0)])
        sig = unboundedness_signature(build_tower(sym, (1, 2, 3, 6, 12)))
        assert sig["z_monotone"]
        # oracle: the largest entry modulus among the first n symbol values
        expect = [max(abs(q) for q in sym.values(n)) for n in (1, 2, 3, 6, 12)]
        assert sig["norms"] == pytest.approx(expect, rel=1e-12)


class TestConsistency:
    def test_first_unit_vector(self):
        sym = DiagonalSymbol.k_plus_km(I)
        rep = class_representative(sym(1), SliceFrame(I))
        for size in (1, 8, 16):
            F = build_measure(build_tower(sym, (size,)).matrices[0])
            e = QVector.unit(0, size)
            at_rep = scalar_measure(F, e, e, Points([rep]))
            assert qclose(at_rep, Quaternion.real_scalar(1), 1e-12)

    def test_random_pairs(self, rng):
        frame = random_frame(rng)
        for sym in (DiagonalSymbol.k_times_m(frame.m), DiagonalSymbol.k_plus_km(frame.m),
                    DiagonalSymbol.custom([I, J * 2.0, K * 3.0], m=frame.m)):
            rep = measure_consistency(build_tower(sym, (8, 16)), frame, rng)
            assert rep["passed"], rep
            assert rep["exclusion_residual"] <= 1e-12
            assert "finitely supported" in rep["domain_model"]

    def test_projection_nesting(self, rng):
        for sym in (DiagonalSymbol.k_times_m(), DiagonalSymbol.k_plus_km()):
            assert projection_nesting(build_tower(sym, (4, 8, 16))) <= 1e-10
