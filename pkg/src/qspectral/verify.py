"""Named invariant checks across every module, run on one operator plus
random trials.

Each check yields a :class:`Check` with a residual and the tolerance it is
held to. The suite is deterministic for a given seed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.optimize

from . import measure as ms
from .qoperator import (
    DEFAULT_FRAME,
    QMatrix,
    classify,
    complex_embed,
    delta,
    inverse,
    inverse_z_transform,
    operator_norm,
    z_transform,
)
from .qspace import HilbertBasis, QVector, gram_schmidt, inner, inner_via_polarization, left_multiply
from .quaternion import (
    Quaternion,
    SliceFrame,
    class_representative,
    same_class,
    slice_membership,
)
from .sampling import (
    as_rng,
    random_nonzero_quaternion,
    random_normal,
    random_polynomial,
    random_qmatrix,
    random_quaternion,
    random_qvector,
    random_slice_complex,
    random_unitary,
)
from .slice_spectral import (
    check_spherical_spectrum,
    construct_J_via_z_transform,
    extend_operator,
    induce_complex,
    phi,
    split,
)
from .unbounded import DiagonalSymbol, build_tower, measure_consistency, projection_nesting


@dataclass(frozen=True)
class Check:
    name: str
    module: str
    residual: float
    tol: float

    @property
    def passed(self) -> bool:
        return bool(self.residual <= self.tol)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "module": self.module,
            "residual": self.residual,
            "tol": self.tol,
            "passed": self.passed,
        }


def multiset_distance(a, b) -> float:
    """Largest gap under the best one-to-one matching of two complex multisets."""
    a, b = np.asarray(a, dtype=complex), np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        return np.inf
    if not a.size:
        return 0.0
    cost = np.abs(a[:, None] - b[None, :])
    rows, cols = scipy.optimize.linear_sum_assignment(cost)
    return float(cost[rows, cols].max())


def _qd(p: Quaternion, q: Quaternion) -> float:
    return abs(p - q)


def quaternion_checks(rng, trials: int = 200) -> list[Check]:
    mod = "quaternion_core"
    mult = conj = sim = inter = idem = 0.0
    frame = DEFAULT_FRAME
    for _ in range(trials):
        p, q = random_quaternion(rng), random_quaternion(rng)
        mult = max(mult, abs(abs(p * q) - abs(p) * abs(q)) / (1 + abs(p) * abs(q)))
        conj = max(conj, _qd(q.conj().conj(), q), abs(abs(q.conj()) - abs(q)))
        s = random_nonzero_quaternion(rng)
        sim = max(sim, 0.0 if same_class(p, s.inverse() * p * s, 1e-10 * (1 + abs(p))) else 1.0)
        rep = class_representative(p, frame.m)
        again = class_representative(rep.to_quaternion(), frame.m)
        idem = max(idem, abs(again.alpha - rep.alpha) + abs(again.beta - rep.beta))
        # a point of the m-plane lies in the n-plane only when it is real
        a, b = p.real, p.imag_norm
        on_m = Quaternion.real_scalar(a) + frame.m.q * b
        hit = slice_membership(on_m, frame.n, 1e-9)
        inter = max(inter, 0.0 if hit == (b <= 1e-9) and slice_membership(Quaternion.real_scalar(a), frame.n, 1e-12) else 1.0)
    return [
        Check("modulus_multiplicative", mod, mult, 1e-12),
        Check("conjugation_involution", mod, conj, 1e-12),
        Check("similarity_same_class", mod, sim, 0.0),
        Check("class_representative_idempotent", mod, idem, 1e-12),
        Check("slice_planes_meet_in_reals", mod, inter, 0.0),
    ]


def qspace_checks(rng, trials: int = 100) -> list[Check]:
    mod = "qspace"
    pol = pars = exp = comp = lmul = 0.0
    for _ in range(trials):
        n = int(rng.integers(1, 9))
        u, v = random_qvector(n, rng), random_qvector(n, rng)
        pol = max(pol, _qd(inner_via_polarization(u, v), inner(u, v)) / (u.norm() * v.norm() + 1))
        basis = gram_schmidt([random_qvector(n, rng) for _ in range(n)])
        pars = max(pars, basis.parseval_defect(u) / (u.norm() ** 2 + 1))
        exp = max(exp, basis.expansion_defect(u, v) / (u.norm() * v.norm() + 1))
        comp = max(comp, basis.complement_residual(u) / (u.norm() + 1))
        p, q = random_quaternion(rng), random_quaternion(rng)
        lhs = left_multiply(p, left_multiply(q, u, basis), basis)
        rhs = left_multiply(p * q, u, basis)
        lmul = max(lmul, (lhs - rhs).norm() / (1 + abs(p) * abs(q) * u.norm()))
    return [
        Check("polarization_identity", mod, pol, 1e-11),
        Check("parseval", mod, pars, 1e-11),
        Check("basis_expansion_of_inner_product", mod, exp, 1e-11),
        Check("trivial_orthogonal_complement", mod, comp, 1e-11),
        Check("left_multiplication_homomorphism", mod, lmul, 1e-12),
    ]


def qoperator_checks(T: QMatrix, rng, trials: int = 20) -> list[Check]:
    mod = "qoperator"
    n = T.n
    adj = emb = dlt = cls = 0.0
    for _ in range(trials):
        A, B = random_qmatrix(n, rng), random_qmatrix(n, rng)
        x, y = random_qvector(n, rng), random_qvector(n, rng)
        adj = max(adj, _qd(inner(x, A @ y), inner(A.adjoint() @ x, y)) / (1 + A.frobenius() * x.norm() * y.norm()))
        cA, cB = complex_embed(A), complex_embed(B)
        r = max(
            np.linalg.norm(complex_embed(A @ B) - cA @ cB) / (A.frobenius() * B.frobenius()),
            np.linalg.norm(complex_embed(A.adjoint()) - cA.conj().T) / A.frobenius(),
            np.linalg.norm(complex_embed(QMatrix.identity(n)) - np.eye(2 * n)),
            np.linalg.norm(complex_embed(inverse(A)) @ cA - np.eye(2 * n)) / np.linalg.cond(cA),
        )
        emb = max(emb, r)
        q, s = random_quaternion(rng), random_nonzero_quaternion(rng)
        dlt = max(dlt, (delta(T, q) - delta(T, s.inverse() * q * s)).frobenius() / (1 + T.frobenius() ** 2 + abs(q) ** 2))
        U = random_unitary(n, rng)
        cls = max(cls, 0.0 if set(classify(U.adjoint() @ T @ U, 1e-9)) == set(classify(T, 1e-9)) else 1.0)
    Z = z_transform(T)
    zres = (inverse_z_transform(Z) - T).frobenius() / max(1.0, T.frobenius())
    Th = T.adjoint()
    zcomm = max((Z @ T - T @ Z).frobenius(), (Z @ Th - Th @ Z).frobenius()) / max(1.0, T.frobenius() ** 2)
    return [
        Check("adjoint_identity", mod, adj, 1e-12),
        Check("embedding_homomorphism", mod, emb, 1e-11),
        Check("delta_similarity_invariance", mod, dlt, 1e-11),
        Check("classify_unitary_invariance", mod, cls, 0.0),
        Check("z_transform_contraction", mod, max(0.0, operator_norm(Z) - (1 - 1e-15)), 0.0),
        Check("z_transform_roundtrip", mod, zres, 1e-8),
        Check("z_transform_commutes", mod, zcomm, 1e-9),
    ]


def slice_checks(T: QMatrix, F: ms.QSpectralMeasure, rng, trials: int = 50) -> list[Check]:
    mod = "slice_spectral"
    frame = F.frame
    es = F.eigensystem
    J = F.J.J
    n = T.n
    scale = max(1.0, T.frobenius())
    Th = T.adjoint()
    jd = F.J.defects()
    out = [
        Check("eigen_residual", mod, es.residual, 1e-9),
        Check("eigenbasis_unitary", mod, es.unitarity_defect, 1e-10),
        Check("J_anti_self_adjoint_unitary", mod, max(jd.values()), 1e-10),
        Check("J_commutes_with_T", mod, max((J @ T - T @ J).frobenius(), (J @ Th - Th @ J).frobenius()) / scale, 1e-9),
    ]
    Jz = construct_J_via_z_transform(T, frame).J
    out.append(Check("z_route_J_commutes_with_T", mod, (Jz @ T - T @ Jz).frobenius() / scale, 1e-9))
    poly = 0.0
    for _ in range(5):
        S = random_polynomial(T, rng, J)
        poly = max(poly, (J @ S - S @ J).frobenius() / max(1.0, S.frobenius()))
    out.append(Check("J_commutes_with_polynomials", mod, poly, 1e-9))

    reas = orth = member = phi_res = 0.0
    for _ in range(trials):
        x = random_qvector(n, rng)
        xp, xm = split(x, J, frame.m)
        reas = max(reas, (xp + xm - x).norm() / (1 + x.norm()))
        orth = max(orth, float(frame.plane_value(inner(xp, xm).as_array()).__abs__()) / (1 + x.norm() ** 2))
        member = max(
            member,
            ((J @ xp) - xp.right_mul(frame.m.q)).norm() / (1 + x.norm()),
            ((J @ xm) + xm.right_mul(frame.m.q)).norm() / (1 + x.norm()),
        )
        phi_res = max(phi_res, (phi(phi(x, frame), frame) + x).norm() / (1 + x.norm()))
    for z in F.basis.basis.vectors:
        zp, zm = split(phi(z, frame), J, frame.m)
        phi_res = max(phi_res, zp.norm())
    bd = F.basis.defects()
    Lm = max(
        (left_multiply(frame.m.q, e, F.basis.basis) - J @ e).norm()
        for e in HilbertBasis.canonical(n).vectors
    )
    out += [
        Check("split_reassembly", mod, reas, 1e-12),
        Check("split_slice_orthogonality", mod, orth, 1e-11),
        Check("split_membership", mod, member, 1e-12),
        Check("phi_exchanges_slices", mod, phi_res, 1e-12),
        Check("slice_basis_membership", mod, bd["membership"], 1e-10),
        Check("slice_inner_products_in_plane", mod, bd["gram_off_plane"], 1e-11),
        Check("slice_basis_orthonormal", mod, bd["orthonormality"], 1e-10),
        Check("left_multiplication_by_m_is_J", mod, Lm, 1e-10),
    ]

    basis = F.basis
    ext = 0.0
    for _ in range(10):
        A, B = random_slice_complex(n, rng), random_slice_complex(n, rng)
        At, Bt = extend_operator(A, basis), extend_operator(B, basis)
        nA, nB = np.linalg.norm(A), np.linalg.norm(B)
        Ainv = np.linalg.inv(A)
        ext = max(
            ext,
            (extend_operator(A @ B, basis) - At @ Bt).frobenius() / (nA * nB),
            (extend_operator(A.conj().T, basis) - At.adjoint()).frobenius() / nA,
            (At @ extend_operator(Ainv, basis) - QMatrix.identity(n)).frobenius() / np.linalg.cond(A),
            abs(operator_norm(At) - np.linalg.norm(A, 2)) / nA,
            (J @ At - At @ J).frobenius() / nA,
            np.linalg.norm(induce_complex(At, basis) - A) / nA,
        )
    Tplus = induce_complex(T, basis)
    back = (extend_operator(Tplus, basis) - T).frobenius() / scale
    sig = multiset_distance(np.linalg.eigvals(Tplus), [d.to_complex() for d in es.D])
    out += [
        Check("extension_algebra", mod, ext, 1e-11),
        Check("extend_induce_roundtrip", mod, back, 1e-11),
        Check("restriction_spectrum_matches", mod, sig / max(1.0, operator_norm(T)), 1e-9),
    ]
    chk = check_spherical_spectrum(T, [c.value for c in es.clusters], rng, probes=20)
    out += [
        Check("spectrum_points_singular", mod, chk.on_spectrum, chk.on_threshold),
        Check("off_spectrum_invertible", mod, max(0.0, 1.0 - chk.off_ratio), 1e-8),
    ]
    return out


def measure_checks(T: QMatrix, F: ms.QSpectralMeasure, rng, trials: int = 50) -> list[Check]:
    mod = "spectral_measure"
    n = T.n
    normT = operator_norm(T)
    ax = ms.axiom_residuals(F, rng)
    out = [Check(f"measure_axiom_{k}", mod, v, 1e-10) for k, v in ax.items()]
    two = rep = 0.0
    for _ in range(trials):
        x, y = random_qvector(n, rng), random_qvector(n, rng)
        R = ms.random_rectangle(F, rng)
        two = max(two, _qd(ms.scalar_measure(F, x, y, R), ms.scalar_measure_expansion(F, x, y, R)) / (x.norm() * y.norm()))
        rep = max(rep, _qd(ms.integrate_representation(F, x, y), inner(x, T @ y)) / (max(1.0, normT) * x.norm() * y.norm()))
    out += [
        Check("four_term_expansion", mod, two, 1e-11),
        Check("integral_representation", mod, rep, 1e-10),
        Check("operator_reconstruction", mod, (ms.reconstruct_operator(F) - T).frobenius() / max(1.0, T.frobenius()), 1e-9),
    ]
    f2 = ms.functional_calculus(F, lambda z: z * z)
    fexp = ms.functional_calculus(F, np.exp)
    fg = ms.functional_calculus(F, lambda z: z * np.exp(z))
    fid = ms.functional_calculus(F, lambda z: z)
    out += [
        Check("functional_calculus_square", mod, (f2 - T @ T).frobenius() / max(1.0, T.frobenius() ** 2), 1e-9),
        Check("functional_calculus_multiplicative", mod, (fg - fid @ fexp).frobenius() / max(1.0, fg.frobenius()), 1e-9),
    ]
    # anti self-adjoint part generates a unitary group
    A = (T - T.adjoint()) * 0.5
    FA = ms.build_measure(A, F.frame)
    uni = 0.0
    for t in (0.1, 1.0, 10.0):
        Ut = ms.functional_calculus(FA, lambda z, t=t: np.exp(t * z))
        uni = max(uni, (Ut.adjoint() @ Ut - QMatrix.identity(n)).frobenius())
    out.append(Check("exp_anti_self_adjoint_unitary", mod, uni, 1e-9))
    comm = 0.0
    for _ in range(3):
        S = random_polynomial(T, rng, F.J.J)
        comm = max(comm, ms.commutant_check(F, S, rng=rng).max_residual)
    out.append(Check("commutant", mod, comm, 1e-9))
    F2 = ms.build_measure(T, F.frame, seed=int(rng.integers(2**31)))
    uniq = 0.0
    for region in [ms.Points([v]) for v in F.values] + [ms.random_rectangle(F, rng) for _ in range(10)]:
        uniq = max(uniq, (ms.evaluate(F, region) - ms.evaluate(F2, region)).frobenius())
    out.append(Check("uniqueness_across_eigensolver_paths", mod, uniq, 1e-9))
    out.append(Check("right_multiplied_integral_disagrees", mod, _order_matters(), 0.0))
    return out


def _order_matters() -> float:
    """0 when the right-multiplied integral differs from ``<x|Ty>`` on the
    single-point example ``T = [[i]]``, ``x = 1``, ``y = j``; 1 otherwise."""
    T = QMatrix.diag([Quaternion(0, 1, 0, 0)])
    F = ms.build_measure(T, DEFAULT_FRAME)
    x, y = QVector.unit(0, 1), QVector.unit(0, 1, Quaternion(0, 0, 1, 0))
    gap = _qd(ms.integrate_scalar_right(F, x, y), inner(x, T @ y))
    return 0.0 if gap > 1e-6 else 1.0


def unbounded_checks(frame: SliceFrame, rng, sizes=(4, 8, 16)) -> list[Check]:
    mod = "unbounded_harness"
    from .unbounded import unboundedness_signature

    tower = build_tower(DiagonalSymbol.k_times_m(frame.m), sizes)
    sig = unboundedness_signature(tower, frame)
    formula = max(abs(z - s / math.sqrt(1 + s * s)) for z, s in zip(sig["z_norms"], sizes))
    shape = 0.0 if (sig["unbounded"] and sig["z_contractive"] and sig["z_monotone"]) else 1.0
    cons = measure_consistency(tower, frame, rng)
    nest = projection_nesting(build_tower(DiagonalSymbol.k_plus_km(frame.m), sizes), frame)
    return [
        Check("z_norm_formula", mod, formula, 1e-10),
        Check("unboundedness_signature", mod, shape, 0.0),
        Check("truncation_J_commutation", mod, max(sig["J_commutation"]), 1e-9),
        Check("measure_consistency", mod, max(cons["inner_residual"], cons["measure_residual"], cons["exclusion_residual"]), 1e-10),
        Check("projection_nesting", mod, nest, 1e-10),
    ]


def run_suite(T: QMatrix | None = None, frame: SliceFrame = DEFAULT_FRAME, seed: int = 0, n: int = 6) -> list[Check]:
    """All checks; ``T`` defaults to a random planted normal matrix of size ``n``."""
    rng = as_rng(seed)
    if T is None:
        T, _ = random_normal(n, rng)
    F = ms.build_measure(T, frame)
    checks = []
    checks += quaternion_checks(rng)
    checks += qspace_checks(rng)
    checks += qoperator_checks(T, rng)
    checks += slice_checks(T, F, rng)
    checks += measure_checks(T, F, rng)
    checks += unbounded_checks(frame, rng)
    return checks


def evolution_report(T: QMatrix, frame: SliceFrame, t_grid) -> dict:
    """``exp(tT)`` by functional calculus over ``t_grid``, checked against
    ``expm`` of the complex embedding and, for anti self-adjoint ``T``, for
    unitarity."""
    F = ms.build_measure(T, frame)
    anti = "anti_self_adjoint" in classify(T, 1e-9)
    rows = []
    ok = True
    for t in t_grid:
        Ut = ms.functional_calculus(F, lambda z, t=t: np.exp(t * z))
        oracle = scipy.linalg.expm(t * complex_embed(T, frame))
        agree = float(np.linalg.norm(complex_embed(Ut, frame) - oracle) / max(1.0, np.linalg.norm(oracle)))
        unit = (Ut.adjoint() @ Ut - QMatrix.identity(T.n)).frobenius()
        row = {"t": float(t), "expm_agreement": agree, "unitarity_residual": unit}
        row_ok = agree <= 1e-9 and (unit <= 1e-9 if anti else True)
        row["passed"] = row_ok
        ok = ok and row_ok
        rows.append(row)
    return {"anti_self_adjoint": anti, "unitarity_expected": anti, "grid": rows, "passed": ok}
