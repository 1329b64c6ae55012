"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v``. The shared corpus is 200
planted normal matrices ``U diag(lambda) U*`` with sizes 1..16, cycling
through generic, repeated, real, purely imaginary and mixed spectra, each in
a random slice frame.
"""
import math
import time

import numpy as np
import pytest

from qspectral import measure as ms
from qspectral.measure import Points
from qspectral.qoperator import QMatrix, inverse_z_transform, operator_norm, z_transform
from qspectral.qspace import HilbertBasis, gram_schmidt, inner, inner_via_polarization, left_multiply
from qspectral.sampling import (
    random_frame,
    random_polynomial,
    random_qvector,
    random_slice_complex,
    random_structured_normal,
)
from qspectral.slice_spectral import (
    check_spherical_spectrum,
    construct_J_via_z_transform,
    extend_operator,
    split,
)
from qspectral.unbounded import DiagonalSymbol, build_tower, measure_consistency, unboundedness_signature

CORPUS_SIZE = 200
KINDS = ("generic", "repeated", "real", "anti", "mixed")
SEED = 1729


def emit(capsys, number, title, passed, detail):
    with capsys.disabled():
        print(f"\nCRITERION {number:>2} {'PASS' if passed else 'FAIL'}: {title} | {detail}")


@pytest.fixture(scope="module")
def corpus():
    rng = np.random.default_rng(SEED)
    start = time.perf_counter()
    items = []
    for k in range(CORPUS_SIZE):
        n = 1 + k % 16
        T, _ = random_structured_normal(n, rng, KINDS[k % len(KINDS)])
        frame = random_frame(rng)
        items.append((T, ms.build_measure(T, frame)))
    return items, time.perf_counter() - start


def test_criterion_01_reconstruction(corpus, capsys):
    items, build_time = corpus
    rng = np.random.default_rng(SEED + 1)
    start = time.perf_counter()
    worst_rec = worst_pair = 0.0
    literal_slice = literal_generic = 0.0
    for T, F in items:
        worst_rec = max(worst_rec, (ms.reconstruct_operator(F) - T).frobenius() / T.frobenius())
        normT = operator_norm(T)
        for _ in range(100):
            x, y = random_qvector(T.n, rng), random_qvector(T.n, rng)
            gap = abs(ms.integrate_representation(F, x, y) - inner(x, T @ y))
            worst_pair = max(worst_pair, gap / (normT * x.norm() * y.norm()))
        # informational: the plain quaternion product lambda * F_{x,y} is exact on H_+ only
        x, y = random_qvector(T.n, rng), random_qvector(T.n, rng)
        xp, _ = split(x, F.J.J, F.frame.m)
        scale = normT * x.norm() * y.norm()
        literal_slice = max(literal_slice, abs(ms.integrate_scalar_left(F, xp, y) - inner(xp, T @ y)) / scale)
        literal_generic = max(literal_generic, abs(ms.integrate_scalar_left(F, x, y) - inner(x, T @ y)) / scale)
    elapsed = time.perf_counter() - start + build_time
    passed = worst_rec <= 1e-9 and worst_pair <= 1e-10 and elapsed <= 60
    emit(
        capsys, 1, "operator reconstruction and integral representation", passed,
        f"max |T - sum (a+bJ)P|/|T| = {worst_rec:.2e}, max pair gap = {worst_pair:.2e}, {elapsed:.1f} s; "
        f"plain left product: {literal_slice:.1e} on H+, {literal_generic:.1e} on generic x",
    )
    assert worst_rec <= 1e-9
    assert worst_pair <= 1e-10
    assert elapsed <= 60


def test_criterion_02_measure_axioms(corpus, capsys):
    items, _ = corpus
    rng = np.random.default_rng(SEED + 2)
    worst = {}
    for _, F in items:
        for key, val in ms.axiom_residuals(F, rng, pairs=20).items():
            worst[key] = max(worst.get(key, 0.0), val)
    passed = max(worst.values()) <= 1e-10
    emit(capsys, 2, "measure axioms", passed, ", ".join(f"{k} {v:.1e}" for k, v in worst.items()))
    assert passed


def test_criterion_03_spherical_spectrum(corpus, capsys):
    items, _ = corpus
    rng = np.random.default_rng(SEED + 3)
    worst_on = 0.0
    worst_ratio = np.inf
    for T, F in items:
        chk = check_spherical_spectrum(T, F.values, rng, probes=20, min_distance=0.1, on_rtol=1e-8)
        worst_on = max(worst_on, chk.on_spectrum / max(1.0, operator_norm(T) ** 2))
        worst_ratio = min(worst_ratio, chk.off_ratio)
    passed = worst_on <= 1e-8 and worst_ratio >= 1 - 1e-8
    emit(
        capsys, 3, "restriction spectrum equals spherical spectrum", passed,
        f"max s_min(delta_lambda)/|T|^2 = {worst_on:.2e}, min s_min(delta_q)/dist^2 off spectrum = {worst_ratio:.4f}",
    )
    assert passed


def test_criterion_04_four_term_expansion(corpus, capsys):
    items, _ = corpus
    rng = np.random.default_rng(SEED + 4)
    worst = 0.0
    for T, F in items:
        regions = [Points([v]) for v in F.values] + [ms.random_rectangle(F, rng) for _ in range(5)]
        for region in regions:
            x, y = random_qvector(T.n, rng), random_qvector(T.n, rng)
            gap = abs(ms.scalar_measure(F, x, y, region) - ms.scalar_measure_expansion(F, x, y, region))
            worst = max(worst, gap / (x.norm() * y.norm()))
    passed = worst <= 1e-11
    emit(capsys, 4, "four-term expansion", passed, f"max route gap / |x||y| = {worst:.2e}")
    assert passed


def test_criterion_05_extension_algebra(corpus, capsys):
    items, _ = corpus
    rng = np.random.default_rng(SEED + 5)
    worst = dict.fromkeys(("product", "adjoint", "inverse", "norm", "J_commutation"), 0.0)
    for T, F in items[:100]:
        basis, n = F.basis, T.n
        A, B = random_slice_complex(n, rng), random_slice_complex(n, rng)
        At, Bt = extend_operator(A, basis), extend_operator(B, basis)
        nA, nB = np.linalg.norm(A, 2), np.linalg.norm(B, 2)
        Ai = extend_operator(np.linalg.inv(A), basis)
        res = {
            "product": operator_norm(extend_operator(A @ B, basis) - At @ Bt) / (nA * nB),
            "adjoint": operator_norm(extend_operator(A.conj().T, basis) - At.adjoint()) / nA,
            "inverse": operator_norm(At @ Ai - QMatrix.identity(n)) / np.linalg.cond(A),
            "norm": abs(operator_norm(At) - nA) / nA,
            "J_commutation": operator_norm(basis.J @ At - At @ basis.J) / nA,
        }
        for k, v in res.items():
            worst[k] = max(worst[k], v)
    passed = max(worst.values()) <= 1e-11
    emit(capsys, 5, "extension algebra (relative residuals)", passed, ", ".join(f"{k} {v:.1e}" for k, v in worst.items()))
    assert passed


def test_criterion_06_z_transform(corpus, capsys):
    items, _ = corpus
    worst_norm = worst_round = worst_j = worst_jz = 0.0
    for T, F in items:
        normT = operator_norm(T)
        Z = z_transform(T)
        worst_norm = max(worst_norm, operator_norm(Z))
        worst_round = max(worst_round, operator_norm(inverse_z_transform(Z) - T) / normT)
        Jz = construct_J_via_z_transform(T, F.frame).J
        worst_j = max(worst_j, operator_norm(F.J.J @ T - T @ F.J.J) / normT)
        worst_jz = max(worst_jz, operator_norm(Jz @ T - T @ Jz) / normT)
    passed = worst_norm < 1 and worst_round <= 1e-8 and max(worst_j, worst_jz) <= 1e-9
    emit(
        capsys, 6, "Z-transform", passed,
        f"max |Z| = {worst_norm:.6f}, roundtrip {worst_round:.1e}, [J,T] {worst_j:.1e}, [J_Z,T] {worst_jz:.1e}",
    )
    assert passed


def test_criterion_07_commutant(corpus, capsys):
    items, _ = corpus
    rng = np.random.default_rng(SEED + 7)
    worst = 0.0
    for T, F in items:
        S = random_polynomial(T, rng, F.J.J)
        normS = operator_norm(S)
        regions = [Points([v]) for v in F.values] + [ms.random_rectangle(F, rng) for _ in range(20)]
        for region in regions:
            P = ms.evaluate(F, region)
            worst = max(worst, operator_norm(S @ P - P @ S) / normS)
    passed = worst <= 1e-9
    emit(capsys, 7, "commutant", passed, f"max |SF - FS| / |S| = {worst:.2e}")
    assert passed


def test_criterion_08_polarization_parseval(capsys):
    rng = np.random.default_rng(SEED + 8)
    bases = {n: gram_schmidt([random_qvector(n, rng) for _ in range(n)]) for n in range(1, 33)}
    worst_pol = worst_par = 0.0
    for _ in range(1000):
        n = int(rng.integers(1, 33))
        u, v = random_qvector(n, rng), random_qvector(n, rng)
        worst_pol = max(worst_pol, abs(inner_via_polarization(u, v) - inner(u, v)) / (u.norm() * v.norm()))
        worst_par = max(worst_par, bases[n].parseval_defect(u) / u.norm() ** 2)
    passed = worst_pol <= 1e-11 and worst_par <= 1e-11
    emit(capsys, 8, "polarization and Parseval", passed, f"polarization {worst_pol:.1e}, Parseval {worst_par:.1e}")
    assert passed


def test_criterion_09_slice_decomposition(corpus, capsys):
    items, _ = corpus
    rng = np.random.default_rng(SEED + 9)
    worst = dict.fromkeys(("reassembly", "orthogonality", "plane_valued", "J_is_left_m"), 0.0)
    for T, F in items:
        frame, Jm, n = F.frame, F.J.J, T.n
        x = random_qvector(n, rng)
        xp, xm = split(x, Jm, frame.m)
        worst["reassembly"] = max(worst["reassembly"], (xp + xm - x).norm() / x.norm())
        worst["orthogonality"] = max(
            worst["orthogonality"], abs(frame.plane_value(inner(xp, xm).as_array())) / x.norm() ** 2
        )
        u, _ = split(random_qvector(n, rng), Jm, frame.m)
        v, _ = split(random_qvector(n, rng), Jm, frame.m)
        off = float(frame.off_plane(inner(u, v).as_array()))
        worst["plane_valued"] = max(worst["plane_valued"], off / max(1e-300, u.norm() * v.norm()))
        for e in HilbertBasis.canonical(n).vectors:
            worst["J_is_left_m"] = max(
                worst["J_is_left_m"], (left_multiply(frame.m.q, e, F.basis.basis) - Jm @ e).norm()
            )
    passed = max(worst.values()) <= 1e-10
    emit(capsys, 9, "slice decomposition", passed, ", ".join(f"{k} {v:.1e}" for k, v in worst.items()))
    assert passed


def test_criterion_10_unbounded_harness(capsys):
    rng = np.random.default_rng(SEED + 10)
    symbol = DiagonalSymbol.k_times_m()
    sig = unboundedness_signature(build_tower(symbol))
    formula = max(abs(z - n / math.sqrt(1 + n * n)) for n, z in zip(sig["sizes"], sig["z_norms"]))
    cons = measure_consistency(build_tower(symbol, (8, 16, 32)), rng=rng)
    passed = formula <= 1e-10 and cons["passed"]
    emit(
        capsys, 10, "unbounded harness", passed,
        f"sizes {sig['sizes']}, max |Z| formula gap {formula:.1e}, consistency across (8,16,32): "
        f"inner {cons['inner_residual']:.1e}, measure {cons['measure_residual']:.1e}, exclusion {cons['exclusion_residual']:.1e}",
    )
    assert passed
