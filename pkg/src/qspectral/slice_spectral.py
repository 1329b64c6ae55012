"""Complex structures, slice decompositions and the right eigenproblem.

For a normal ``T`` and a frame ``(m, n)`` this module produces

* an orthonormal eigenbasis ``U`` with ``T u_k = u_k lambda_k`` and every
  ``lambda_k`` in the closed upper half of the slice plane of ``m``;
* the anti self-adjoint unitary ``J = U diag(m) U*`` commuting with ``T``;
* the slice spaces ``H_+- = {x : J x = +-x m}`` and the correspondence
  between slice-plane-linear operators on ``H_+`` and right-linear operators
  on ``H^n`` commuting with ``J``.

Eigenvectors come from a complex Schur decomposition of ``chi(T)``: for a
normal matrix the Schur factor is diagonal, so its Schur vectors are
orthonormal eigenvectors even when eigenvalues repeat. Each upper-half
eigenvector of ``chi(T)`` maps back to a quaternionic right eigenvector.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.linalg

from .errors import CommutationError, ComplexStructureError, NotNormalError
from .qoperator import (
    DEFAULT_FRAME,
    QMatrix,
    classify,
    complex_embed,
    delta,
    operator_norm,
    smallest_singular_value,
    unembed_columns,
)
from .qspace import HilbertBasis, QVector, inner
from .quaternion import (
    DEFAULT_TOL,
    Quaternion,
    SliceComplex,
    SliceFrame,
    UnitImaginary,
    class_distance,
    qconj,
    qmatmul,
    qmul,
)

__all__ = [
    "SliceFrame",
    "ComplexStructure",
    "SliceBasis",
    "Cluster",
    "EigenSystem",
    "spectral_decompose",
    "construct_J",
    "construct_J_via_z_transform",
    "split",
    "phi",
    "slice_basis",
    "induce_complex",
    "extend_operator",
    "spherical_spectrum",
    "check_spherical_spectrum",
    "cluster_tolerance",
    "commutes_with",
    "slice_inner_off_plane",
    "SpectrumCheck",
]


def cluster_tolerance(norm_T: float) -> float:
    return max(1e-8, 1e-12 * norm_T)


@dataclass(frozen=True)
class Cluster:
    """One point of the spectrum in the upper half plane and the columns of
    ``U`` spanning its eigenspace."""

    value: SliceComplex
    columns: tuple

    @property
    def multiplicity(self) -> int:
        return len(self.columns)


@dataclass(frozen=True)
class EigenSystem:
    """``T U = U diag(D)`` with ``U`` unitary and ``D`` in the upper half plane.

    ``diag(D)`` acts by right multiplication of column ``k`` by ``D[k]``.
    """

    U: QMatrix
    D: tuple
    clusters: tuple
    frame: SliceFrame
    residual: float
    unitarity_defect: float

    @property
    def eigenvalues(self) -> list[SliceComplex]:
        return list(self.D)


def _union_clusters(values: np.ndarray, tol: float) -> list[list[int]]:
    n = len(values)
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for a in range(n):
        close = np.nonzero(np.abs(values[a + 1 :] - values[a]) <= tol)[0]
        for off in close:
            ra, rb = find(a), find(a + 1 + int(off))
            if ra != rb:
                parent[rb] = ra
    groups: dict[int, list[int]] = {}
    for a in range(n):
        groups.setdefault(find(a), []).append(a)
    return list(groups.values())


def _pivoted_orthonormalize(candidates: np.ndarray, chosen: np.ndarray, count: int) -> np.ndarray:
    """Pick ``count`` orthonormal vectors from the right span of ``candidates``
    that are orthogonal to ``chosen``; columns with the largest residual go first."""
    C = np.array(candidates, dtype=float)
    picked = []
    Q = chosen
    for _ in range(count):
        for _ in range(2):
            if Q.shape[1]:
                coeff = qmatmul(qconj(np.swapaxes(Q, 0, 1)), C)
                C = C - qmatmul(Q, coeff)
        norms = np.linalg.norm(C, axis=(0, 2))
        best = int(np.argmax(norms))
        if norms[best] <= 1e-6:
            raise np.linalg.LinAlgError("eigenspace collapsed while orthonormalizing")
        z = C[:, best] / norms[best]
        picked.append(z)
        Q = np.concatenate([Q, z[:, None, :]], axis=1)
        C = np.delete(C, best, axis=1)
    return np.stack(picked, axis=1) if picked else np.zeros((chosen.shape[0], 0, 4))


def _column_right_mul(U: np.ndarray, D: Sequence[SliceComplex]) -> np.ndarray:
    lam = np.array([d.to_quaternion().as_array() for d in D]).reshape(-1, 4)
    return qmul(U, lam[None, :, :])


def _require_normal(T: QMatrix, tol: float):
    cls = classify(T, tol)
    if "normal" not in cls:
        raise NotNormalError(cls.residuals["normal"], tol)


def spectral_decompose(
    T: QMatrix,
    frame: SliceFrame = DEFAULT_FRAME,
    tol: float = DEFAULT_TOL,
    seed=None,
) -> EigenSystem:
    """Orthonormal right eigenbasis of a normal quaternion matrix.

    Parameters
    ----------
    T : QMatrix
        Normal matrix; anything else raises :class:`NotNormalError`.
    frame : SliceFrame
        Fixes the slice plane in which eigenvalues are reported.
    tol : float
        Normality tolerance passed to :func:`classify`.
    seed : int or Generator, optional
        When given, ``T`` is first conjugated by a random unitary ``V`` and
        the eigenvectors are mapped back, which exercises a different but
        equivalent eigensolver path.

    Returns
    -------
    EigenSystem
        Eigenvalues snapped into the closed upper half plane, clustered
        (greedy union within :func:`cluster_tolerance`, mean representative)
        and sorted by ``(alpha, beta)``.
    """
    _require_normal(T, tol)
    n = T.n
    V = None
    work = T
    if seed is not None:
        from .sampling import random_unitary

        V = random_unitary(n, seed)
        work = V.adjoint() @ T @ V

    norm_T = operator_norm(T, frame)
    ctol = cluster_tolerance(norm_T)
    X = complex_embed(work, frame)
    S, Z = scipy.linalg.schur(X, output="complex")
    ev = np.diag(S)

    found = []
    for members in _union_clusters(ev, ctol):
        mean = complex(np.mean(ev[members]))
        if mean.imag < -ctol:
            continue
        if abs(mean.imag) <= ctol:
            if len(members) % 2:
                raise np.linalg.LinAlgError(
                    f"real eigenvalue {mean.real:.6g} has odd multiplicity {len(members)} in the embedding"
                )
            value, count = complex(mean.real, 0.0), len(members) // 2
        else:
            value, count = mean, len(members)
        found.append((value, count, members))
    found.sort(key=lambda t: (t[0].real, t[0].imag))

    cols = np.zeros((n, 0, 4))
    D: list[SliceComplex] = []
    clusters = []
    for value, count, members in found:
        cand = unembed_columns(Z[:, members], frame)
        new = _pivoted_orthonormalize(cand, cols, count)
        start = cols.shape[1]
        cols = np.concatenate([cols, new], axis=1)
        lam = SliceComplex(value.real, value.imag, frame.m)
        D.extend([lam] * count)
        clusters.append(Cluster(lam, tuple(range(start, start + count))))
    if cols.shape[1] != n:
        raise np.linalg.LinAlgError(f"recovered {cols.shape[1]} eigenvectors for dimension {n}")

    U = QMatrix(cols)
    if V is not None:
        U = V @ U
    resid = (T @ U).data - _column_right_mul(U.data, D)
    residual = float(np.linalg.norm(resid)) / max(1.0, norm_T)
    unit_defect = (U.adjoint() @ U - QMatrix.identity(n)).frobenius()
    return EigenSystem(U, tuple(D), tuple(clusters), frame, residual, unit_defect)


@dataclass(frozen=True)
class ComplexStructure:
    """An anti self-adjoint unitary ``J`` (so ``J^2 = -I``).

    ``eigensystem`` is kept when ``J`` was built from a diagonalization; its
    ``U`` then provides the slice basis directly.
    """

    J: QMatrix
    eigensystem: EigenSystem | None = None

    def defects(self) -> dict:
        J = self.J
        eye = QMatrix.identity(J.n)
        return {
            "anti_self_adjoint": (J.adjoint() + J).frobenius(),
            "unitary": (J.adjoint() @ J - eye).frobenius(),
            "square": (J @ J + eye).frobenius(),
        }

    def validate(self, tol: float = 1e-9) -> "ComplexStructure":
        d = self.defects()
        scale = max(1.0, np.sqrt(self.J.n))
        bad = {k: v for k, v in d.items() if v > tol * scale}
        if bad:
            raise ComplexStructureError(f"J is not an anti self-adjoint unitary: {bad}")
        return self


def construct_J(
    T: QMatrix, frame: SliceFrame = DEFAULT_FRAME, tol: float = DEFAULT_TOL, seed=None
) -> ComplexStructure:
    """``J = U diag(m, ..., m) U*`` from the eigenbasis of ``T``; commutes with
    ``T`` and ``T*``."""
    es = spectral_decompose(T, frame, tol, seed=seed)
    U = es.U
    J = U @ QMatrix.diag([frame.m.q] * T.n) @ U.adjoint()
    return ComplexStructure(J, es)


def construct_J_via_z_transform(
    T: QMatrix, frame: SliceFrame = DEFAULT_FRAME, tol: float = DEFAULT_TOL
) -> ComplexStructure:
    """Cross-check route: build ``J`` from the bounded normal contraction
    ``Z_T = T (I + T*T)^{-1/2}`` instead of from ``T``."""
    from .qoperator import z_transform

    return construct_J(z_transform(T), frame, tol)


def split(x: QVector, J: ComplexStructure | QMatrix, m: UnitImaginary) -> tuple[QVector, QVector]:
    """``x = x_+ + x_-`` with ``J x_+ = x_+ m`` and ``J x_- = -x_- m``."""
    Jm = J.J if isinstance(J, ComplexStructure) else J
    m = UnitImaginary(m)
    Jxm = (Jm @ x).right_mul(m.q)
    return (x - Jxm) * 0.5, (x + Jxm) * 0.5


def phi(x: QVector, frame: SliceFrame) -> QVector:
    """``x -> x n``; exchanges ``H_+`` and ``H_-`` and squares to ``-1``."""
    return x.right_mul(frame.n.q)


@dataclass(frozen=True)
class SliceBasis:
    """Orthonormal basis of ``H_+`` (which is then also a basis of ``H^n``)."""

    basis: HilbertBasis
    frame: SliceFrame
    J: QMatrix

    @property
    def U(self) -> QMatrix:
        return QMatrix(self.basis.columns)

    def defects(self) -> dict:
        U = self.U
        n = U.n
        JU = (self.J @ U).data
        Um = qmul(U.data, self.frame.m.as_array())
        gram = (U.adjoint() @ U).data
        off = self.frame.off_plane(gram)
        eye = np.zeros_like(gram)
        eye[np.arange(n), np.arange(n), 0] = 1.0
        return {
            "membership": float(np.linalg.norm(JU - Um)),
            "gram_off_plane": float(np.max(off)) if n else 0.0,
            "orthonormality": float(np.linalg.norm(gram - eye)),
        }

    def rotated(self, W: np.ndarray) -> "SliceBasis":
        """Basis ``z'_b = sum_a z_a W_ab`` for a complex unitary ``W``; still in ``H_+``."""
        Wq = self.frame.embed(np.asarray(W, dtype=complex))
        return SliceBasis(HilbertBasis(qmatmul(self.basis.columns, Wq)), self.frame, self.J)


def slice_basis(J: ComplexStructure | QMatrix, frame: SliceFrame = DEFAULT_FRAME) -> SliceBasis:
    """An orthonormal basis ``N`` of ``H_+`` for ``J``; left multiplication by
    ``m`` induced by ``N`` reproduces ``J``.

    When ``J`` came from :func:`construct_J` the generating eigenbasis is
    reused. Otherwise ``N`` spans the ``+1`` eigenspace of the complex-linear
    map ``-1j chi(J)``, the embedded form of ``x -> (J x)(-m)``.
    """
    cs = J if isinstance(J, ComplexStructure) else ComplexStructure(QMatrix(J))
    cs.validate()
    if cs.eigensystem is not None and cs.eigensystem.frame == frame:
        cols = cs.eigensystem.U.data
    else:
        X = complex_embed(cs.J, frame)
        Hm = -1j * X
        w, V = np.linalg.eigh(0.5 * (Hm + Hm.conj().T))
        n = cs.J.n
        cols = unembed_columns(V[:, n:], frame)
        if w.size and np.min(w[n:]) < 0.5:
            raise ComplexStructureError("J has no clean +m eigenspace in this frame")
    return SliceBasis(HilbertBasis(cols), frame, cs.J)


def induce_complex(T: QMatrix, basis: SliceBasis, tol: float = 1e-11) -> np.ndarray:
    """Matrix ``<z_a|T z_b>`` of the slice-plane-linear restriction of ``T`` to ``H_+``.

    Raises :class:`CommutationError` if an entry leaves the slice plane by
    more than ``tol * max(1, |T|_F)``, i.e. when ``T`` does not commute with
    the ``J`` that produced ``basis``.
    """
    U = basis.U
    G = (U.adjoint() @ T @ U).data
    off = float(np.max(basis.frame.off_plane(G))) if T.n else 0.0
    if off > tol * max(1.0, T.frobenius()):
        raise CommutationError(
            f"restriction leaves the slice plane by {off:.3g}; T does not commute with J",
            {"off_plane": off},
        )
    return basis.frame.plane_value(G)


def extend_operator(A: np.ndarray, basis: SliceBasis) -> QMatrix:
    """The unique right-linear ``Ã`` with ``Ã z_b = sum_a z_a A_ab``."""
    A = np.asarray(A, dtype=complex)
    n = len(basis.basis)
    if A.shape != (n, n):
        raise ValueError(f"expected a {n}x{n} matrix, got {A.shape}")
    U = basis.U
    return U @ QMatrix.from_slice_complex(A, basis.frame) @ U.adjoint()


def spherical_spectrum(
    T: QMatrix, frame: SliceFrame = DEFAULT_FRAME, tol: float = DEFAULT_TOL
) -> list[SliceComplex]:
    """Spectrum points of ``T`` in the closed upper half plane, one per similarity sphere."""
    return [c.value for c in spectral_decompose(T, frame, tol).clusters]


@dataclass(frozen=True)
class SpectrumCheck:
    on_spectrum: float
    on_threshold: float
    off_ratio: float
    probes: int

    @property
    def passed(self) -> bool:
        return self.on_spectrum <= self.on_threshold and self.off_ratio >= 1.0 - 1e-8


def check_spherical_spectrum(
    T: QMatrix,
    spectrum: Sequence[SliceComplex],
    rng=None,
    probes: int = 20,
    min_distance: float = 0.1,
    on_rtol: float = 1e-8,
) -> SpectrumCheck:
    """Certify a reported spectrum through ``delta``.

    Every reported point must make ``delta(T, lambda)`` singular (smallest
    singular value ``<= on_rtol * max(1, |T|^2)``). Random probes ``q`` at
    class distance ``d >= min_distance`` from every point must satisfy
    ``s_min(delta(T, q)) >= d^2``, the exact lower bound for normal ``T``;
    ``off_ratio`` is the worst ``s_min / d^2`` seen.
    """
    from .sampling import as_rng

    rng = as_rng(rng)
    normT = operator_norm(T)
    on = max((smallest_singular_value(delta(T, lam.to_quaternion())) for lam in spectrum), default=0.0)
    pts = [lam.to_quaternion() for lam in spectrum]
    radius = 2.0 * normT + 1.0
    ratio = np.inf
    done = 0
    while done < probes:
        q = Quaternion.from_array(rng.uniform(-radius, radius, size=4))
        d = min(class_distance(q, p) for p in pts) if pts else np.inf
        if d < min_distance:
            continue
        s = smallest_singular_value(delta(T, q))
        ratio = min(ratio, s / d**2)
        done += 1
    return SpectrumCheck(on, on_rtol * max(1.0, normT**2), float(ratio), probes)


def commutes_with(J: QMatrix, T: QMatrix) -> float:
    return (J @ T - T @ J).frobenius()


def slice_inner_off_plane(u: QVector, v: QVector, frame: SliceFrame) -> float:
    return float(frame.off_plane(inner(u, v).as_array()))
