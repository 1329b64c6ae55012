"""Quaternionic spectral measures of normal matrices.

The spectrum of a normal ``T`` in the closed upper half plane is finite, so
the measure is stored as points ``lambda_i`` with orthogonal projections
``P_i`` and evaluated on a region by summing the projections of the points
it contains. A spectral value ``lambda = alpha + m beta`` acts on vectors by
the left multiplication induced by the slice basis, ``L_lambda = alpha I +
beta J``; with that action

    <x|T y> = sum_i <x| L_{lambda_i} P_i y>,     T = sum_i L_{lambda_i} P_i.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
import scipy.linalg

from .errors import CommutationError
from .qoperator import DEFAULT_FRAME, QMatrix, operator_norm
from .qspace import QVector
from .quaternion import DEFAULT_TOL, Quaternion, SliceComplex, SliceFrame, qconj, qmatmul, qmul
from .slice_spectral import (
    ComplexStructure,
    EigenSystem,
    SliceBasis,
    construct_J,
    induce_complex,
    slice_basis,
    split,
)

# regions -------------------------------------------------------------------


class Region:
    """A set in the closed upper half plane, in ``(alpha, beta)`` coordinates.

    Regions compose with ``&``, ``|``, ``~`` and ``-``. Membership takes a
    :class:`SliceComplex` or a Python complex ``alpha + 1j beta``.
    """

    def contains(self, lam) -> bool:
        raise NotImplementedError

    def __contains__(self, lam) -> bool:
        return self.contains(lam)

    def __and__(self, other: "Region") -> "Region":
        return _Intersection(self, other)

    def __or__(self, other: "Region") -> "Region":
        return _Union(self, other)

    def __invert__(self) -> "Region":
        return _Complement(self)

    def __sub__(self, other: "Region") -> "Region":
        return _Intersection(self, _Complement(other))


def _as_complex(lam) -> complex:
    if isinstance(lam, SliceComplex):
        return lam.to_complex()
    return complex(lam)


class Full(Region):
    def contains(self, lam) -> bool:
        return True

    def __repr__(self):
        return "Full()"


class Empty(Region):
    def contains(self, lam) -> bool:
        return False

    def __repr__(self):
        return "Empty()"


class Points(Region):
    """Finite point set; membership within ``tol``."""

    def __init__(self, points: Sequence, tol: float = 1e-9):
        self.points = tuple(_as_complex(p) for p in points)
        self.tol = tol

    def contains(self, lam) -> bool:
        z = _as_complex(lam)
        return any(abs(z - p) <= self.tol for p in self.points)

    def __repr__(self):
        return f"Points({list(self.points)!r})"


class Rectangle(Region):
    """Closed box ``[alpha_lo, alpha_hi] x [beta_lo, beta_hi]`` with ``beta_lo >= 0``."""

    def __init__(self, alpha_lo: float, alpha_hi: float, beta_lo: float, beta_hi: float):
        if alpha_lo > alpha_hi or beta_lo > beta_hi:
            raise ValueError("rectangle bounds out of order")
        if beta_lo < 0:
            raise ValueError("rectangles live in the upper half plane (beta_lo >= 0)")
        self.bounds = (float(alpha_lo), float(alpha_hi), float(beta_lo), float(beta_hi))

    def contains(self, lam) -> bool:
        z = _as_complex(lam)
        a0, a1, b0, b1 = self.bounds
        return a0 <= z.real <= a1 and b0 <= z.imag <= b1

    def __repr__(self):
        return "Rectangle(%r, %r, %r, %r)" % self.bounds


@dataclass(frozen=True)
class _Intersection(Region):
    a: Region
    b: Region

    def contains(self, lam) -> bool:
        return self.a.contains(lam) and self.b.contains(lam)


@dataclass(frozen=True)
class _Union(Region):
    a: Region
    b: Region

    def contains(self, lam) -> bool:
        return self.a.contains(lam) or self.b.contains(lam)


@dataclass(frozen=True)
class _Complement(Region):
    a: Region

    def contains(self, lam) -> bool:
        return not self.a.contains(lam)


# the measure ---------------------------------------------------------------


@dataclass(frozen=True)
class QSpectralMeasure:
    """Point masses ``(lambda_i, P_i)`` of the spectral measure of ``T``."""

    T: QMatrix
    values: tuple
    projections: tuple
    frame: SliceFrame
    J: ComplexStructure
    basis: SliceBasis
    eigensystem: EigenSystem
    _stack: np.ndarray = field(repr=False, compare=False)

    @property
    def points(self) -> list[tuple[SliceComplex, QMatrix]]:
        return list(zip(self.values, self.projections))

    @property
    def n(self) -> int:
        return self.T.n

    def ranks(self) -> list[int]:
        return [c.multiplicity for c in self.eigensystem.clusters]

    def selector(self, region: Region) -> np.ndarray:
        return np.array([region.contains(v) for v in self.values], dtype=bool)

    def point_values(self, x: QVector, y: QVector) -> np.ndarray:
        """``(k, 4)`` array of ``F_{x,y}({lambda_i})`` for every point."""
        Py = qmatmul(self._stack, y.data[None, :, None, :])[..., 0, :]
        return np.sum(qmul(qconj(x.data)[None], Py), axis=1)

    def to_report(self) -> dict:
        out = []
        for v, P, c in zip(self.values, self.projections, self.eigensystem.clusters):
            resid = max((P @ P - P).frobenius(), (P.adjoint() - P).frobenius())
            out.append({"lambda": [v.alpha, v.beta], "rank": c.multiplicity, "projection_residual": resid})
        return {"frame": self.frame.to_dict(), "points": out}


def build_measure(
    T: QMatrix, frame: SliceFrame = DEFAULT_FRAME, tol: float = DEFAULT_TOL, seed=None
) -> QSpectralMeasure:
    """Spectral measure of a normal ``T``: ``P_i = U Sel_i U*`` over the
    eigenvector columns of cluster ``i``."""
    cs = construct_J(T, frame, tol, seed=seed)
    es = cs.eigensystem
    U = es.U.data
    projections = []
    for c in es.clusters:
        Ui = U[:, list(c.columns)]
        projections.append(QMatrix(qmatmul(Ui, qconj(np.swapaxes(Ui, 0, 1)))))
    stack = np.stack([P.data for P in projections]) if projections else np.zeros((0, T.n, T.n, 4))
    return QSpectralMeasure(
        T=T,
        values=tuple(c.value for c in es.clusters),
        projections=tuple(projections),
        frame=frame,
        J=cs,
        basis=slice_basis(cs, frame),
        eigensystem=es,
        _stack=stack,
    )


def evaluate(F: QSpectralMeasure, region: Region) -> QMatrix:
    """``F(region) = sum of P_i over lambda_i in region``."""
    sel = F.selector(region)
    if not sel.any():
        return QMatrix.zeros(F.n)
    return QMatrix(F._stack[sel].sum(axis=0))


def scalar_measure(F: QSpectralMeasure, x: QVector, y: QVector, region: Region) -> Quaternion:
    """``F_{x,y}(region) = <x|F(region) y>``."""
    vals = F.point_values(x, y)[F.selector(region)]
    return Quaternion.from_array(vals.sum(axis=0))


def complex_spectral_projection(Tplus: np.ndarray, F: QSpectralMeasure, region: Region) -> np.ndarray:
    """Spectral projection of the complex normal matrix ``Tplus`` onto its
    eigenvalues in ``region``, from its own Schur decomposition.

    Each eigenvalue is matched to the nearest point of ``F`` so that region
    boundaries are decided on the same representatives as :func:`evaluate`.
    """
    S, Z = scipy.linalg.schur(np.asarray(Tplus, dtype=complex), output="complex")
    ev = np.diag(S)
    pts = np.array([v.to_complex() for v in F.values])
    keep = F.selector(region)
    nearest = np.argmin(np.abs(ev[:, None] - pts[None, :]), axis=1)
    cols = Z[:, keep[nearest]]
    return cols @ cols.conj().T


def scalar_measure_expansion(
    F: QSpectralMeasure,
    x: QVector,
    y: QVector,
    region: Region,
    basis: SliceBasis | None = None,
) -> Quaternion:
    """``F_{x,y}`` through the complex measure ``E`` of the restriction to ``H_+``.

    With ``x = x1 + x2`` and ``y = y1 + y2`` split by ``J``::

        F_{x,y} = E_{x1,y1} - E_{x1,y2 n} n + E_{x2,y1} - E_{x2,y2 n} n

    where ``E_{a,b} = <a|E b>`` for ``b`` in ``H_+``. ``E`` is computed from
    the complex matrix of ``T`` in ``basis`` (default: the measure's own),
    and every pairing reduces to complex coordinates: for ``a`` in ``H_-``,
    ``a = a' n`` with ``a' = -a n`` in ``H_+`` and ``<a|w> = -n <a'|w>``.
    """
    basis = F.basis if basis is None else basis
    frame = basis.frame
    nq = frame.n.q
    Tplus = induce_complex(F.T, basis)
    E = complex_spectral_projection(Tplus, F, region)
    U = basis.U

    def coords(v: QVector) -> np.ndarray:
        return frame.plane_value((U.adjoint() @ v).data)

    def pair(a_coords: np.ndarray, b: QVector) -> complex:
        return complex(np.vdot(a_coords, E @ coords(b)))

    def as_q(z: complex) -> Quaternion:
        return Quaternion.from_array(frame.embed(z))

    x1, x2 = split(x, basis.J, frame.m)
    y1, y2 = split(y, basis.J, frame.m)
    y2n = y2.right_mul(nq)
    c1 = coords(x1)
    c2 = coords(x2.right_mul(-nq))
    minus_n = -nq

    e11 = as_q(pair(c1, y1))
    e12 = as_q(pair(c1, y2n))
    e21 = minus_n * as_q(pair(c2, y1))
    e22 = minus_n * as_q(pair(c2, y2n))
    return e11 - e12 * nq + e21 - e22 * nq


def _left_action_values(F: QSpectralMeasure, x: QVector, y: QVector) -> np.ndarray:
    """``<x| L_{lambda_i} P_i y>`` for every point, as a ``(k, 4)`` array."""
    a = np.array([v.alpha for v in F.values])
    b = np.array([v.beta for v in F.values])
    plain = F.point_values(x, y)
    # <x|J P y> = <J* x|P y> = -<J x|P y>
    twisted = -F.point_values(F.J.J @ x, y)
    return a[:, None] * plain + b[:, None] * twisted


def integrate_representation(F: QSpectralMeasure, x: QVector, y: QVector) -> Quaternion:
    """``sum_i lambda_i dF_{x,y}`` with ``lambda_i`` acting on the left as the
    slice-basis left multiplication ``alpha I + beta J``. Equals ``<x|T y>``."""
    return Quaternion.from_array(_left_action_values(F, x, y).sum(axis=0))


def integrate_scalar_left(F: QSpectralMeasure, x: QVector, y: QVector) -> Quaternion:
    """``sum_i lambda_i F_{x,y}({lambda_i})`` with plain quaternion products.

    Agrees with :func:`integrate_representation` whenever ``x`` lies in
    ``H_+`` (then every ``F_{x,y}`` value is paired through ``L_lambda x = x lambda``),
    but not for general ``x``.
    """
    lam = np.array([v.to_quaternion().as_array() for v in F.values]).reshape(-1, 4)
    return Quaternion.from_array(qmul(lam, F.point_values(x, y)).sum(axis=0))


def integrate_scalar_right(F: QSpectralMeasure, x: QVector, y: QVector) -> Quaternion:
    """``sum_i F_{x,y}({lambda_i}) lambda_i``; the wrong side in general."""
    lam = np.array([v.to_quaternion().as_array() for v in F.values]).reshape(-1, 4)
    return Quaternion.from_array(qmul(F.point_values(x, y), lam).sum(axis=0))


def _weighted_sum(F: QSpectralMeasure, weights: Sequence[complex]) -> QMatrix:
    n = F.n
    J = F.J.J.data
    acc = np.zeros((n, n, 4))
    for w, P in zip(weights, F._stack):
        acc += w.real * P + w.imag * qmatmul(J, P)
    return QMatrix(acc)


def reconstruct_operator(F: QSpectralMeasure) -> QMatrix:
    """``sum_i (alpha_i I + beta_i J) P_i``."""
    return _weighted_sum(F, [v.to_complex() for v in F.values])


def functional_calculus(F: QSpectralMeasure, f: Callable[[complex], complex]) -> QMatrix:
    """``f(T) = sum_i (Re f(lambda_i) I + Im f(lambda_i) J) P_i``.

    ``f`` receives and returns slice-plane values as Python complex numbers.
    """
    weights = []
    for v in F.values:
        try:
            w = complex(f(v.to_complex()))
        except (ArithmeticError, ValueError) as exc:
            raise ValueError(f"f is undefined at spectral point {v.to_complex()}") from exc
        if not np.isfinite(w.real) or not np.isfinite(w.imag):
            raise ValueError(f"f is undefined at spectral point {v.to_complex()}")
        weights.append(w)
    return _weighted_sum(F, weights)


def random_rectangle(F: QSpectralMeasure, rng) -> Rectangle:
    """Random box over (a margin around) the bounding box of the spectrum."""
    pts = np.array([v.to_complex() for v in F.values])
    lo_a, hi_a = pts.real.min() - 0.5, pts.real.max() + 0.5
    hi_b = pts.imag.max() + 0.5
    a = np.sort(rng.uniform(lo_a, hi_a, size=2))
    b = np.sort(rng.uniform(0.0, hi_b, size=2))
    if rng.random() < 0.25:
        b[0] = 0.0
    return Rectangle(a[0], a[1], b[0], b[1])


@dataclass(frozen=True)
class CommutantReport:
    hypothesis: dict
    max_residual: float
    regions_checked: int
    tol: float

    @property
    def passed(self) -> bool:
        return self.max_residual <= self.tol

    def to_dict(self) -> dict:
        return {
            "hypothesis": dict(self.hypothesis),
            "max_residual": self.max_residual,
            "regions_checked": self.regions_checked,
            "tol": self.tol,
            "passed": self.passed,
        }


def commutant_check(
    F: QSpectralMeasure,
    S: QMatrix,
    T: QMatrix | None = None,
    rng=None,
    rectangles: int = 20,
    tol: float = 1e-9,
) -> CommutantReport:
    """Check ``S F(region) = F(region) S`` for an ``S`` commuting with ``T`` and ``T*``.

    The hypothesis is verified first (relative to ``|S| |T|``); if it fails a
    :class:`CommutationError` carries the two residuals. ``max_residual`` is
    relative to ``max(1, |S|)``.
    """
    from .sampling import as_rng

    T = F.T if T is None else T
    rng = as_rng(rng)
    Th = T.adjoint()
    normS = operator_norm(S)
    scale = max(1.0, normS) * max(1.0, operator_norm(T))
    hyp = {
        "ST-TS": (S @ T - T @ S).frobenius() / scale,
        "ST*-T*S": (S @ Th - Th @ S).frobenius() / scale,
    }
    if max(hyp.values()) > tol:
        raise CommutationError(f"S does not commute with T and T*: {hyp}", hyp)
    regions: list[Region] = [Points([v]) for v in F.values]
    regions += [random_rectangle(F, rng) for _ in range(rectangles)]
    worst = 0.0
    for region in regions:
        P = evaluate(F, region)
        worst = max(worst, (S @ P - P @ S).frobenius() / max(1.0, normS))
    return CommutantReport(hyp, worst, len(regions), tol)


def axiom_residuals(F: QSpectralMeasure, rng=None, pairs: int = 20) -> dict:
    """Largest residual of each measure axiom.

    ``projection``: ``|P^2 - P|`` and ``|P* - P|`` over points and random
    rectangles; ``normalization``: ``|F(full) - I|`` and ``|F(empty)|``;
    ``multiplicativity``: ``|F(A & B) - F(A) F(B)|`` over random rectangle
    pairs (with disjoint points included); ``scalar_measure``: finite
    additivity of ``F_{x,y}`` on a split rectangle and the defect of
    ``F_{x,x} >= 0`` (imaginary part or negative real part).
    """
    from .sampling import as_rng, random_qvector

    rng = as_rng(rng)
    n = F.n
    eye = QMatrix.identity(n)
    proj = 0.0
    regions = [Points([v]) for v in F.values] + [random_rectangle(F, rng) for _ in range(pairs)]
    for r in regions:
        P = evaluate(F, r)
        proj = max(proj, (P @ P - P).frobenius(), (P.adjoint() - P).frobenius())
    norm_res = max((evaluate(F, Full()) - eye).frobenius(), evaluate(F, Empty()).frobenius())

    mult = 0.0
    pts = [Points([v]) for v in F.values]
    for a in range(len(pts)):
        for b in range(len(pts)):
            if a != b:
                mult = max(mult, (F.projections[a] @ F.projections[b]).frobenius())
    for _ in range(pairs):
        A, B = random_rectangle(F, rng), random_rectangle(F, rng)
        mult = max(mult, (evaluate(F, A & B) - evaluate(F, A) @ evaluate(F, B)).frobenius())

    x, y = random_qvector(n, rng), random_qvector(n, rng)
    R = random_rectangle(F, rng)
    cut = rng.uniform(*R.bounds[:2])
    left = R & Rectangle(-np.inf, cut, 0.0, np.inf)
    right = R - left
    add = abs(scalar_measure(F, x, y, R) - scalar_measure(F, x, y, left) - scalar_measure(F, x, y, right))
    fxx = scalar_measure(F, x, x, R)
    pos = max(fxx.imag_norm, max(0.0, -fxx.real))
    scalar = max(add, pos) / max(1.0, x.norm() * y.norm())

    jcomm = max(((F.J.J @ P) - (P @ F.J.J)).frobenius() for P in F.projections)
    return {
        "projection": proj,
        "normalization": norm_res,
        "multiplicativity": mult,
        "scalar_measure": scalar,
        "J_commutation": jcomm,
    }
