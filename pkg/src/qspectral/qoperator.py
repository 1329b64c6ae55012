"""Right-linear operators on H^n as quaternion matrices.

A :class:`QMatrix` acts on column vectors from the left with the vector
entries on the right of each product, ``(A x)_r = sum_s A_rs x_s``, which
makes it right-H-linear. Spectral work goes through the complex adjoint
representation

    chi(A) = [[A1, A2], [-conj(A2), conj(A1)]],   A = A1 + A2 n,

taken in a :class:`~qspectral.quaternion.SliceFrame` ``(m, n)``. ``chi`` is an
injective unital *-homomorphism, so norms, eigenvalues and matrix functions
of ``A`` can be read off ``chi(A)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NotPositiveError
from .qspace import QVector
from .quaternion import DEFAULT_TOL, Quaternion, SliceFrame, qabs, qconj, qmatmul, qmul

DEFAULT_FRAME = SliceFrame()


class QMatrix:
    """Square quaternion matrix, stored as an ``(n, n, 4)`` real array."""

    __slots__ = ("data",)

    def __init__(self, data):
        if isinstance(data, QMatrix):
            data = data.data
        arr = np.array(data, dtype=float)
        if arr.ndim != 3 or arr.shape[2] != 4 or arr.shape[0] != arr.shape[1]:
            raise ValueError(f"QMatrix data must have shape (n, n, 4), got {arr.shape}")
        arr.setflags(write=False)
        self.data = arr

    # constructors ---------------------------------------------------------

    @classmethod
    def identity(cls, n: int) -> "QMatrix":
        a = np.zeros((n, n, 4))
        a[np.arange(n), np.arange(n), 0] = 1.0
        return cls(a)

    @classmethod
    def zeros(cls, n: int) -> "QMatrix":
        return cls(np.zeros((n, n, 4)))

    @classmethod
    def diag(cls, entries) -> "QMatrix":
        entries = [e.as_array() if isinstance(e, Quaternion) else np.asarray(e, float) for e in entries]
        n = len(entries)
        a = np.zeros((n, n, 4))
        for k, e in enumerate(entries):
            a[k, k] = e
        return cls(a)

    @classmethod
    def from_columns(cls, columns: np.ndarray) -> "QMatrix":
        return cls(columns)

    @classmethod
    def from_slice_complex(cls, z: np.ndarray, frame: SliceFrame = DEFAULT_FRAME) -> "QMatrix":
        """Matrix whose entries are the complex array ``z`` placed in the slice plane."""
        return cls(frame.embed(np.asarray(z, dtype=complex)))

    # basic algebra --------------------------------------------------------

    @property
    def n(self) -> int:
        return self.data.shape[0]

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape[:2]

    def __getitem__(self, idx) -> Quaternion:
        r, c = idx
        return Quaternion.from_array(self.data[r, c])

    def adjoint(self) -> "QMatrix":
        return QMatrix(qconj(np.swapaxes(self.data, 0, 1)))

    @property
    def H(self) -> "QMatrix":
        return self.adjoint()

    def column(self, k: int) -> QVector:
        return QVector(self.data[:, k])

    def __matmul__(self, other):
        if isinstance(other, QMatrix):
            _check_square(self, other)
            return QMatrix(qmatmul(self.data, other.data))
        if isinstance(other, QVector):
            if other.dim != self.n:
                raise ValueError(f"dimension mismatch: {self.n} vs {other.dim}")
            return QVector(qmatmul(self.data, other.data[:, None, :])[:, 0, :])
        return NotImplemented

    def __add__(self, other: "QMatrix") -> "QMatrix":
        _check_square(self, other)
        return QMatrix(self.data + other.data)

    def __sub__(self, other: "QMatrix") -> "QMatrix":
        _check_square(self, other)
        return QMatrix(self.data - other.data)

    def __neg__(self) -> "QMatrix":
        return QMatrix(-self.data)

    def __mul__(self, r):
        # real scalars only; quaternion scalars do not commute with the action
        if isinstance(r, (int, float, np.floating)):
            return QMatrix(self.data * float(r))
        return NotImplemented

    __rmul__ = __mul__

    def right_scale(self, q: Quaternion) -> "QMatrix":
        """Entrywise ``A_rs q``; equals ``A`` composed with right multiplication by ``q``
        only when ``q`` is real."""
        return QMatrix(qmul(self.data, q.as_array()))

    def frobenius(self) -> float:
        return float(np.linalg.norm(self.data))

    def to_list(self) -> list:
        return self.data.tolist()

    def __repr__(self):
        return f"QMatrix(n={self.n})"


def _check_square(a: QMatrix, b: QMatrix):
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")


def adjoint(A: QMatrix) -> QMatrix:
    """Conjugate transpose, the unique operator with ``<x|Ay> = <A*x|y>``."""
    return A.adjoint()


# complex embedding --------------------------------------------------------


@dataclass(frozen=True)
class ComplexPairForm:
    """``A = A1 + A2 n`` with ``A1, A2`` complex matrices over the slice plane of ``m``."""

    A1: np.ndarray
    A2: np.ndarray
    frame: SliceFrame = field(default=DEFAULT_FRAME)

    @classmethod
    def of(cls, A: QMatrix, frame: SliceFrame = DEFAULT_FRAME) -> "ComplexPairForm":
        a1, a2 = frame.split(A.data)
        return cls(a1, a2, frame)

    def reassemble(self) -> QMatrix:
        return QMatrix(self.frame.join(self.A1, self.A2))


def complex_embed(A: QMatrix, frame: SliceFrame = DEFAULT_FRAME) -> np.ndarray:
    """The ``2n x 2n`` complex matrix ``[[A1, A2], [-conj(A2), conj(A1)]]``."""
    a1, a2 = frame.split(A.data)
    return np.block([[a1, a2], [-a2.conj(), a1.conj()]])


def from_complex_embedding(X: np.ndarray, frame: SliceFrame = DEFAULT_FRAME) -> QMatrix:
    """Inverse of :func:`complex_embed`, read from the top block row."""
    n = X.shape[0] // 2
    return QMatrix(frame.join(X[:n, :n], X[:n, n:]))


def embed_vector(x: QVector, frame: SliceFrame = DEFAULT_FRAME) -> np.ndarray:
    """``x = x1 + x2 n  ->  [x1; -conj(x2)]``, so that
    ``chi(A) embed_vector(x) == embed_vector(A x)`` and right multiplication
    by ``alpha + m beta`` becomes complex multiplication by ``alpha + 1j beta``."""
    x1, x2 = frame.split(x.data)
    return np.concatenate([x1, -x2.conj()])


def embed_columns(data: np.ndarray, frame: SliceFrame = DEFAULT_FRAME) -> np.ndarray:
    """Column-wise :func:`embed_vector` for an ``(n, k, 4)`` array."""
    x1, x2 = frame.split(data)
    return np.concatenate([x1, -x2.conj()], axis=0)


def unembed_columns(V: np.ndarray, frame: SliceFrame = DEFAULT_FRAME) -> np.ndarray:
    """Inverse of :func:`embed_columns`: ``(2n, k)`` complex to ``(n, k, 4)`` real."""
    n = V.shape[0] // 2
    return frame.join(V[:n], -V[n:].conj())


# operator classes ---------------------------------------------------------


def operator_norm(A: QMatrix, frame: SliceFrame = DEFAULT_FRAME) -> float:
    """``sup |Ax|`` over unit ``x``: the largest singular value of ``chi(A)``."""
    if A.n == 0:
        return 0.0
    return float(np.linalg.norm(complex_embed(A, frame), 2))


_FLAG_ORDER = ("normal", "self_adjoint", "anti_self_adjoint", "unitary", "positive")


@dataclass(frozen=True)
class Classification:
    """Operator-class flags with the residual behind each one."""

    flags: frozenset
    residuals: dict
    tol: float

    def __contains__(self, flag: str) -> bool:
        return flag in self.flags

    def __iter__(self):
        return iter(f for f in _FLAG_ORDER if f in self.flags)

    def to_dict(self) -> dict:
        return {
            "flags": [f for f in _FLAG_ORDER if f in self.flags],
            "residuals": dict(self.residuals),
            "tol": self.tol,
        }


def classify(A: QMatrix, tol: float = DEFAULT_TOL) -> Classification:
    """Residual tests for the operator classes.

    Residuals are operator norms; the normality residual is compared against
    ``tol * max(1, |A|^2)``, the (anti) self-adjointness residuals against
    ``tol * max(1, |A|)``, and unitarity against ``tol``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    n = A.n
    Ah = A.adjoint()
    eye = QMatrix.identity(n)
    scale = max(1.0, operator_norm(A))
    r = {
        "normal": operator_norm(Ah @ A - A @ Ah),
        "self_adjoint": operator_norm(Ah - A),
        "anti_self_adjoint": operator_norm(Ah + A),
        "unitary": operator_norm(A @ Ah - eye) + operator_norm(Ah @ A - eye),
    }
    flags = set()
    if r["normal"] <= tol * scale**2:
        flags.add("normal")
    if r["self_adjoint"] <= tol * scale:
        flags.add("self_adjoint")
        herm = complex_embed(A)
        lam_min = float(np.linalg.eigvalsh(0.5 * (herm + herm.conj().T))[0]) if n else 0.0
        r["min_eigenvalue"] = lam_min
        if lam_min >= -tol * scale:
            flags.add("positive")
    if r["anti_self_adjoint"] <= tol * scale:
        flags.add("anti_self_adjoint")
    if r["unitary"] <= tol:
        flags.add("unitary")
    return Classification(frozenset(flags), r, tol)


def delta(A: QMatrix, q: Quaternion) -> QMatrix:
    """``A^2 - A (q + conj q) + |q|^2 I``; depends on ``q`` only through its class."""
    two_re = 2.0 * q.real
    return A @ A - A * two_re + QMatrix.identity(A.n) * q.norm2()


def smallest_singular_value(A: QMatrix, frame: SliceFrame = DEFAULT_FRAME) -> float:
    if A.n == 0:
        return 0.0
    return float(np.linalg.svd(complex_embed(A, frame), compute_uv=False)[-1])


def positive_inverse_sqrt(A: QMatrix, tol: float = DEFAULT_TOL) -> QMatrix:
    """``A^{-1/2}`` for self-adjoint positive definite ``A``.

    Computed from the Hermitian eigendecomposition of ``chi(A)``; raises
    :class:`NotPositiveError` if ``A`` is not self-adjoint or has an
    eigenvalue below ``tol``.
    """
    scale = max(1.0, A.frobenius())
    asym = (A.adjoint() - A).frobenius()
    if asym > tol * scale:
        raise NotPositiveError(f"matrix is not self-adjoint (|A* - A| = {asym:.3g})")
    X = complex_embed(A)
    X = 0.5 * (X + X.conj().T)
    w, V = np.linalg.eigh(X)
    if w.size and w[0] < tol:
        raise NotPositiveError(f"matrix is not positive definite (smallest eigenvalue {w[0]:.3g})")
    B = (V * (1.0 / np.sqrt(w))) @ V.conj().T
    return from_complex_embedding(B)


def z_transform(T: QMatrix) -> QMatrix:
    """``Z_T = T (I + T*T)^{-1/2}``, a strict contraction."""
    return T @ positive_inverse_sqrt(QMatrix.identity(T.n) + T.adjoint() @ T)


def inverse_z_transform(Z: QMatrix) -> QMatrix:
    """``T = Z (I - Z*Z)^{-1/2}``; inverts :func:`z_transform`."""
    return Z @ positive_inverse_sqrt(QMatrix.identity(Z.n) - Z.adjoint() @ Z)


def inverse(A: QMatrix) -> QMatrix:
    return from_complex_embedding(np.linalg.inv(complex_embed(A)))


def max_abs(A: QMatrix) -> float:
    return float(np.max(qabs(A.data))) if A.n else 0.0
