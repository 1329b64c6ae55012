"""The right quaternionic Hilbert space of quaternion column vectors.

Scalars act on the right: ``(x q)_j = x_j q``. The inner product is
conjugate-linear in the first slot and right-linear in the second,
``<u|v> = sum_j conj(u_j) v_j``.
"""
from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .quaternion import DEFAULT_TOL, ONE, I, J, K, Quaternion, qabs, qconj, qmul


class RankDeficiencyError(ValueError):
    """Raised when a family handed to Gram-Schmidt is right-linearly dependent."""

    def __init__(self, index: int, residual: float):
        super().__init__(
            f"vector {index} is right-linearly dependent on its predecessors "
            f"(relative residual {residual:.3g})"
        )
        self.index = index
        self.residual = residual


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


class QVector:
    """Element of H^n, stored as an ``(n, 4)`` real array."""

    __slots__ = ("data",)

    def __init__(self, data):
        if isinstance(data, QVector):
            data = data.data
        arr = np.asarray(data, dtype=float)
        if arr.ndim != 2 or arr.shape[1] != 4:
            raise ValueError(f"QVector data must have shape (n, 4), got {arr.shape}")
        self.data = _readonly(arr)

    @classmethod
    def from_quaternions(cls, entries: Iterable[Quaternion]) -> "QVector":
        return cls(np.array([q.as_array() for q in entries]).reshape(-1, 4))

    @classmethod
    def unit(cls, k: int, n: int, q: Quaternion = ONE) -> "QVector":
        """The vector ``e_k q`` of dimension ``n`` (0-based ``k``)."""
        a = np.zeros((n, 4))
        a[k] = q.as_array()
        return cls(a)

    @classmethod
    def zeros(cls, n: int) -> "QVector":
        return cls(np.zeros((n, 4)))

    @property
    def dim(self) -> int:
        return self.data.shape[0]

    def __len__(self):
        return self.dim

    def __getitem__(self, k: int) -> Quaternion:
        return Quaternion.from_array(self.data[k])

    def entries(self) -> list[Quaternion]:
        return [Quaternion.from_array(row) for row in self.data]

    def to_list(self) -> list:
        return self.data.tolist()

    def norm(self) -> float:
        return float(np.linalg.norm(self.data))

    def right_mul(self, q: Quaternion) -> "QVector":
        return QVector(qmul(self.data, q.as_array()))

    def __mul__(self, q):
        if isinstance(q, (int, float)):
            return QVector(self.data * q)
        if isinstance(q, Quaternion):
            return self.right_mul(q)
        return NotImplemented

    def __rmul__(self, r):
        # Real scalars are central; quaternions must act on the right.
        if isinstance(r, (int, float)):
            return QVector(self.data * r)
        return NotImplemented

    def __truediv__(self, r: float) -> "QVector":
        return QVector(self.data / r)

    def __add__(self, other: "QVector") -> "QVector":
        _check_dims(self, other)
        return QVector(self.data + other.data)

    def __sub__(self, other: "QVector") -> "QVector":
        _check_dims(self, other)
        return QVector(self.data - other.data)

    def __neg__(self) -> "QVector":
        return QVector(-self.data)

    def __repr__(self):
        return f"QVector({self.data.tolist()!r})"


def _check_dims(u: QVector, v: QVector):
    if u.dim != v.dim:
        raise ValueError(f"dimension mismatch: {u.dim} vs {v.dim}")


def inner(u: QVector, v: QVector) -> Quaternion:
    """``<u|v> = sum_j conj(u_j) v_j``."""
    _check_dims(u, v)
    return Quaternion.from_array(np.sum(qmul(qconj(u.data), v.data), axis=0))


_POLARIZATION_UNITS = (ONE, I, J, K)


def inner_via_polarization(u: QVector, v: QVector) -> Quaternion:
    """Recover ``<u|v>`` from norms alone:
    ``4 <u|v> = sum_{l in 1,i,j,k} (|u l + v|^2 - |u l - v|^2) l``.
    """
    _check_dims(u, v)
    acc = np.zeros(4)
    for unit in _POLARIZATION_UNITS:
        ul = u.right_mul(unit)
        weight = (ul + v).norm() ** 2 - (ul - v).norm() ** 2
        acc += weight * unit.as_array()
    return Quaternion.from_array(acc / 4.0)


class HilbertBasis:
    """An orthonormal family ``z_1 .. z_k`` in H^n.

    ``columns`` is the ``(n, k, 4)`` array whose columns are the members,
    so that ``columns @ c`` synthesizes ``sum_a z_a c_a``.
    """

    __slots__ = ("columns",)

    def __init__(self, vectors):
        if isinstance(vectors, np.ndarray):
            cols = np.asarray(vectors, dtype=float)
        else:
            vectors = list(vectors)
            if not vectors:
                raise ValueError("a Hilbert basis needs at least one vector")
            cols = np.stack([QVector(v).data for v in vectors], axis=1)
        if cols.ndim != 3 or cols.shape[2] != 4:
            raise ValueError(f"basis columns must have shape (n, k, 4), got {cols.shape}")
        self.columns = _readonly(cols)

    @classmethod
    def canonical(cls, n: int) -> "HilbertBasis":
        cols = np.zeros((n, n, 4))
        cols[np.arange(n), np.arange(n), 0] = 1.0
        return cls(cols)

    @property
    def dim(self) -> int:
        return self.columns.shape[0]

    def __len__(self):
        return self.columns.shape[1]

    def __getitem__(self, a: int) -> QVector:
        return QVector(self.columns[:, a])

    @property
    def vectors(self) -> list[QVector]:
        return [self[a] for a in range(len(self))]

    def gram(self) -> np.ndarray:
        """``(k, k, 4)`` array of ``<z_a|z_b>``."""
        return _qgram(self.columns)

    def orthonormality_defect(self) -> float:
        g = self.gram()
        g[..., 0] -= np.eye(len(self))
        return float(np.max(qabs(g))) if g.size else 0.0

    def coefficients(self, x: QVector) -> np.ndarray:
        """``(k, 4)`` array of ``<z_a|x>``."""
        if x.dim != self.dim:
            raise ValueError(f"dimension mismatch: basis {self.dim} vs vector {x.dim}")
        return np.sum(qmul(qconj(self.columns), x.data[:, None, :]), axis=0)

    def synthesize(self, coeffs) -> QVector:
        c = np.asarray(coeffs, dtype=float).reshape(len(self), 4)
        return QVector(np.sum(qmul(self.columns, c[None, :, :]), axis=1))

    def complement_residual(self, x: QVector) -> float:
        """Norm of the part of ``x`` orthogonal to every member."""
        return (x - self.synthesize(self.coefficients(x))).norm()

    def parseval_defect(self, x: QVector) -> float:
        return abs(x.norm() ** 2 - float(np.sum(self.coefficients(x) ** 2)))

    def expansion_defect(self, x: QVector, y: QVector) -> float:
        """``|<x|y> - sum_a <x|z_a><z_a|y>|``."""
        cx = qconj(self.coefficients(x))
        cy = self.coefficients(y)
        series = np.sum(qmul(cx, cy), axis=0)
        return float(qabs(inner(x, y).as_array() - series))

    def to_list(self) -> list:
        return [self[a].to_list() for a in range(len(self))]


def _qgram(cols: np.ndarray) -> np.ndarray:
    # <z_a|z_b> = sum_j conj(z_ja) z_jb
    zc = qconj(cols)
    return np.sum(qmul(zc[:, :, None, :], cols[:, None, :, :]), axis=0)


def _project_out(w: np.ndarray, basis: Sequence[np.ndarray]) -> np.ndarray:
    for z in basis:
        c = np.sum(qmul(qconj(z), w), axis=0)
        w = w - qmul(z, c)
    return w


def gram_schmidt(vectors: Sequence[QVector], tol: float = DEFAULT_TOL) -> HilbertBasis:
    """Right-linear modified Gram-Schmidt.

    Projections are subtracted as ``w - z <z|w>`` so the coefficients act on
    the right and the right span is preserved. A second sweep runs whenever
    the first leaves an overlap above ``1e-8``. A vector whose residual falls
    below ``tol`` times its original norm raises :class:`RankDeficiencyError`.
    """
    done: list[np.ndarray] = []
    for idx, v in enumerate(vectors):
        w0 = QVector(v).data
        norm0 = float(np.linalg.norm(w0))
        if norm0 == 0.0:
            raise RankDeficiencyError(idx, 0.0)
        w = _project_out(w0, done)
        wn = float(np.linalg.norm(w))
        if wn <= tol * norm0:
            raise RankDeficiencyError(idx, wn / norm0)
        overlap = max((float(qabs(np.sum(qmul(qconj(z), w), axis=0))) for z in done), default=0.0)
        if overlap > 1e-8 * wn:
            w = _project_out(w, done)
            wn = float(np.linalg.norm(w))
        done.append(w / wn)
    return HilbertBasis([QVector(z) for z in done])


def fourier_expand(x: QVector, basis: HilbertBasis) -> list[Quaternion]:
    """Coefficients ``c_a = <z_a|x>`` so that ``x = sum_a z_a c_a``."""
    return [Quaternion.from_array(c) for c in basis.coefficients(x)]


def left_multiply(q: Quaternion, x: QVector, basis: HilbertBasis) -> QVector:
    """Left multiplication induced by ``basis``: ``L_q x = sum_a z_a q <z_a|x>``."""
    c = basis.coefficients(x)
    return basis.synthesize(qmul(q.as_array(), c))
