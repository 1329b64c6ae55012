"""Random quaternionic test objects (Gaussian components, numpy Generator)."""
from __future__ import annotations

import numpy as np

from .qoperator import QMatrix, positive_inverse_sqrt
from .qspace import QVector
from .quaternion import Quaternion, SliceFrame


def as_rng(seed=None) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def random_quaternion(rng, scale: float = 1.0) -> Quaternion:
    return Quaternion.from_array(as_rng(rng).normal(scale=scale, size=4))


def random_nonzero_quaternion(rng) -> Quaternion:
    rng = as_rng(rng)
    while True:
        q = random_quaternion(rng)
        if abs(q) > 1e-3:
            return q


def random_qvector(n: int, rng) -> QVector:
    return QVector(as_rng(rng).normal(size=(n, 4)))


def random_qmatrix(n: int, rng) -> QMatrix:
    return QMatrix(as_rng(rng).normal(size=(n, n, 4)))


def random_unitary(n: int, rng) -> QMatrix:
    """Unitary polar factor ``G (G*G)^{-1/2}`` of a Gaussian quaternion matrix."""
    G = random_qmatrix(n, rng)
    return G @ positive_inverse_sqrt(G.adjoint() @ G)


def random_normal(n: int, rng, eigenvalues=None) -> tuple[QMatrix, list[Quaternion]]:
    """``U diag(lambda) U*`` with a random unitary ``U``.

    ``eigenvalues`` defaults to Gaussian quaternions. Returns the matrix and
    the planted diagonal.
    """
    rng = as_rng(rng)
    if eigenvalues is None:
        eigenvalues = [random_quaternion(rng) for _ in range(n)]
    U = random_unitary(n, rng)
    return U @ QMatrix.diag(eigenvalues) @ U.adjoint(), list(eigenvalues)


def random_structured_normal(n: int, rng, kind: str) -> tuple[QMatrix, list[Quaternion]]:
    """Planted normal matrices exercising the eigenvalue clustering paths.

    ``kind`` is one of ``generic``, ``repeated`` (similar eigenvalues, hence
    one class with multiplicity), ``real`` (real spectrum with repeats),
    ``anti`` (purely imaginary spectrum) or ``mixed``.
    """
    rng = as_rng(rng)
    if kind == "generic":
        lam = [random_quaternion(rng) for _ in range(n)]
    elif kind == "repeated":
        pool = [random_quaternion(rng) for _ in range(max(1, n // 2))]
        lam = []
        for k in range(n):
            base = pool[k % len(pool)]
            s = random_nonzero_quaternion(rng)
            lam.append(s.inverse() * base * s)
    elif kind == "real":
        pool = rng.normal(size=max(1, n // 2 + 1))
        lam = [Quaternion.real_scalar(pool[rng.integers(len(pool))]) for _ in range(n)]
    elif kind == "anti":
        lam = []
        for _ in range(n):
            v = rng.normal(size=3)
            lam.append(Quaternion(0.0, *v))
    elif kind == "mixed":
        lam = [
            random_quaternion(rng) if rng.random() < 0.5 else Quaternion.real_scalar(rng.normal())
            for _ in range(n)
        ]
    else:
        raise ValueError(f"unknown kind {kind!r}")
    return random_normal(n, rng, lam)


def random_slice_complex(n: int, rng) -> np.ndarray:
    rng = as_rng(rng)
    return rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))


def random_frame(rng) -> SliceFrame:
    rng = as_rng(rng)
    m = rng.normal(size=3)
    m /= np.linalg.norm(m)
    v = rng.normal(size=3)
    v -= np.dot(v, m) * m
    v /= np.linalg.norm(v)
    return SliceFrame(Quaternion(0.0, *m), Quaternion(0.0, *v))


def random_polynomial(T: QMatrix, rng, J: QMatrix | None = None, degree: int = 3) -> QMatrix:
    """Random noncommutative polynomial in ``T`` and ``T*`` up to ``degree``.

    Each word gets a coefficient ``a + b J`` (slice-plane scalars acting
    through ``J``) when ``J`` is given, otherwise a real coefficient.
    """
    rng = as_rng(rng)
    n = T.n
    eye = QMatrix.identity(n)
    letters = (T, T.adjoint())
    words = [eye]
    frontier = [eye]
    for _ in range(degree):
        frontier = [w @ a for w in frontier for a in letters]
        words.extend(frontier)
    S = QMatrix.zeros(n)
    for w in words:
        a, b = rng.normal(size=2)
        S = S + w * float(a)
        if J is not None:
            S = S + (J @ w) * float(b)
    return S
