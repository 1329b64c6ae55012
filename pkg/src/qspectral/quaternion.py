"""Quaternion scalars, slice complex planes and similarity classes.

Scalars are :class:`Quaternion` values; bulk data (vectors, matrices) are
real numpy arrays whose last axis holds the ``(w, x, y, z)`` components.
The array helpers :func:`qmul`, :func:`qconj` and :func:`qabs` broadcast
over leading axes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

DEFAULT_TOL = 1e-10


def qmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Hamilton product of quaternion arrays, broadcasting over leading axes."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    a0, a1, a2, a3 = np.moveaxis(a, -1, 0)
    b0, b1, b2, b3 = np.moveaxis(b, -1, 0)
    return np.stack(
        [
            a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
            a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
        ],
        axis=-1,
    )


def qmatmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Quaternion matrix product of ``(..., r, s, 4)`` and ``(..., s, t, 4)`` arrays.

    Same sign pattern as :func:`qmul`, with each scalar product replaced by
    a real matrix product of component slices.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    a0, a1, a2, a3 = (a[..., c] for c in range(4))
    b0, b1, b2, b3 = (b[..., c] for c in range(4))
    return np.stack(
        [
            a0 @ b0 - a1 @ b1 - a2 @ b2 - a3 @ b3,
            a0 @ b1 + a1 @ b0 + a2 @ b3 - a3 @ b2,
            a0 @ b2 - a1 @ b3 + a2 @ b0 + a3 @ b1,
            a0 @ b3 + a1 @ b2 - a2 @ b1 + a3 @ b0,
        ],
        axis=-1,
    )


def qconj(a: np.ndarray) -> np.ndarray:
    out = np.array(a, dtype=float, copy=True)
    out[..., 1:] *= -1.0
    return out


def qabs(a: np.ndarray) -> np.ndarray:
    return np.sqrt(np.sum(np.square(a), axis=-1))


@dataclass(frozen=True)
class Quaternion:
    """A real quaternion ``w + x i + y j + z k``.

    Examples
    --------
    >>> i, j = Quaternion(0, 1, 0, 0), Quaternion(0, 0, 1, 0)
    >>> i * j
    Quaternion(w=0.0, x=0.0, y=0.0, z=1.0)
    >>> abs(Quaternion(1, 2, 2, 4))
    5.0
    """

    w: float = 0.0
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    def __post_init__(self):
        for name in ("w", "x", "y", "z"):
            object.__setattr__(self, name, float(getattr(self, name)))

    @classmethod
    def from_array(cls, a) -> "Quaternion":
        a = np.asarray(a, dtype=float)
        if a.shape != (4,):
            raise ValueError(f"expected 4 components, got shape {a.shape}")
        return cls(*a)

    @classmethod
    def real_scalar(cls, r: float) -> "Quaternion":
        return cls(r, 0.0, 0.0, 0.0)

    def as_array(self) -> np.ndarray:
        return np.array([self.w, self.x, self.y, self.z])

    def to_list(self) -> list:
        return [self.w, self.x, self.y, self.z]

    @property
    def real(self) -> float:
        return self.w

    @property
    def imag(self) -> "Quaternion":
        return Quaternion(0.0, self.x, self.y, self.z)

    @property
    def imag_norm(self) -> float:
        return math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)

    def conj(self) -> "Quaternion":
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    def norm2(self) -> float:
        return self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z

    def __abs__(self) -> float:
        return math.sqrt(self.norm2())

    def inverse(self) -> "Quaternion":
        n2 = self.norm2()
        if n2 == 0.0:
            raise ZeroDivisionError("zero quaternion has no inverse")
        c = self.conj()
        return Quaternion(c.w / n2, c.x / n2, c.y / n2, c.z / n2)

    def isclose(self, other: "Quaternion", tol: float = DEFAULT_TOL) -> bool:
        scale = 1.0 + max(abs(self), abs(_as_quaternion(other)))
        return abs(self - other) <= tol * scale

    def __neg__(self) -> "Quaternion":
        return Quaternion(-self.w, -self.x, -self.y, -self.z)

    def __add__(self, other) -> "Quaternion":
        o = _as_quaternion(other)
        return Quaternion(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)

    __radd__ = __add__

    def __sub__(self, other) -> "Quaternion":
        o = _as_quaternion(other)
        return Quaternion(self.w - o.w, self.x - o.x, self.y - o.y, self.z - o.z)

    def __rsub__(self, other) -> "Quaternion":
        return _as_quaternion(other) - self

    def __mul__(self, other) -> "Quaternion":
        if isinstance(other, (int, float)):
            return Quaternion(self.w * other, self.x * other, self.y * other, self.z * other)
        if not isinstance(other, Quaternion):
            return NotImplemented
        return multiply(self, other)

    def __rmul__(self, other) -> "Quaternion":
        if isinstance(other, (int, float)):
            return self * other
        return NotImplemented

    def __truediv__(self, other) -> "Quaternion":
        if isinstance(other, (int, float)):
            return Quaternion(self.w / other, self.x / other, self.y / other, self.z / other)
        return NotImplemented


def _as_quaternion(value) -> Quaternion:
    if isinstance(value, Quaternion):
        return value
    if isinstance(value, (int, float)):
        return Quaternion.real_scalar(value)
    raise TypeError(f"cannot interpret {type(value).__name__} as a quaternion")


ONE = Quaternion(1.0, 0.0, 0.0, 0.0)
I = Quaternion(0.0, 1.0, 0.0, 0.0)
J = Quaternion(0.0, 0.0, 1.0, 0.0)
K = Quaternion(0.0, 0.0, 0.0, 1.0)


def multiply(p: Quaternion, q: Quaternion) -> Quaternion:
    """Hamilton product ``p q``."""
    return Quaternion(
        p.w * q.w - p.x * q.x - p.y * q.y - p.z * q.z,
        p.w * q.x + p.x * q.w + p.y * q.z - p.z * q.y,
        p.w * q.y - p.x * q.z + p.y * q.w + p.z * q.x,
        p.w * q.z + p.x * q.y - p.y * q.x + p.z * q.w,
    )


class UnitImaginary:
    """A point of the unit sphere of imaginary quaternions.

    The input is normalized. Inputs with a real part, or with an imaginary
    part shorter than ``1e-8``, are rejected.
    """

    __slots__ = ("_q",)

    def __init__(self, value):
        q = value.q if isinstance(value, UnitImaginary) else _coerce(value)
        im = q.imag_norm
        if im < 1e-8:
            raise ValueError(f"imaginary part too small to define a unit imaginary: |Im| = {im:.3g}")
        if abs(q.w) > 1e-12 * max(1.0, abs(q)):
            raise ValueError(f"unit imaginary must have zero real part, got Re = {q.w:.3g}")
        self._q = Quaternion(0.0, q.x / im, q.y / im, q.z / im)

    @property
    def q(self) -> Quaternion:
        return self._q

    @property
    def vector(self) -> np.ndarray:
        return self._q.as_array()[1:]

    def as_array(self) -> np.ndarray:
        return self._q.as_array()

    def __eq__(self, other):
        return isinstance(other, UnitImaginary) and self._q == other._q

    def __hash__(self):
        return hash(self._q)

    def __repr__(self):
        return f"UnitImaginary({self._q.x!r}, {self._q.y!r}, {self._q.z!r})"


def _coerce(value) -> Quaternion:
    if isinstance(value, Quaternion):
        return value
    return Quaternion.from_array(value)


@dataclass(frozen=True)
class SliceComplex:
    """The element ``alpha + m beta`` of the slice plane of ``m``."""

    alpha: float
    beta: float
    m: UnitImaginary

    def to_quaternion(self) -> Quaternion:
        u = self.m.q
        return Quaternion(self.alpha, self.beta * u.x, self.beta * u.y, self.beta * u.z)

    def to_complex(self) -> complex:
        return complex(self.alpha, self.beta)

    @classmethod
    def from_complex(cls, z: complex, m: UnitImaginary) -> "SliceComplex":
        return cls(float(z.real), float(z.imag), m)

    def conj(self) -> "SliceComplex":
        return SliceComplex(self.alpha, -self.beta, self.m)

    def __add__(self, other: "SliceComplex") -> "SliceComplex":
        _same_plane(self, other)
        return SliceComplex(self.alpha + other.alpha, self.beta + other.beta, self.m)

    def __mul__(self, other: "SliceComplex") -> "SliceComplex":
        _same_plane(self, other)
        return SliceComplex.from_complex(self.to_complex() * other.to_complex(), self.m)


def _same_plane(a: SliceComplex, b: SliceComplex):
    if a.m != b.m:
        raise ValueError("slice complex numbers live in different planes")


def class_representative(q: Quaternion, m: UnitImaginary) -> SliceComplex:
    """The unique point of the similarity class ``[q]`` in the closed upper
    half of the slice plane of ``m``: ``Re(q) + m |Im(q)|``."""
    return SliceComplex(q.real, q.imag_norm, m)


def class_distance(p: Quaternion, q: Quaternion) -> float:
    """Distance between the similarity spheres ``[p]`` and ``[q]``, measured
    between their upper-half-plane representatives."""
    return math.hypot(p.real - q.real, p.imag_norm - q.imag_norm)


def same_class(p: Quaternion, q: Quaternion, tol: float = DEFAULT_TOL) -> bool:
    if tol <= 0:
        raise ValueError("tol must be positive")
    return abs(p.real - q.real) <= tol and abs(p.imag_norm - q.imag_norm) <= tol


def slice_membership(q: Quaternion, m: UnitImaginary, tol: float = DEFAULT_TOL) -> bool:
    """Whether ``q`` lies in the slice plane of ``m`` up to ``tol``.

    Equivalent to ``q`` commuting with every element of that plane.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    v = q.as_array()[1:]
    u = m.vector
    off = v - np.dot(v, u) * u
    return float(np.linalg.norm(off)) <= tol


class SliceFrame:
    """A pair ``(m, n)`` of orthogonal unit imaginaries.

    ``{1, m, n, mn}`` is an orthonormal real basis of H, so every quaternion
    splits uniquely as ``z1 + z2 n`` with ``z1, z2`` in the slice plane of
    ``m``. Slice-plane values are exchanged with numpy as Python complex
    numbers through ``alpha + m beta <-> alpha + 1j beta``.
    """

    __slots__ = ("m", "n", "_basis")

    def __init__(self, m=None, n=None):
        self.m = UnitImaginary(I if m is None else m)
        if n is None:
            n = _default_partner(self.m)
        self.n = UnitImaginary(n)
        dot = float(np.dot(self.m.vector, self.n.vector))
        if abs(dot) > 1e-12:
            raise ValueError(f"frame vectors m and n must be orthogonal, <m,n> = {dot:.3g}")
        mn = np.cross(self.m.vector, self.n.vector)
        # rows: components of 1, m, n, mn in the standard basis
        self._basis = np.array(
            [[1.0, 0.0, 0.0, 0.0], [0.0, *self.m.vector], [0.0, *self.n.vector], [0.0, *mn]]
        )

    @property
    def mn(self) -> Quaternion:
        return Quaternion.from_array(self._basis[3])

    def coords(self, a: np.ndarray) -> np.ndarray:
        """Components of quaternion array ``a`` along ``(1, m, n, mn)``."""
        return np.asarray(a, dtype=float) @ self._basis.T

    def from_coords(self, c: np.ndarray) -> np.ndarray:
        return np.asarray(c, dtype=float) @ self._basis

    def split(self, a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """``a = z1 + z2 n`` with complex arrays ``z1, z2``."""
        c = self.coords(a)
        return c[..., 0] + 1j * c[..., 1], c[..., 2] + 1j * c[..., 3]

    def join(self, z1, z2) -> np.ndarray:
        z1 = np.asarray(z1, dtype=complex)
        z2 = np.asarray(z2, dtype=complex)
        c = np.stack([z1.real, z1.imag, z2.real, z2.imag], axis=-1)
        return self.from_coords(c)

    def plane_value(self, a: np.ndarray) -> np.ndarray:
        """Complex image of the slice-plane part of ``a`` (drops the ``n`` part)."""
        return self.split(a)[0]

    def off_plane(self, a: np.ndarray) -> np.ndarray:
        """Magnitude of the part of ``a`` orthogonal to the slice plane."""
        c = self.coords(a)
        return np.hypot(c[..., 2], c[..., 3])

    def embed(self, z) -> np.ndarray:
        """Quaternion array for complex values ``z`` viewed in the slice plane."""
        return self.join(z, np.zeros_like(np.asarray(z, dtype=complex)))

    def to_dict(self) -> dict:
        return {"m": self.m.q.to_list(), "n": self.n.q.to_list()}

    def __eq__(self, other):
        return isinstance(other, SliceFrame) and self.m == other.m and self.n == other.n

    def __hash__(self):
        return hash((self.m, self.n))

    def __repr__(self):
        return f"SliceFrame(m={self.m!r}, n={self.n!r})"


def _default_partner(m: UnitImaginary) -> Quaternion:
    # first of j, k, i with enough component orthogonal to m
    u = m.vector
    for cand in (np.array([0.0, 1.0, 0.0]), np.array([0.0, 0.0, 1.0]), np.array([1.0, 0.0, 0.0])):
        w = cand - np.dot(cand, u) * u
        if np.linalg.norm(w) > 0.5:
            w /= np.linalg.norm(w)
            return Quaternion(0.0, *w)
    raise AssertionError("unreachable: some axis is far from m")
